// Copyright 2026 The expo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "expo/linalg.hpp"

#include <cmath>
#include <string>

#include "expo/error.hpp"

namespace expo {
namespace {

// Eigen's LLT only reports non-positive pivots; a rank-deficient Gram matrix
// usually produces a tiny positive pivot instead, so pivots are also checked
// against the scale of the diagonal.
bool factor_ok(const Eigen::LLT<Eigen::MatrixXd>& llt,
               const Eigen::MatrixXd& a) {
  if (llt.info() != Eigen::Success) return false;
  const double scale = a.diagonal().cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || !std::isfinite(scale)) return false;
  const Eigen::MatrixXd l = llt.matrixL();
  const double min_pivot = l.diagonal().minCoeff();
  return min_pivot * min_pivot > 1e-13 * scale;
}

Eigen::LLT<Eigen::MatrixXd> factor_spd(const Eigen::MatrixXd& a,
                                       double jitter) {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (factor_ok(llt, a)) return llt;
  if (jitter > 0.0) {
    Eigen::MatrixXd shifted = a;
    shifted.diagonal().array() += jitter;
    llt.compute(shifted);
    if (factor_ok(llt, shifted)) return llt;
  }
  throw Error(ErrorCode::kNotPositiveDefinite,
              "Cholesky failed on " + std::to_string(a.rows()) + "x" +
                  std::to_string(a.cols()) + " matrix (jitter " +
                  std::to_string(jitter) + ")");
}

}  // namespace

Vector solve_spd(const Matrix& a, const Vector& b, double jitter) {
  if (a.rows() != a.cols() || a.rows() != b.size() || a.rows() == 0) {
    throw Error(ErrorCode::kBadShape, "solve_spd expects n x n and length n");
  }
  const Eigen::MatrixXd dense = a;
  return factor_spd(dense, jitter).solve(b);
}

Matrix augment(const Matrix& points) {
  Matrix out(points.rows(), points.cols() + 1);
  out.col(0).setOnes();
  out.rightCols(points.cols()) = points;
  return out;
}

LeastSquares::LeastSquares(const Matrix& points, double ridge)
    : design_(augment(points)) {
  if (points.rows() < 1) {
    throw Error(ErrorCode::kBadShape, "least squares needs at least one row");
  }
  if (!(ridge >= 0.0)) {
    throw Error(ErrorCode::kBadParameter, "ridge must be nonnegative");
  }
  Eigen::MatrixXd gram = design_.transpose() * design_;
  gram.diagonal().tail(gram.rows() - 1).array() += ridge;
  factor_ = factor_spd(gram, 0.0);
}

Vector LeastSquares::solve_normal(const Vector& targets) const {
  if (targets.size() != design_.rows()) {
    throw Error(ErrorCode::kBadShape, "targets length must equal sample count");
  }
  return factor_.solve(design_.transpose() * targets);
}

OlsSolution LeastSquares::fit(const Vector& targets) const {
  OlsSolution out;
  out.coefficients = solve_normal(targets);
  const Vector r = targets - design_ * out.coefficients;
  out.residual_mean = r.squaredNorm() / static_cast<double>(r.size());
  return out;
}

Vector LeastSquares::residuals(const Vector& targets) const {
  return targets - design_ * solve_normal(targets);
}

Vector LeastSquares::annihilate(const Vector& v) const {
  return residuals(v);
}

OlsSolution ols_fit(const Matrix& points, const Vector& targets,
                    double ridge) {
  return LeastSquares(points, ridge).fit(targets);
}

}  // namespace expo
