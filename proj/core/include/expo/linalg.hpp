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

#ifndef EXPO_LINALG_HPP_
#define EXPO_LINALG_HPP_

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace expo {

// Row-major so that a matrix of sample points stores one point per row.
using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Ridge applied to every least-squares fit inside training.
inline constexpr double kDefaultRidge = 1e-6;

// Solves a x = b for symmetric positive definite a by Cholesky. When the
// factorization fails and jitter > 0, jitter is added to the diagonal and the
// factorization retried once. Throws NotPositiveDefinite otherwise.
Vector solve_spd(const Matrix& a, const Vector& b, double jitter = 0.0);

struct OlsSolution {
  Vector coefficients;  // intercept first, then one weight per feature
  double residual_mean = 0.0;

  double intercept() const { return coefficients(0); }
  auto slopes() const { return coefficients.tail(coefficients.size() - 1); }
};

// [1, points] with the constant column first.
Matrix augment(const Matrix& points);

// A factored least-squares problem on a fixed design. The design is
// augmented with an intercept column; the ridge penalty skips the intercept.
// Several target vectors may be fitted against one factorization.
class LeastSquares {
 public:
  LeastSquares(const Matrix& points, double ridge);

  OlsSolution fit(const Vector& targets) const;
  Vector residuals(const Vector& targets) const;

  // (I - H) v for the hat matrix H = X (X'X + ridge D)^-1 X'.
  Vector annihilate(const Vector& v) const;

  Eigen::Index samples() const { return design_.rows(); }
  Eigen::Index features() const { return design_.cols() - 1; }

 private:
  Vector solve_normal(const Vector& targets) const;

  Matrix design_;
  Eigen::LLT<Eigen::MatrixXd> factor_;
};

// Minimizes sum_j (targets_j - beta . [1, points_j])^2 + ridge |beta_{1..d}|^2.
// residual_mean excludes the penalty.
OlsSolution ols_fit(const Matrix& points, const Vector& targets, double ridge);

}  // namespace expo

#endif  // EXPO_LINALG_HPP_
