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

// Independent reference implementations used by the tests. Nothing here calls
// into the library's solvers; everything is plain loops over std::vector.
#ifndef EXPO_TESTS_ORACLES_HPP_
#define EXPO_TESTS_ORACLES_HPP_

#include <cmath>
#include <cstddef>
#include <algorithm>
#include <functional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "expo/linalg.hpp"
#include "expo/model.hpp"

namespace oracle {

using Rows = std::vector<std::vector<double>>;

inline Rows to_rows(const expo::Matrix& m) {
  Rows out(static_cast<std::size_t>(m.rows()),
           std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
    }
  }
  return out;
}

inline std::vector<double> to_std(const expo::Vector& v) {
  return {v.data(), v.data() + v.size()};
}

// Gaussian elimination with partial pivoting.
inline std::vector<double> gauss_solve(Rows a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a[i][k]) > std::abs(a[pivot][k])) pivot = i;
    }
    if (a[pivot][k] == 0.0) throw std::runtime_error("singular");
    std::swap(a[k], a[pivot]);
    std::swap(b[k], b[pivot]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a[k][j] * x[j];
    x[k] = s / a[k][k];
  }
  return x;
}

// Design with a leading column of ones.
inline Rows augmented(const Rows& points) {
  Rows z;
  for (const auto& p : points) {
    std::vector<double> row{1.0};
    row.insert(row.end(), p.begin(), p.end());
    z.push_back(std::move(row));
  }
  return z;
}

// Normal equations (Z'Z + ridge D) beta = Z'y, D = diag(0, 1, ..., 1).
inline std::vector<double> normal_equations(const Rows& points,
                                            const std::vector<double>& y,
                                            double ridge) {
  const Rows z = augmented(points);
  const std::size_t p = z.front().size();
  Rows gram(p, std::vector<double>(p, 0.0));
  std::vector<double> rhs(p, 0.0);
  for (std::size_t r = 0; r < z.size(); ++r) {
    for (std::size_t i = 0; i < p; ++i) {
      rhs[i] += z[r][i] * y[r];
      for (std::size_t j = 0; j < p; ++j) gram[i][j] += z[r][i] * z[r][j];
    }
  }
  for (std::size_t i = 1; i < p; ++i) gram[i][i] += ridge;
  return gauss_solve(gram, rhs);
}

// (1/m) y'(I - H) y with H = Z (Z'Z)^-1 Z' built entry by entry.
inline double hat_residual(const Rows& points, const std::vector<double>& y) {
  const Rows z = augmented(points);
  const std::size_t m = z.size();
  const std::size_t p = z.front().size();
  Rows gram(p, std::vector<double>(p, 0.0));
  for (const auto& row : z) {
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) gram[i][j] += row[i] * row[j];
    }
  }
  // Columns of (Z'Z)^-1 via one solve per unit vector.
  Rows inv(p, std::vector<double>(p));
  for (std::size_t c = 0; c < p; ++c) {
    std::vector<double> e(p, 0.0);
    e[c] = 1.0;
    const auto col = gauss_solve(gram, e);
    for (std::size_t r = 0; r < p; ++r) inv[r][c] = col[r];
  }
  double total = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      double h = 0.0;
      for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) h += z[a][i] * inv[i][j] * z[b][j];
      }
      const double identity = a == b ? 1.0 : 0.0;
      total += y[a] * (identity - h) * y[b];
    }
  }
  return total / static_cast<double>(m);
}

// Straight-line evaluation of a dense network.
inline std::vector<double> mlp_forward(const expo::Mlp& model,
                                       std::vector<double> h) {
  const auto& layers = model.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& w = layers[l].weights;
    std::vector<double> next(static_cast<std::size_t>(w.rows()));
    for (Eigen::Index o = 0; o < w.rows(); ++o) {
      double s = layers[l].bias(o);
      for (Eigen::Index i = 0; i < w.cols(); ++i) {
        s += w(o, i) * h[static_cast<std::size_t>(i)];
      }
      if (l + 1 < layers.size()) {
        s = model.activation() == expo::Activation::kTanh ? std::tanh(s)
                                                          : std::max(0.0, s);
      }
      next[static_cast<std::size_t>(o)] = s;
    }
    h = std::move(next);
  }
  return h;
}

// Central differences of a scalar function of a flat vector.
inline std::vector<double> central_difference(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> at, double step = 1e-5) {
  std::vector<double> grad(at.size());
  for (std::size_t i = 0; i < at.size(); ++i) {
    const double keep = at[i];
    at[i] = keep + step;
    const double up = f(at);
    at[i] = keep - step;
    const double down = f(at);
    at[i] = keep;
    grad[i] = (up - down) / (2.0 * step);
  }
  return grad;
}

// Max relative error with a floor on the denominator so that entries near
// zero are compared absolutely.
inline double max_relative_error(const std::vector<double>& a,
                                 const std::vector<double>& b,
                                 double floor = 1e-6) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max({std::abs(a[i]), std::abs(b[i]), floor});
    worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
  }
  return worst;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace oracle

#endif  // EXPO_TESTS_ORACLES_HPP_
