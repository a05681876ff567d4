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

#ifndef EXPO_BOUNDS_HPP_
#define EXPO_BOUNDS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "expo/linalg.hpp"
#include "expo/model.hpp"
#include "expo/neighborhood.hpp"

namespace expo {

// Moment-based residual of the best affine fit:
//   E[f^2] - E[f z]' E[z z']^-1 E[f z],  z = [1, x'],
// with all three moments taken as equal-weight averages over `points`
// (shared samples). Clipped at 0.
double expected_residual_on(const Predictor& model, const Matrix& points,
                            std::size_t output_index = 0);

// Monte Carlo over N_x with mc_samples draws (spec.samples_m is ignored).
double expected_residual(const Predictor& model, const Vector& x,
                         const NeighborhoodSpec& spec, std::size_t mc_samples,
                         std::size_t output_index = 0,
                         std::uint64_t counter = 0);

// Population variance of f over the points.
double local_variance_on(const Predictor& model, const Matrix& points,
                         std::size_t output_index = 0);

struct LocalResiduals {
  std::vector<double> residuals;
  std::vector<double> variances;
};

// Residual and local variance at every row of `anchors`, each pair computed
// on one shared Monte-Carlo sample (counter = row index).
LocalResiduals local_residuals(const Predictor& model, const Matrix& anchors,
                               const NeighborhoodSpec& spec,
                               std::size_t mc_samples,
                               std::size_t output_index = 0);

// Empirical C(sigma): max local variance over the anchors.
double estimate_C(const Predictor& model, const Matrix& anchors,
                  const NeighborhoodSpec& spec, std::size_t mc_samples,
                  std::size_t output_index = 0);

// sqrt(C^2 ln(1/delta) / (2n)).
double hoeffding_slack(double C, double delta, std::size_t n);

// mean_train_residual + hoeffding_slack(C, delta, n). BadParameter unless
// 0 < delta < 1, C >= 0 and n >= 1.
double hoeffding_bound(double mean_train_residual, double C, double delta,
                       std::size_t n);

struct BoundReport {
  double mean_train_residual = 0.0;
  double variance_bound_C = 0.0;
  double delta = 0.05;
  double slack = 0.0;
  double bound_value = 0.0;
  std::size_t n = 0;
  double mean_test_residual = 0.0;  // filled when test anchors are given
  std::size_t n_test = 0;
};

BoundReport bound_report(const Predictor& model, const Matrix& train_anchors,
                         const Matrix& test_anchors,
                         const NeighborhoodSpec& spec, std::size_t mc_samples,
                         double delta, std::size_t output_index = 0);

struct CoverageResult {
  std::size_t resamples = 0;
  std::size_t violations = 0;
  double violation_rate = 0.0;
  double delta = 0.0;
};

// Repeatedly splits a pool of precomputed per-point residuals/variances into
// n_train training points and the remainder, builds the bound from the
// training side (C = max training variance) and counts splits whose mean
// held-out residual exceeds it.
CoverageResult empirical_coverage(const LocalResiduals& pool,
                                  std::size_t n_train, double delta,
                                  std::size_t resamples, std::uint64_t seed);

}  // namespace expo

#endif  // EXPO_BOUNDS_HPP_
