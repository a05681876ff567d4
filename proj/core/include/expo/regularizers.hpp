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

#ifndef EXPO_REGULARIZERS_HPP_
#define EXPO_REGULARIZERS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "expo/linalg.hpp"
#include "expo/model.hpp"
#include "expo/neighborhood.hpp"

namespace expo {

enum class RegularizerKind { kNone, kFidelity, kFidelity1d, kStability };

std::string to_string(RegularizerKind kind);
RegularizerKind parse_regularizer_kind(const std::string& name);

struct RegularizerConfig {
  RegularizerKind kind = RegularizerKind::kNone;
  double gamma = 0.0;
  // samples_m == 0 picks default_regularizer_samples at training time.
  NeighborhoodSpec neighborhood = {NeighborhoodSpec::Kind::kGaussian, 0.5, 0,
                                   0};
  double ridge = kDefaultRidge;

  bool active() const { return kind != RegularizerKind::kNone && gamma > 0.0; }
  void validate() const;
};

// Default sample count for a regularizer on d features: 5(d+1) for the full
// fidelity fit, 5 otherwise.
std::size_t default_regularizer_samples(RegularizerKind kind, std::size_t d);

// Loss and its gradient with respect to the function values that produced
// it. Rows of `gradient` align with the sampled points.
struct ResidualTerm {
  double loss = 0.0;
  Matrix gradient;        // m x outputs
  Vector anchor_gradient;  // outputs; nonzero for stability only
};

// Mean squared residual of the ridge least-squares fit of every output
// column of `predictions` on [1, design], summed over outputs. The gradient
// is exact: (2/m)(I - H)^2 y, which reduces to (2/m)(I - H) y at ridge 0.
ResidualTerm fidelity_term(const Matrix& design, const Matrix& predictions,
                           double ridge);

// (1/m) sum_j |predictions_j - anchor|^2 with gradients for both sides.
ResidualTerm stability_term(const Matrix& predictions, const Vector& anchor);

struct RegularizerResult {
  double loss = 0.0;
  Matrix points;           // sampled neighbors, m x d
  Matrix point_gradients;  // d loss / d f(points_j)
  Vector anchor_gradient;  // d loss / d f(x)
  std::size_t dimension = 0;  // perturbed coordinate (fidelity_1d only)
};

RegularizerResult fidelity_loss(const Predictor& model, const Vector& x,
                                const RegularizerConfig& config,
                                std::uint64_t counter = 0);
RegularizerResult fidelity_1d_loss(const Predictor& model, const Vector& x,
                                   const RegularizerConfig& config,
                                   std::uint64_t counter = 0);
RegularizerResult stability_loss(const Predictor& model, const Vector& x,
                                 const RegularizerConfig& config,
                                 std::uint64_t counter = 0);

// Dispatches on config.kind; kNone yields a zero loss with no points.
RegularizerResult regularizer_loss(const Predictor& model, const Vector& x,
                                   const RegularizerConfig& config,
                                   std::uint64_t counter = 0);

// Adds scale * d loss / d theta for a computed result into tape.
void accumulate_gradient(const Mlp& model, const Vector& x,
                         const RegularizerResult& result, double scale,
                         GradientTape& tape);

// Training path: evaluates the regularizer at every row of anchors (with
// counters[i] for row i) through a single stacked forward/backward pass and
// adds scale * d(sum of losses)/d theta into tape. Returns the summed loss.
double accumulate_regularizer(const Mlp& model, const Matrix& anchors,
                              std::span<const std::uint64_t> counters,
                              const RegularizerConfig& config, double scale,
                              GradientTape& tape);

}  // namespace expo

#endif  // EXPO_REGULARIZERS_HPP_
