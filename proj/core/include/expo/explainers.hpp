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

#ifndef EXPO_EXPLAINERS_HPP_
#define EXPO_EXPLAINERS_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>

#include "expo/linalg.hpp"
#include "expo/model.hpp"
#include "expo/neighborhood.hpp"

namespace expo {

struct Explanation {
  enum class Kind { kLocalLinear, kSaliency };

  Kind kind = Kind::kLocalLinear;
  double intercept = 0.0;  // local_linear only
  Vector coefficients;     // slopes for local_linear, the map for saliency
  Vector anchor;
  std::size_t output_index = 0;

  // g(point) for a local-linear explanation; WrongExplanationKind otherwise.
  double evaluate(const Vector& point) const;
  Vector evaluate(const Matrix& points) const;

  // The object compared by the stability metric: intercept followed by the
  // coefficients for local_linear, the raw vector for saliency.
  Vector as_vector() const;
};

std::string to_string(Explanation::Kind kind);

// Ridge least-squares fit of f(.)[output_index] on the sampled neighborhood.
Explanation lime_explain(const Predictor& model, const Vector& x,
                         const NeighborhoodSpec& spec, double ridge,
                         std::size_t output_index, std::uint64_t counter = 0);

// Same fit on caller-provided neighbor points.
Explanation lime_explain_on(const Predictor& model, const Vector& x,
                            const Matrix& points, double ridge,
                            std::size_t output_index);

// First-order Taylor expansion at x.
Explanation taylor_explain(const Predictor& model, const Vector& x,
                           std::size_t output_index);

// Signed input gradient of the chosen class.
Explanation saliency_explain(const Predictor& model, const Vector& x,
                             std::size_t class_index);

// Explainer sample count used for metrics: max(5(d+1), 100).
std::size_t default_explainer_samples(std::size_t d);

struct LimeExplainer {
  NeighborhoodSpec neighborhood;
  double ridge = 0.0;
};
struct TaylorExplainer {};
struct SaliencyExplainer {};

using Explainer = std::variant<LimeExplainer, TaylorExplainer, SaliencyExplainer>;

// "LIME", "TAYLOR" or "SALIENCY"; used as metric row prefixes.
std::string explainer_name(const Explainer& explainer);

// Invokes the explainer at x. `counter` keys any sampling the explainer does.
Explanation explain(const Explainer& explainer, const Predictor& model,
                    const Vector& x, std::size_t output_index,
                    std::uint64_t counter);

}  // namespace expo

#endif  // EXPO_EXPLAINERS_HPP_
