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

#include "expo/explainers.hpp"

#include <algorithm>

#include "expo/error.hpp"

namespace expo {
namespace {

void check_output(const Predictor& model, std::size_t index) {
  if (index >= model.output_dim()) {
    throw Error(ErrorCode::kBadShape,
                "output index " + std::to_string(index) + " out of range");
  }
}

void require_local_linear(const Explanation& e) {
  if (e.kind != Explanation::Kind::kLocalLinear) {
    throw Error(ErrorCode::kWrongExplanationKind,
                "expected a local_linear explanation");
  }
}

}  // namespace

double Explanation::evaluate(const Vector& point) const {
  require_local_linear(*this);
  return intercept + coefficients.dot(point);
}

Vector Explanation::evaluate(const Matrix& points) const {
  require_local_linear(*this);
  return (points * coefficients).array() + intercept;
}

Vector Explanation::as_vector() const {
  if (kind == Kind::kSaliency) return coefficients;
  Vector out(coefficients.size() + 1);
  out(0) = intercept;
  out.tail(coefficients.size()) = coefficients;
  return out;
}

std::string to_string(Explanation::Kind kind) {
  return kind == Explanation::Kind::kLocalLinear ? "local_linear" : "saliency";
}

Explanation lime_explain_on(const Predictor& model, const Vector& x,
                            const Matrix& points, double ridge,
                            std::size_t output_index) {
  check_output(model, output_index);
  const Vector targets =
      model.predict(points).col(static_cast<Eigen::Index>(output_index));
  const OlsSolution fit = ols_fit(points, targets, ridge);
  Explanation e;
  e.kind = Explanation::Kind::kLocalLinear;
  e.intercept = fit.intercept();
  e.coefficients = fit.slopes();
  e.anchor = x;
  e.output_index = output_index;
  return e;
}

Explanation lime_explain(const Predictor& model, const Vector& x,
                         const NeighborhoodSpec& spec, double ridge,
                         std::size_t output_index, std::uint64_t counter) {
  return lime_explain_on(model, x, sample(spec, x, counter), ridge,
                         output_index);
}

Explanation taylor_explain(const Predictor& model, const Vector& x,
                           std::size_t output_index) {
  check_output(model, output_index);
  Explanation e;
  e.kind = Explanation::Kind::kLocalLinear;
  e.coefficients = model.input_gradient(x, output_index);
  const double fx =
      model.predict_one(x)(static_cast<Eigen::Index>(output_index));
  e.intercept = fx - e.coefficients.dot(x);
  e.anchor = x;
  e.output_index = output_index;
  return e;
}

Explanation saliency_explain(const Predictor& model, const Vector& x,
                             std::size_t class_index) {
  check_output(model, class_index);
  Explanation e;
  e.kind = Explanation::Kind::kSaliency;
  e.coefficients = model.input_gradient(x, class_index);
  e.anchor = x;
  e.output_index = class_index;
  return e;
}

std::size_t default_explainer_samples(std::size_t d) {
  return std::max<std::size_t>(5 * (d + 1), 100);
}

std::string explainer_name(const Explainer& explainer) {
  struct Visitor {
    std::string operator()(const LimeExplainer&) const { return "LIME"; }
    std::string operator()(const TaylorExplainer&) const { return "TAYLOR"; }
    std::string operator()(const SaliencyExplainer&) const {
      return "SALIENCY";
    }
  };
  return std::visit(Visitor{}, explainer);
}

Explanation explain(const Explainer& explainer, const Predictor& model,
                    const Vector& x, std::size_t output_index,
                    std::uint64_t counter) {
  if (const auto* lime = std::get_if<LimeExplainer>(&explainer)) {
    return lime_explain(model, x, lime->neighborhood, lime->ridge,
                        output_index, counter);
  }
  if (std::holds_alternative<TaylorExplainer>(explainer)) {
    return taylor_explain(model, x, output_index);
  }
  return saliency_explain(model, x, output_index);
}

}  // namespace expo
