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

#include "expo/metrics.hpp"

#include <cmath>
#include <cstdio>

#include "expo/error.hpp"

namespace expo {

double point_fidelity(const Predictor& model, const Explanation& explanation,
                      const Vector& x) {
  const double g = explanation.evaluate(x);
  const double f = model.predict_one(x)(
      static_cast<Eigen::Index>(explanation.output_index));
  return (g - f) * (g - f);
}

double neighborhood_fidelity_on(const Predictor& model,
                                const Explanation& explanation,
                                const Matrix& points) {
  const Vector g = explanation.evaluate(points);
  const Vector f = model.predict(points).col(
      static_cast<Eigen::Index>(explanation.output_index));
  return (g - f).squaredNorm() / static_cast<double>(points.rows());
}

double neighborhood_fidelity(const Predictor& model,
                             const Explanation& explanation, const Vector& x,
                             const NeighborhoodSpec& spec,
                             std::uint64_t counter) {
  if (explanation.kind != Explanation::Kind::kLocalLinear) {
    throw Error(ErrorCode::kWrongExplanationKind,
                "neighborhood fidelity needs a local_linear explanation");
  }
  return neighborhood_fidelity_on(model, explanation, sample(spec, x, counter));
}

double stability_metric_on(const Predictor& model, const Explainer& explainer,
                           const Vector& x, std::size_t output_index,
                           const Matrix& points, std::uint64_t counter) {
  const Explanation at_anchor = explain(explainer, model, x, output_index,
                                        counter);
  const Vector reference = at_anchor.as_vector();
  double total = 0.0;
  for (Eigen::Index j = 0; j < points.rows(); ++j) {
    const Explanation nearby = explain(
        explainer, model, points.row(j).transpose(), output_index, counter);
    if (nearby.kind != at_anchor.kind) {
      throw Error(ErrorCode::kWrongExplanationKind,
                  "explainer returned mixed explanation kinds");
    }
    total += (reference - nearby.as_vector()).squaredNorm();
  }
  return total / static_cast<double>(points.rows());
}

double stability_metric(const Predictor& model, const Explainer& explainer,
                        const Vector& x, std::size_t output_index,
                        const NeighborhoodSpec& spec, std::uint64_t counter) {
  return stability_metric_on(model, explainer, x, output_index,
                             sample(spec, x, counter), counter);
}

Summary summarize(std::span<const double> values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (const double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (const double v : values) ss += (v - s.mean) * (v - s.mean);
    const double var = ss / static_cast<double>(values.size() - 1);
    s.std_error = std::sqrt(var / static_cast<double>(values.size()));
  }
  return s;
}

std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.10g", value);
  return buffer;
}

void write_metrics_csv(std::ostream& out,
                       std::span<const MetricsReport> reports) {
  if (reports.empty()) return;
  const auto& layout = reports.front();
  for (const auto& r : reports) {
    if (r.rows.size() != layout.rows.size()) {
      throw Error(ErrorCode::kBadShape, "metrics reports differ in layout");
    }
  }
  out << "metric,output";
  for (const auto& r : reports) out << ',' << r.label << ',' << r.label << "_se";
  out << '\n';
  out << layout.predictive_name << ",-";
  for (const auto& r : reports) {
    out << ',' << format_number(r.predictive.mean) << ','
        << format_number(r.predictive.std_error);
  }
  out << '\n';
  for (std::size_t i = 0; i < layout.rows.size(); ++i) {
    out << layout.rows[i].name << ',' << layout.rows[i].output;
    for (const auto& r : reports) {
      out << ',' << format_number(r.rows[i].value.mean) << ','
          << format_number(r.rows[i].value.std_error);
    }
    out << '\n';
  }
}

}  // namespace expo
