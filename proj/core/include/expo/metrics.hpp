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

#ifndef EXPO_METRICS_HPP_
#define EXPO_METRICS_HPP_

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "expo/explainers.hpp"
#include "expo/linalg.hpp"
#include "expo/model.hpp"
#include "expo/neighborhood.hpp"

namespace expo {

// (g(x) - f(x))^2 at the anchor.
double point_fidelity(const Predictor& model, const Explanation& explanation,
                      const Vector& x);

// Monte-Carlo E_{x' ~ N_x}[(g(x') - f(x'))^2] with spec.samples_m draws.
double neighborhood_fidelity(const Predictor& model,
                             const Explanation& explanation, const Vector& x,
                             const NeighborhoodSpec& spec,
                             std::uint64_t counter = 0);

// Equal-weight average over the given points.
double neighborhood_fidelity_on(const Predictor& model,
                                const Explanation& explanation,
                                const Matrix& points);

// Monte-Carlo E_{x' ~ N_x}[|e(x) - e(x')|^2] with a fresh explainer call at
// every x'. All explainer calls share `counter`, so sampling explainers see
// the same perturbation draws at x and at every x'.
double stability_metric(const Predictor& model, const Explainer& explainer,
                        const Vector& x, std::size_t output_index,
                        const NeighborhoodSpec& spec,
                        std::uint64_t counter = 0);

double stability_metric_on(const Predictor& model, const Explainer& explainer,
                           const Vector& x, std::size_t output_index,
                           const Matrix& points, std::uint64_t counter = 0);

struct Summary {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
};

Summary summarize(std::span<const double> values);

struct MetricRow {
  std::string name;  // e.g. "LIME-NF"
  std::string output;  // output/logit index, "-" for the predictive metric
  Summary value;
  std::vector<double> per_point;
};

struct MetricsReport {
  std::string label = "None";  // regularizer label, the table column
  std::string predictive_name;   // "MSE" or "ACC"
  Summary predictive;
  std::vector<MetricRow> rows;
};

// Table shaped like the paper's results tables: one row per metric, one
// (mean, standard error) column pair per report. Reports must share row
// layout.
void write_metrics_csv(std::ostream& out,
                       std::span<const MetricsReport> reports);

// Fixed-format number rendering shared by every CSV writer.
std::string format_number(double value);

}  // namespace expo

#endif  // EXPO_METRICS_HPP_
