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

#include "expo/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "expo/error.hpp"
#include "expo/rng.hpp"

namespace expo {
namespace {

constexpr double kMomentJitter = 1e-10;

double residual_from_values(const Matrix& points, const Vector& f) {
  const double m = static_cast<double>(points.rows());
  const Matrix z = augment(points);
  const Matrix second = (z.transpose() * z) / m;
  const Vector cross = (z.transpose() * f) / m;
  const double energy = f.squaredNorm() / m;
  const Vector solved = solve_spd(second, cross, kMomentJitter);
  return std::max(0.0, energy - cross.dot(solved));
}

double variance_of(const Vector& f) {
  const double mean = f.mean();
  return (f.array() - mean).square().sum() / static_cast<double>(f.size());
}

Vector output_column(const Predictor& model, const Matrix& points,
                     std::size_t output_index) {
  if (output_index >= model.output_dim()) {
    throw Error(ErrorCode::kBadShape, "output index out of range");
  }
  return model.predict(points).col(static_cast<Eigen::Index>(output_index));
}

}  // namespace

double expected_residual_on(const Predictor& model, const Matrix& points,
                            std::size_t output_index) {
  return residual_from_values(points,
                              output_column(model, points, output_index));
}

double expected_residual(const Predictor& model, const Vector& x,
                         const NeighborhoodSpec& spec, std::size_t mc_samples,
                         std::size_t output_index, std::uint64_t counter) {
  if (mc_samples < static_cast<std::size_t>(x.size()) + 2) {
    throw Error(ErrorCode::kBadParameter, "mc_samples must be >= d + 2");
  }
  NeighborhoodSpec draws = spec;
  draws.samples_m = mc_samples;
  return expected_residual_on(model, sample(draws, x, counter), output_index);
}

double local_variance_on(const Predictor& model, const Matrix& points,
                         std::size_t output_index) {
  return variance_of(output_column(model, points, output_index));
}

LocalResiduals local_residuals(const Predictor& model, const Matrix& anchors,
                               const NeighborhoodSpec& spec,
                               std::size_t mc_samples,
                               std::size_t output_index) {
  NeighborhoodSpec draws = spec;
  draws.samples_m = mc_samples;
  LocalResiduals out;
  out.residuals.reserve(static_cast<std::size_t>(anchors.rows()));
  out.variances.reserve(static_cast<std::size_t>(anchors.rows()));
  for (Eigen::Index i = 0; i < anchors.rows(); ++i) {
    const Matrix points = sample(draws, anchors.row(i).transpose(),
                                 static_cast<std::uint64_t>(i));
    const Vector f = output_column(model, points, output_index);
    out.residuals.push_back(residual_from_values(points, f));
    out.variances.push_back(variance_of(f));
  }
  return out;
}

double estimate_C(const Predictor& model, const Matrix& anchors,
                  const NeighborhoodSpec& spec, std::size_t mc_samples,
                  std::size_t output_index) {
  if (anchors.rows() == 0) {
    throw Error(ErrorCode::kEmptyDataset, "estimate_C needs anchors");
  }
  const auto local =
      local_residuals(model, anchors, spec, mc_samples, output_index);
  return *std::max_element(local.variances.begin(), local.variances.end());
}

double hoeffding_slack(double C, double delta, std::size_t n) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::kBadParameter, "delta must be in (0,1)");
  }
  if (!(C >= 0.0)) throw Error(ErrorCode::kBadParameter, "C must be >= 0");
  if (n < 1) throw Error(ErrorCode::kBadParameter, "n must be >= 1");
  return std::sqrt(C * C * std::log(1.0 / delta) /
                   (2.0 * static_cast<double>(n)));
}

double hoeffding_bound(double mean_train_residual, double C, double delta,
                       std::size_t n) {
  return mean_train_residual + hoeffding_slack(C, delta, n);
}

BoundReport bound_report(const Predictor& model, const Matrix& train_anchors,
                         const Matrix& test_anchors,
                         const NeighborhoodSpec& spec, std::size_t mc_samples,
                         double delta, std::size_t output_index) {
  if (train_anchors.rows() == 0) {
    throw Error(ErrorCode::kEmptyDataset, "bound needs training anchors");
  }
  const auto train =
      local_residuals(model, train_anchors, spec, mc_samples, output_index);
  BoundReport report;
  report.n = train.residuals.size();
  report.delta = delta;
  report.mean_train_residual =
      std::accumulate(train.residuals.begin(), train.residuals.end(), 0.0) /
      static_cast<double>(report.n);
  report.variance_bound_C =
      *std::max_element(train.variances.begin(), train.variances.end());
  report.slack = hoeffding_slack(report.variance_bound_C, delta, report.n);
  report.bound_value = report.mean_train_residual + report.slack;
  if (test_anchors.rows() > 0) {
    const auto test =
        local_residuals(model, test_anchors, spec, mc_samples, output_index);
    report.n_test = test.residuals.size();
    report.mean_test_residual =
        std::accumulate(test.residuals.begin(), test.residuals.end(), 0.0) /
        static_cast<double>(report.n_test);
  }
  return report;
}

CoverageResult empirical_coverage(const LocalResiduals& pool,
                                  std::size_t n_train, double delta,
                                  std::size_t resamples, std::uint64_t seed) {
  const std::size_t total = pool.residuals.size();
  if (pool.variances.size() != total) {
    throw Error(ErrorCode::kBadShape, "residual/variance pool mismatch");
  }
  if (n_train < 1 || n_train >= total) {
    throw Error(ErrorCode::kBadParameter,
                "n_train must leave at least one held-out point");
  }
  CoverageResult result;
  result.resamples = resamples;
  result.delta = delta;
  std::vector<std::size_t> order(total);
  for (std::size_t r = 0; r < resamples; ++r) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto engine = make_engine(seed, Stream::kResample, r);
    std::shuffle(order.begin(), order.end(), engine);
    double train_sum = 0.0;
    double c = 0.0;
    for (std::size_t i = 0; i < n_train; ++i) {
      train_sum += pool.residuals[order[i]];
      c = std::max(c, pool.variances[order[i]]);
    }
    double test_sum = 0.0;
    for (std::size_t i = n_train; i < total; ++i) {
      test_sum += pool.residuals[order[i]];
    }
    const double bound = hoeffding_bound(
        train_sum / static_cast<double>(n_train), c, delta, n_train);
    if (test_sum / static_cast<double>(total - n_train) > bound) {
      ++result.violations;
    }
  }
  result.violation_rate =
      resamples == 0 ? 0.0
                     : static_cast<double>(result.violations) /
                           static_cast<double>(resamples);
  return result;
}

}  // namespace expo
