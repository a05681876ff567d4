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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "expo/error.hpp"
#include "expo/metrics.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace {

using expo::Explanation;
using expo::Matrix;
using expo::Mlp;
using expo::NeighborhoodSpec;
using expo::Vector;

Explanation line(double intercept, const Vector& slopes, std::size_t out = 0) {
  Explanation e;
  e.intercept = intercept;
  e.coefficients = slopes;
  e.anchor = Vector::Zero(slopes.size());
  e.output_index = out;
  return e;
}

TEST(PointFidelity, ExactAffineFitIsZero) {
  Vector w(2);
  w << 1.5, -0.5;
  const Mlp m = fixture::affine_model(w, 0.2);
  const auto e = expo::lime_explain(m, Vector::Ones(2), NeighborhoodSpec::gaussian(0.5, 20), 0.0, 0);
  EXPECT_LT(expo::point_fidelity(m, e, Vector::Ones(2)), 1e-12);
}

TEST(PointFidelity, UnitOffset) {
  Vector w(2);
  w << 1.5, -0.5;
  const Mlp m = fixture::affine_model(w, 0.2);
  EXPECT_NEAR(expo::point_fidelity(m, line(1.2, w), Vector::Constant(2, 0.7)), 1.0, 1e-12);
}

TEST(NeighborhoodFidelity, PointMassLimitEqualsPointFidelity) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Mlp m = fixture::random_mlp({3, 8, 1}, seed);
    std::mt19937_64 rng(seed);
    const Vector x = fixture::random_vector(3, rng);
    const auto e = expo::lime_explain(m, x, NeighborhoodSpec::gaussian(0.3, 50, 1), 0.0, 0);
    const double pf = expo::point_fidelity(m, e, x);
    const double nf = expo::neighborhood_fidelity(m, e, x, NeighborhoodSpec::gaussian(1e-8, 500, 3));
    EXPECT_LT(std::abs(nf - pf), 1e-6);
  }
}

TEST(NeighborhoodFidelity, SquareOnThreePoints) {
  Matrix p(3, 1);
  p << -1.0, 0.0, 1.0;
  const auto model = fixture::square_model();
  const auto e = expo::lime_explain_on(model, Vector::Zero(1), p, 0.0, 0);
  // Enumerate the three equally weighted points directly.
  double expected = 0.0;
  for (int j = 0; j < 3; ++j) {
    const double g = e.intercept + e.coefficients(0) * p(j, 0);
    expected += (g - p(j, 0) * p(j, 0)) * (g - p(j, 0) * p(j, 0)) / 3.0;
  }
  EXPECT_NEAR(expo::neighborhood_fidelity_on(model, e, p), expected, 1e-15);
  EXPECT_NEAR(expo::neighborhood_fidelity_on(model, e, p), 2.0 / 9.0, 1e-14);
}

TEST(NeighborhoodFidelity, ConstantOffsetSquared) {
  Vector w(2);
  w << 0.3, 0.9;
  const Mlp m = fixture::affine_model(w, -1.0);
  const double c = 0.37;
  for (const auto& spec : {NeighborhoodSpec::gaussian(0.5, 100, 1),
                           NeighborhoodSpec::uniform(2.0, 100, 2)}) {
    EXPECT_NEAR(expo::neighborhood_fidelity(m, line(-1.0 + c, w), Vector::Ones(2), spec),
                c * c, 1e-12);
  }
}

TEST(NeighborhoodFidelity, AffineExactFitIsZero) {
  std::mt19937_64 rng(3);
  const Vector w = fixture::random_vector(4, rng);
  const Mlp m = fixture::affine_model(w, 0.1);
  EXPECT_LT(expo::neighborhood_fidelity(m, line(0.1, w), Vector::Ones(4),
                                        NeighborhoodSpec::gaussian(0.5, 100)),
            1e-12);
}

TEST(NeighborhoodFidelity, PermutationInvariant) {
  const Mlp m = fixture::random_mlp({3, 8, 1}, 4);
  const Vector x = Vector::Ones(3);
  const Matrix p = expo::sample(NeighborhoodSpec::gaussian(0.2, 50, 2), x);
  const auto e = expo::lime_explain_on(m, x, p, 0.0, 0);
  std::vector<Eigen::Index> order(50);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), std::mt19937_64(1));
  Matrix q(50, 3);
  for (Eigen::Index r = 0; r < 50; ++r) q.row(r) = p.row(order[static_cast<std::size_t>(r)]);
  EXPECT_NEAR(expo::neighborhood_fidelity_on(m, e, p),
              expo::neighborhood_fidelity_on(m, e, q), 1e-15);
  const expo::Explainer lime = expo::LimeExplainer{NeighborhoodSpec::gaussian(0.2, 30, 5), 0.0};
  EXPECT_NEAR(expo::stability_metric_on(m, lime, x, 0, p, 3),
              expo::stability_metric_on(m, lime, x, 0, q, 3), 1e-12);
}

TEST(NeighborhoodFidelity, RejectsSaliency) {
  const Mlp m = fixture::random_mlp({3, 8, 2}, 4);
  const auto s = expo::saliency_explain(m, Vector::Ones(3), 0);
  EXPECT_THROW(expo::neighborhood_fidelity(m, s, Vector::Ones(3),
                                           NeighborhoodSpec::gaussian(0.1, 10)),
               expo::Error);
}

TEST(StabilityMetric, AffineLimeIsZero) {
  std::mt19937_64 rng(5);
  const Mlp m = fixture::affine_model(fixture::random_vector(3, rng), 0.5);
  const expo::Explainer lime = expo::LimeExplainer{NeighborhoodSpec::gaussian(0.1, 30, 1), 0.0};
  EXPECT_LT(expo::stability_metric(m, lime, Vector::Ones(3), 0,
                                   NeighborhoodSpec::gaussian(0.5, 20, 2)),
            1e-8);
}

TEST(StabilityMetric, LinearSaliencyIsExactlyZero) {
  std::mt19937_64 rng(6);
  const Mlp m = fixture::affine_model(fixture::random_matrix(2, 3, rng),
                                      fixture::random_vector(2, rng));
  EXPECT_EQ(expo::stability_metric(m, expo::SaliencyExplainer{}, Vector::Ones(3), 1,
                                   NeighborhoodSpec::gaussian(0.5, 20, 2)),
            0.0);
}

TEST(StabilityMetric, TaylorOnSquareAtPointPair) {
  const auto model = fixture::square_model();
  for (const double x : {0.0, 0.5, -1.3}) {
    for (const double h : {0.1, 0.25}) {
      Matrix pair(2, 1);
      pair << x - h, x + h;
      // Enumerate: e(t) = (-t^2, 2t) as (intercept, slope).
      double direct = 0.0;
      for (const double t : {x - h, x + h}) {
        const double di = -t * t + x * x;
        const double ds = 2.0 * t - 2.0 * x;
        direct += (di * di + ds * ds) / 2.0;
      }
      const double closed = 4 * h * h + 4 * x * x * h * h + h * h * h * h;
      EXPECT_NEAR(direct, closed, 1e-12);
      EXPECT_NEAR(expo::stability_metric_on(model, expo::TaylorExplainer{},
                                            Vector::Constant(1, x), 0, pair),
                  closed, 1e-12);
    }
  }
}

TEST(StabilityMetric, NonNegativeForRandomModels) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Mlp m = fixture::random_mlp({3, 6, 2}, seed);
    const expo::Explainer lime = expo::LimeExplainer{NeighborhoodSpec::gaussian(0.1, 20, 1), 0.0};
    EXPECT_GE(expo::stability_metric(m, lime, Vector::Ones(3), 0,
                                     NeighborhoodSpec::gaussian(0.1, 5, 2), seed),
              0.0);
  }
}

TEST(Summarize, MeanAndStandardError) {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const auto s = expo::summarize(v);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_EQ(s.count, 4u);
  // Sample variance 5/3, standard error sqrt(5/12).
  EXPECT_NEAR(s.std_error, std::sqrt(5.0 / 12.0), 1e-15);
  EXPECT_EQ(expo::summarize(std::vector<double>{}).count, 0u);
  EXPECT_EQ(expo::summarize(std::vector<double>{7.0}).std_error, 0.0);
}

TEST(MetricsCsv, TableLayout) {
  expo::MetricsReport a;
  a.label = "None";
  a.predictive_name = "MSE";
  a.predictive = {0.5, 0.01, 10};
  a.rows.push_back({"LIME-NF", "0", {0.25, 0.125, 10}, {}});
  expo::MetricsReport b = a;
  b.label = "ExpO-F";
  b.rows[0].value.mean = 0.0625;
  std::ostringstream out;
  const std::vector<expo::MetricsReport> both{a, b};
  expo::write_metrics_csv(out, both);
  EXPECT_EQ(out.str(),
            "metric,output,None,None_se,ExpO-F,ExpO-F_se\n"
            "MSE,-,0.5,0.01,0.5,0.01\n"
            "LIME-NF,0,0.25,0.125,0.0625,0.125\n");
  b.rows.clear();
  const std::vector<expo::MetricsReport> mismatched{a, b};
  EXPECT_THROW(expo::write_metrics_csv(out, mismatched), expo::Error);
}

TEST(MetricsCsv, NumberFormat) {
  EXPECT_EQ(expo::format_number(0.1), "0.1");
  EXPECT_EQ(expo::format_number(1.0 / 3.0), "0.3333333333");
  EXPECT_EQ(expo::format_number(1e-20), "1e-20");
}

}  // namespace
