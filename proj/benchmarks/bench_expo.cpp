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

#include <benchmark/benchmark.h>

#include <random>

#include "expo/explainers.hpp"
#include "expo/linalg.hpp"
#include "expo/model.hpp"
#include "expo/regularizers.hpp"

namespace {

using expo::Matrix;
using expo::Mlp;
using expo::Vector;

Matrix normal_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = n(rng);
  }
  return m;
}

Mlp make_model(std::size_t d, std::size_t width) {
  return Mlp::init({d, width, width, 1}, expo::Activation::kTanh, 1);
}

void BM_ForwardBackward(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const Mlp m = make_model(d, 32);
  const Matrix x = normal_matrix(32, static_cast<Eigen::Index>(d), 2);
  for (auto _ : state) {
    auto tape = expo::GradientTape::zeros_like(m);
    const auto trace = m.trace(x);
    m.backward(trace, trace.values.back(), tape);
    benchmark::DoNotOptimize(tape);
  }
  state.SetItemsProcessed(state.iterations() * x.rows());
}
BENCHMARK(BM_ForwardBackward)->Arg(8)->Arg(64);

void BM_FidelityLoss(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const Mlp m = make_model(d, 32);
  expo::RegularizerConfig c;
  c.kind = expo::RegularizerKind::kFidelity;
  c.gamma = 1.0;
  c.neighborhood = expo::NeighborhoodSpec::gaussian(
      0.5, expo::default_regularizer_samples(c.kind, d), 3);
  const Vector x = normal_matrix(1, static_cast<Eigen::Index>(d), 4).row(0).transpose();
  std::uint64_t counter = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(expo::fidelity_loss(m, x, c, counter++));
  }
}
BENCHMARK(BM_FidelityLoss)->Arg(8)->Arg(64);

void BM_TrainingStepRegularized(benchmark::State& state) {
  const auto kind = static_cast<expo::RegularizerKind>(state.range(0));
  const std::size_t d = 8;
  const Mlp m = make_model(d, 32);
  expo::RegularizerConfig c;
  c.kind = kind;
  c.gamma = 1.0;
  c.neighborhood = expo::NeighborhoodSpec::gaussian(
      0.5, expo::default_regularizer_samples(kind, d), 3);
  const Matrix x = normal_matrix(32, static_cast<Eigen::Index>(d), 5);
  std::vector<std::uint64_t> counters(32);
  for (auto _ : state) {
    auto tape = expo::GradientTape::zeros_like(m);
    benchmark::DoNotOptimize(expo::accumulate_regularizer(m, x, counters, c, 1.0 / 32, tape));
  }
  state.SetLabel(expo::to_string(kind));
}
BENCHMARK(BM_TrainingStepRegularized)
    ->Arg(static_cast<int>(expo::RegularizerKind::kFidelity))
    ->Arg(static_cast<int>(expo::RegularizerKind::kFidelity1d))
    ->Arg(static_cast<int>(expo::RegularizerKind::kStability));

void BM_OlsFit(benchmark::State& state) {
  const auto d = state.range(0);
  const Matrix points = normal_matrix(5 * (d + 1), d, 6);
  const Vector y = normal_matrix(points.rows(), 1, 7).col(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(expo::ols_fit(points, y, 0.0));
  }
}
BENCHMARK(BM_OlsFit)->Arg(8)->Arg(64);

void BM_LimeExplain(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const Mlp m = make_model(d, 32);
  const auto spec = expo::NeighborhoodSpec::gaussian(0.1, expo::default_explainer_samples(d), 8);
  const Vector x = normal_matrix(1, static_cast<Eigen::Index>(d), 9).row(0).transpose();
  std::uint64_t counter = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(expo::lime_explain(m, x, spec, 0.0, 0, counter++));
  }
}
BENCHMARK(BM_LimeExplain)->Arg(8)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
