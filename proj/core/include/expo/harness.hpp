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

#ifndef EXPO_HARNESS_HPP_
#define EXPO_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "expo/bounds.hpp"
#include "expo/data.hpp"
#include "expo/explainers.hpp"
#include "expo/metrics.hpp"
#include "expo/model.hpp"
#include "expo/neighborhood.hpp"
#include "expo/regularizers.hpp"
#include "expo/serialization.hpp"

namespace expo {

// Where the data comes from. "csv" reads `path`; "synthetic_piecewise" is
// the built-in tabular surrogate; "toy_piecewise", "toy_smooth" and
// "toy_affine" are the one-dimensional demo curves.
struct DataConfig {
  std::string source = "csv";
  std::string path;
  TargetColumn target = std::string("y");
  Task task = Task::kRegression;
  double feature_scale = 1.0;  // raw features are divided by this
  SplitSpec split;
  std::size_t synthetic_n = 506;
  std::size_t synthetic_d = 8;
  double synthetic_noise = 0.3;
  std::uint64_t synthetic_seed = 0;
};

enum class OptimizerKind { kAdam, kSgd };

struct EvalConfig {
  std::vector<std::string> explainers = {"lime"};  // lime, taylor, saliency
  double lime_ridge = 0.0;
  std::size_t lime_samples = 0;  // 0: max(5(d+1), 100)
  std::size_t max_points = 0;    // 0: whole test set
  bool stability = true;         // the -S rows refit the explainer per sample
  bool bound = false;
  double bound_delta = 0.05;
  std::size_t bound_mc_samples = 10000;
  std::size_t bound_max_points = 200;
};

struct TrainConfig {
  DataConfig data;
  std::vector<std::size_t> hidden_sizes = {32, 32};
  Activation activation = Activation::kTanh;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  double learning_rate = 1e-3;
  std::size_t epochs = 100;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
  // neighborhood.samples_m == 0 selects default_regularizer_samples.
  RegularizerConfig regularizer = {RegularizerKind::kNone, 0.0,
                                   {NeighborhoodSpec::Kind::kGaussian, 0.5, 0,
                                    1},
                                   kDefaultRidge};
  NeighborhoodSpec eval_neighborhood = {NeighborhoodSpec::Kind::kGaussian, 0.1,
                                        100, 2};
  EvalConfig evaluation;

  void validate() const;
};

void to_json(Json& j, const TrainConfig& config);
// Keys absent from j keep the values in `base`.
TrainConfig train_config_from_json(const Json& j, TrainConfig base = {});

struct EpochLog {
  std::size_t epoch = 0;
  double predictive_loss = 0.0;
  double regularizer_loss = 0.0;
};

struct TrainResult {
  Mlp model;
  std::vector<EpochLog> log;
};

Dataset load_dataset(const DataConfig& config);
Split prepare_data(const DataConfig& config);

// Regularizer with samples_m resolved for d features.
RegularizerConfig resolve_regularizer(const RegularizerConfig& config,
                                      std::size_t d);

// Minimizes mean predictive loss + gamma * regularizer over mini-batches.
// Throws NonFiniteLoss if a batch objective becomes NaN or infinite.
TrainResult train(const TrainConfig& config, const Dataset& train_set);

// Mean squared error (regression) or accuracy (classification).
Summary predictive_performance(const Predictor& model, const Dataset& ds);

MetricsReport evaluate(const Predictor& model, const Dataset& test_set,
                       const EvalConfig& eval,
                       const NeighborhoodSpec& eval_spec,
                       const std::string& label = "None");

// Regularizer label used as the metrics table column, e.g. "ExpO-F".
std::string regularizer_label(const RegularizerConfig& config);

struct ExperimentReport {
  Json config;
  std::string run_id;
  Summary train_predictive;
  Summary test_predictive;
  MetricsReport metrics;
  std::optional<BoundReport> bound;
  std::vector<EpochLog> log;
  double wall_seconds = 0.0;
  std::string error;  // set when a sweep member failed
};

void to_json(Json& j, const ExperimentReport& report);

// Stable short hash of the config (FNV-1a over the JSON dump).
std::string run_id(const Json& config);

struct Experiment {
  ExperimentReport report;
  std::optional<Mlp> model;
};

// Loads data, trains, evaluates and optionally bounds one configuration.
Experiment run_experiment(const TrainConfig& config);

// Evaluates a given model on the configured data split.
ExperimentReport evaluate_model(const TrainConfig& config, const Mlp& model);

enum class SweepAxis { kGamma, kSigmaReg, kSigmaEval };
std::string to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(const std::string& name);

struct SweepResult {
  SweepAxis axis = SweepAxis::kGamma;
  std::vector<double> values;
  std::vector<ExperimentReport> reports;
};

// One train + evaluate per value (sigma_eval trains once and re-evaluates).
// Failures are recorded in the report's error field and the sweep continues.
SweepResult sweep(const TrainConfig& config, SweepAxis axis,
                  const std::vector<double>& values);

// axis,value,label,predictive_metric,predictive,<metric columns>,error
void write_frontier_csv(std::ostream& out, const SweepResult& result);

struct DemoConfig {
  std::string function = "piecewise";
  double anchor = 0.5;
  double taylor_first = 0.4;
  double taylor_second = 0.5;
  NeighborhoodSpec lime_neighborhood = {NeighborhoodSpec::Kind::kUniform, 0.5,
                                        200, 3};
  std::size_t grid_points = 101;
  std::size_t train_points = 200;
  double noise = 0.0;
  std::vector<std::size_t> hidden_sizes = {32, 32};
  OptimizerKind optimizer = OptimizerKind::kSgd;
  std::size_t epochs = 1000;
  double learning_rate = 0.3;
  std::size_t batch_size = 16;
  std::uint64_t seed = 0;
  RegularizerConfig regularizer = {RegularizerKind::kNone, 0.0,
                                   {NeighborhoodSpec::Kind::kGaussian, 0.1, 5,
                                    1},
                                   kDefaultRidge};
};

struct DemoRow {
  double x, f, taylor_first, taylor_second, lime;
};

struct DemoReport {
  Explanation taylor_first;
  Explanation taylor_second;
  Explanation lime;
  double lime_neighborhood_fidelity = 0.0;
  std::vector<DemoRow> rows;
};

// Trains a small model on a built-in 1-D curve and samples the model, two
// Taylor lines and a LIME line on a uniform grid over [0,1].
DemoReport demo_toy(const DemoConfig& config);
void write_demo_csv(std::ostream& out, const DemoReport& report);

struct StabilityImageConfig {
  TrainConfig base;  // regularizer kind stability, saliency explainer
  std::vector<double> gammas = {0.0, 30.0};
  std::size_t saliency_images = 10;
};

struct StabilityImageResult {
  std::vector<ExperimentReport> reports;  // one per gamma
  // Saliency vectors for the first saliency_images test images, per gamma.
  std::vector<std::vector<Explanation>> saliency;
};

StabilityImageConfig default_stability_image_config(const std::string& csv);
StabilityImageResult stability_image_experiment(
    const StabilityImageConfig& config);
void write_saliency_csv(std::ostream& out, const StabilityImageResult& result,
                        const std::vector<double>& gammas);

}  // namespace expo

#endif  // EXPO_HARNESS_HPP_
