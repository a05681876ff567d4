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

#ifndef EXPO_DATA_HPP_
#define EXPO_DATA_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "expo/linalg.hpp"

namespace expo {

enum class Task { kRegression, kClassification };

std::string to_string(Task task);
Task parse_task(const std::string& name);

struct Standardization {
  Vector feature_means;
  Vector feature_stds;  // constant columns record 1
  double target_mean = 0.0;
  double target_std = 1.0;  // regression only; identity for classification
};

// Features one row per example. Classification targets hold integer class
// indices 0..num_classes-1 stored as doubles.
struct Dataset {
  Matrix features;
  Vector targets;
  Task task = Task::kRegression;
  std::size_t num_classes = 0;
  std::vector<std::string> feature_names;
  std::string target_name;
  std::optional<Standardization> standardization;

  std::size_t size() const { return static_cast<std::size_t>(features.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(features.cols()); }
  int label(std::size_t i) const { return static_cast<int>(targets(i)); }
  std::size_t output_dim() const {
    return task == Task::kRegression ? 1 : num_classes;
  }
  Dataset subset(const std::vector<std::size_t>& rows) const;
};

using TargetColumn = std::variant<std::string, std::size_t>;

// Reads a header-first, comma-separated file with '.' decimals and no
// quoting. Returns a raw dataset (no standardization statistics).
Dataset load_csv(const std::string& path, const TargetColumn& target,
                 Task task);

// Parses CSV text directly; load_csv reads the file and forwards here.
Dataset parse_csv(const std::string& text, const TargetColumn& target,
                  Task task);

// Population mean/std (divide by n) of the given dataset.
Standardization fit_standardization(const Dataset& ds);

// Applies previously fitted statistics. Targets are transformed for
// regression only.
Dataset apply_standardization(const Dataset& ds, const Standardization& stats);

// Fits statistics on ds and applies them.
Dataset standardize(const Dataset& ds);

// Inverts the stored transform.
Dataset destandardize(const Dataset& ds);
double destandardize_target(const Standardization& stats, double value);

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  bool standardize = true;
};

struct Split {
  Dataset train;
  Dataset test;
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
};

// Deterministic shuffle by seed, then train = floor(fraction * n) rows
// (at least one row per side). When spec.standardize is set, statistics are
// fitted on train and applied to both sides.
Split split(const Dataset& raw, const SplitSpec& spec);

// Shape of the hypothetical credit-rating curve: piecewise linear on [0,1]
// with kinks at 0.3, 0.45 and 0.7.
double toy_piecewise(double x);
// A smooth nonlinear curve on [0,1].
double toy_smooth(double x);
// An affine curve on [0,1].
double toy_affine(double x);

// n points on [0,1] with the named toy target ("piecewise", "smooth",
// "affine") plus Gaussian noise of the given standard deviation.
Dataset make_toy_dataset(const std::string& function, std::size_t n,
                         double noise, std::uint64_t seed);

// A tabular regression surrogate with a housing-like size: d standard
// normal features, target = sum of piecewise-linear and interaction terms
// with kinks, plus Gaussian noise.
Dataset make_piecewise_regression(std::size_t n, std::size_t d, double noise,
                                  std::uint64_t seed);

}  // namespace expo

#endif  // EXPO_DATA_HPP_
