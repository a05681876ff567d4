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

#include "expo/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string_view>

#include "expo/error.hpp"
#include "expo/rng.hpp"

namespace expo {
namespace {

std::vector<std::string_view> split_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return cells;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::optional<double> parse_double(std::string_view cell) {
  cell = trim(cell);
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() ||
      !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::size_t resolve_target(const std::vector<std::string>& header,
                           const TargetColumn& target) {
  if (const auto* index = std::get_if<std::size_t>(&target)) {
    if (*index >= header.size()) {
      throw Error(ErrorCode::kUnknownColumn,
                  "target index " + std::to_string(*index) + " out of " +
                      std::to_string(header.size()) + " columns");
    }
    return *index;
  }
  const auto& name = std::get<std::string>(target);
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw Error(ErrorCode::kUnknownColumn, "no column named '" + name + "'");
  }
  return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

std::string to_string(Task task) {
  return task == Task::kRegression ? "regression" : "classification";
}

Task parse_task(const std::string& name) {
  if (name == "regression") return Task::kRegression;
  if (name == "classification") return Task::kClassification;
  throw Error(ErrorCode::kConfig, "unknown task '" + name + "'");
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
  Dataset out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
  out.targets.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(rows[i]);
    out.features.row(static_cast<Eigen::Index>(i)) = features.row(r);
    out.targets(static_cast<Eigen::Index>(i)) = targets(r);
  }
  out.task = task;
  out.num_classes = num_classes;
  out.feature_names = feature_names;
  out.target_name = target_name;
  out.standardization = standardization;
  return out;
}

Dataset parse_csv(const std::string& text, const TargetColumn& target,
                  Task task) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kEmptyDataset, "missing header line");
  }
  std::vector<std::string> header;
  for (const auto cell : split_line(line)) header.emplace_back(trim(cell));
  const std::size_t target_col = resolve_target(header, target);

  std::vector<std::vector<double>> rows;
  std::vector<double> targets;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto cells = split_line(line);
    if (cells.size() != header.size()) {
      throw ParseError(row, std::min(cells.size(), header.size()) + 1,
                       "expected " + std::to_string(header.size()) +
                           " cells, found " + std::to_string(cells.size()));
    }
    std::vector<double> values;
    values.reserve(header.size() - 1);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto value = parse_double(cells[c]);
      if (!value) {
        throw ParseError(row, c + 1,
                         "cannot parse '" + std::string(trim(cells[c])) + "'");
      }
      if (c == target_col) {
        if (task == Task::kClassification &&
            (*value < 0.0 || *value != std::floor(*value))) {
          throw ParseError(row, c + 1, "class label must be an integer >= 0");
        }
        targets.push_back(*value);
      } else {
        values.push_back(*value);
      }
    }
    rows.push_back(std::move(values));
  }
  if (rows.size() < 2) {
    throw Error(ErrorCode::kEmptyDataset,
                "need at least 2 rows, found " + std::to_string(rows.size()));
  }

  Dataset ds;
  ds.task = task;
  ds.target_name = header[target_col];
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != target_col) ds.feature_names.push_back(header[c]);
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto d = static_cast<Eigen::Index>(header.size() - 1);
  ds.features.resize(n, d);
  ds.targets.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      ds.features(i, j) = rows[static_cast<std::size_t>(i)]
                              [static_cast<std::size_t>(j)];
    }
    ds.targets(i) = targets[static_cast<std::size_t>(i)];
  }
  if (task == Task::kClassification) {
    ds.num_classes = static_cast<std::size_t>(ds.targets.maxCoeff()) + 1;
  }
  return ds;
}

Dataset load_csv(const std::string& path, const TargetColumn& target,
                 Task task) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), target, task);
}

Standardization fit_standardization(const Dataset& ds) {
  Standardization s;
  const double n = static_cast<double>(ds.size());
  s.feature_means = ds.features.colwise().mean().transpose();
  s.feature_stds.resize(ds.features.cols());
  for (Eigen::Index j = 0; j < ds.features.cols(); ++j) {
    const double var =
        (ds.features.col(j).array() - s.feature_means(j)).square().sum() / n;
    const double sd = std::sqrt(var);
    s.feature_stds(j) = sd > 1e-12 ? sd : 1.0;
  }
  if (ds.task == Task::kRegression) {
    s.target_mean = ds.targets.mean();
    const double var = (ds.targets.array() - s.target_mean).square().sum() / n;
    const double sd = std::sqrt(var);
    s.target_std = sd > 1e-12 ? sd : 1.0;
  }
  return s;
}

Dataset apply_standardization(const Dataset& ds,
                              const Standardization& stats) {
  if (stats.feature_means.size() != ds.features.cols()) {
    throw Error(ErrorCode::kBadShape, "standardization width mismatch");
  }
  Dataset out = ds;
  out.features =
      ((ds.features.rowwise() - stats.feature_means.transpose()).array()
           .rowwise() /
       stats.feature_stds.transpose().array())
          .matrix();
  if (ds.task == Task::kRegression) {
    out.targets = (ds.targets.array() - stats.target_mean) / stats.target_std;
  }
  out.standardization = stats;
  return out;
}

Dataset standardize(const Dataset& ds) {
  return apply_standardization(ds, fit_standardization(ds));
}

Dataset destandardize(const Dataset& ds) {
  if (!ds.standardization) return ds;
  const auto& s = *ds.standardization;
  Dataset out = ds;
  out.features = ((ds.features.array().rowwise() *
                   s.feature_stds.transpose().array())
                      .rowwise() +
                  s.feature_means.transpose().array())
                     .matrix();
  if (ds.task == Task::kRegression) {
    out.targets = ds.targets.array() * s.target_std + s.target_mean;
  }
  out.standardization.reset();
  return out;
}

double destandardize_target(const Standardization& stats, double value) {
  return value * stats.target_std + stats.target_mean;
}

Split split(const Dataset& raw, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw Error(ErrorCode::kBadParameter, "train_fraction must be in (0,1)");
  }
  const std::size_t n = raw.size();
  if (n < 2) {
    throw Error(ErrorCode::kEmptyDataset, "cannot split fewer than 2 rows");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto engine = make_engine(spec.seed, Stream::kShuffle, 0);
  std::shuffle(order.begin(), order.end(), engine);

  auto n_train = static_cast<std::size_t>(
      std::floor(spec.train_fraction * static_cast<double>(n)));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);

  Split out;
  out.train_rows.assign(order.begin(), order.begin() + n_train);
  out.test_rows.assign(order.begin() + n_train, order.end());
  Dataset train = raw.subset(out.train_rows);
  Dataset test = raw.subset(out.test_rows);
  if (spec.standardize) {
    const auto stats = fit_standardization(train);
    train = apply_standardization(train, stats);
    test = apply_standardization(test, stats);
  }
  out.train = std::move(train);
  out.test = std::move(test);
  return out;
}

double toy_piecewise(double x) {
  if (x < 0.3) return 0.1 + 0.5 * x;
  if (x < 0.45) return 0.25 + 3.0 * (x - 0.3);
  if (x < 0.7) return 0.7 - 0.4 * (x - 0.45);
  return 0.6 + 1.0 * (x - 0.7);
}

double toy_smooth(double x) {
  return 0.5 + 0.3 * std::sin(2.0 * 3.14159265358979323846 * x);
}

double toy_affine(double x) { return 0.2 + 0.6 * x; }

Dataset make_toy_dataset(const std::string& function, std::size_t n,
                         double noise, std::uint64_t seed) {
  double (*target)(double) = nullptr;
  if (function == "piecewise") {
    target = toy_piecewise;
  } else if (function == "smooth") {
    target = toy_smooth;
  } else if (function == "affine") {
    target = toy_affine;
  } else {
    throw Error(ErrorCode::kConfig, "unknown toy function '" + function + "'");
  }
  if (n < 2) throw Error(ErrorCode::kEmptyDataset, "toy dataset needs n >= 2");
  auto engine = make_engine(seed, Stream::kSynthetic, 0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  Dataset ds;
  ds.task = Task::kRegression;
  ds.feature_names = {"x"};
  ds.target_name = "y";
  ds.features.resize(static_cast<Eigen::Index>(n), 1);
  ds.targets.resize(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < ds.features.rows(); ++i) {
    const double x = unif(engine);
    ds.features(i, 0) = x;
    ds.targets(i) = target(x) + noise * normal(engine);
  }
  return ds;
}

Dataset make_piecewise_regression(std::size_t n, std::size_t d, double noise,
                                  std::uint64_t seed) {
  if (n < 2) throw Error(ErrorCode::kEmptyDataset, "need n >= 2");
  if (d < 1) throw Error(ErrorCode::kBadShape, "need d >= 1");
  auto engine = make_engine(seed, Stream::kSynthetic, 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  Dataset ds;
  ds.task = Task::kRegression;
  ds.target_name = "y";
  for (std::size_t j = 0; j < d; ++j) {
    ds.feature_names.push_back("x" + std::to_string(j));
  }
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(d);
  ds.features.resize(rows, cols);
  ds.targets.resize(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    double y = 0.0;
    for (Eigen::Index k = 0; k < cols; ++k) {
      const double z = normal(engine);
      ds.features(i, k) = z;
      const double a = (k % 2 == 0 ? 1.0 : -1.0) / (1.0 + 0.25 * k);
      const double c = 0.5 * static_cast<double>(k % 3) - 0.5;
      switch (k % 4) {
        case 0:
          y += a * std::abs(z - c);
          break;
        case 1:
          y += a * std::max(0.0, z - c);
          break;
        case 2:
          y += a * z;
          break;
        default:
          y += a * std::clamp(z, -0.5, 0.5);
          break;
      }
    }
    if (cols >= 2) {
      y += 0.5 * std::max(0.0, ds.features(i, 0) + ds.features(i, 1));
    }
    ds.targets(i) = y + noise * normal(engine);
  }
  return ds;
}

}  // namespace expo
