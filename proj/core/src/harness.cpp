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

#include "expo/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include "expo/error.hpp"
#include "expo/rng.hpp"

namespace expo {
namespace {

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  try {
    return j[key].get<T>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("bad value for '") + key +
                                        "': " + e.what());
  }
}

std::size_t argmax(const Vector& v) {
  Eigen::Index best = 0;
  v.maxCoeff(&best);
  return static_cast<std::size_t>(best);
}

Explainer make_explainer(const std::string& name, const EvalConfig& eval,
                         const NeighborhoodSpec& eval_spec, std::size_t d) {
  if (name == "lime") {
    NeighborhoodSpec spec = eval_spec;
    spec.samples_m = eval.lime_samples > 0 ? eval.lime_samples
                                           : default_explainer_samples(d);
    spec.seed = eval_spec.seed + 1;
    return LimeExplainer{spec, eval.lime_ridge};
  }
  if (name == "taylor") return TaylorExplainer{};
  if (name == "saliency") return SaliencyExplainer{};
  throw Error(ErrorCode::kConfig, "unknown explainer '" + name + "'");
}

std::string format_axis_value(double v) { return format_number(v); }

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 1) throw Error(ErrorCode::kConfig, "epochs must be >= 1");
  if (batch_size < 1) throw Error(ErrorCode::kConfig, "batch_size must be >= 1");
  if (!(learning_rate > 0.0)) {
    throw Error(ErrorCode::kConfig, "learning_rate must be > 0");
  }
  for (const auto h : hidden_sizes) {
    if (h < 1) throw Error(ErrorCode::kConfig, "hidden sizes must be >= 1");
  }
  if (!(data.feature_scale > 0.0)) {
    throw Error(ErrorCode::kConfig, "feature_scale must be > 0");
  }
  if (!(data.split.train_fraction > 0.0 && data.split.train_fraction < 1.0)) {
    throw Error(ErrorCode::kConfig, "train_fraction must be in (0,1)");
  }
  RegularizerConfig reg = regularizer;
  if (reg.neighborhood.samples_m == 0) reg.neighborhood.samples_m = 1;
  reg.validate();
  eval_neighborhood.validate();
  for (const auto& name : evaluation.explainers) {
    make_explainer(name, evaluation, eval_neighborhood, 1);
  }
  if (evaluation.bound &&
      !(evaluation.bound_delta > 0.0 && evaluation.bound_delta < 1.0)) {
    throw Error(ErrorCode::kConfig, "bound delta must be in (0,1)");
  }
}

void to_json(Json& j, const TrainConfig& c) {
  Json target;
  if (const auto* name = std::get_if<std::string>(&c.data.target)) {
    target = *name;
  } else {
    target = std::get<std::size_t>(c.data.target);
  }
  j = Json{
      {"data",
       {{"source", c.data.source},
        {"path", c.data.path},
        {"target_column", target},
        {"task", to_string(c.data.task)},
        {"feature_scale", c.data.feature_scale},
        {"train_fraction", c.data.split.train_fraction},
        {"split_seed", c.data.split.seed},
        {"standardize", c.data.split.standardize},
        {"synthetic",
         {{"n", c.data.synthetic_n},
          {"d", c.data.synthetic_d},
          {"noise", c.data.synthetic_noise},
          {"seed", c.data.synthetic_seed}}}}},
      {"hidden_sizes", c.hidden_sizes},
      {"activation", to_string(c.activation)},
      {"optimizer", c.optimizer == OptimizerKind::kAdam ? "adam" : "sgd"},
      {"learning_rate", c.learning_rate},
      {"epochs", c.epochs},
      {"batch_size", c.batch_size},
      {"seed", c.seed},
      {"regularizer", c.regularizer},
      {"eval_neighborhood", c.eval_neighborhood},
      {"evaluation",
       {{"explainers", c.evaluation.explainers},
        {"lime_ridge", c.evaluation.lime_ridge},
        {"lime_samples", c.evaluation.lime_samples},
        {"max_points", c.evaluation.max_points},
        {"stability", c.evaluation.stability},
        {"bound", c.evaluation.bound},
        {"bound_delta", c.evaluation.bound_delta},
        {"bound_mc_samples", c.evaluation.bound_mc_samples},
        {"bound_max_points", c.evaluation.bound_max_points}}}};
}

TrainConfig train_config_from_json(const Json& j, TrainConfig c) {
  if (!j.is_object()) throw Error(ErrorCode::kConfig, "config must be an object");
  if (j.contains("data")) {
    const Json& d = j["data"];
    c.data.source = get_or<std::string>(d, "source", c.data.source);
    c.data.path = get_or<std::string>(d, "path", c.data.path);
    if (d.contains("target_column")) {
      const Json& t = d["target_column"];
      if (t.is_string()) {
        c.data.target = t.get<std::string>();
      } else if (t.is_number_unsigned() || t.is_number_integer()) {
        c.data.target = t.get<std::size_t>();
      } else {
        throw Error(ErrorCode::kConfig, "target_column must be name or index");
      }
    }
    c.data.task = parse_task(get_or<std::string>(d, "task", to_string(c.data.task)));
    c.data.feature_scale = get_or<double>(d, "feature_scale", c.data.feature_scale);
    c.data.split.train_fraction =
        get_or<double>(d, "train_fraction", c.data.split.train_fraction);
    c.data.split.seed = get_or<std::uint64_t>(d, "split_seed", c.data.split.seed);
    c.data.split.standardize =
        get_or<bool>(d, "standardize", c.data.split.standardize);
    if (d.contains("synthetic")) {
      const Json& s = d["synthetic"];
      c.data.synthetic_n = get_or<std::size_t>(s, "n", c.data.synthetic_n);
      c.data.synthetic_d = get_or<std::size_t>(s, "d", c.data.synthetic_d);
      c.data.synthetic_noise = get_or<double>(s, "noise", c.data.synthetic_noise);
      c.data.synthetic_seed =
          get_or<std::uint64_t>(s, "seed", c.data.synthetic_seed);
    }
  }
  c.hidden_sizes =
      get_or<std::vector<std::size_t>>(j, "hidden_sizes", c.hidden_sizes);
  c.activation = parse_activation(
      get_or<std::string>(j, "activation", to_string(c.activation)));
  const std::string optimizer = get_or<std::string>(
      j, "optimizer", c.optimizer == OptimizerKind::kAdam ? "adam" : "sgd");
  if (optimizer == "adam") {
    c.optimizer = OptimizerKind::kAdam;
  } else if (optimizer == "sgd") {
    c.optimizer = OptimizerKind::kSgd;
  } else {
    throw Error(ErrorCode::kConfig, "unknown optimizer '" + optimizer + "'");
  }
  c.learning_rate = get_or<double>(j, "learning_rate", c.learning_rate);
  c.epochs = get_or<std::size_t>(j, "epochs", c.epochs);
  c.batch_size = get_or<std::size_t>(j, "batch_size", c.batch_size);
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
  if (j.contains("regularizer")) {
    c.regularizer = regularizer_from_json(j["regularizer"], c.regularizer);
  }
  if (j.contains("eval_neighborhood")) {
    c.eval_neighborhood =
        neighborhood_from_json(j["eval_neighborhood"], c.eval_neighborhood);
  }
  if (j.contains("evaluation")) {
    const Json& e = j["evaluation"];
    auto& ev = c.evaluation;
    ev.explainers = get_or<std::vector<std::string>>(e, "explainers", ev.explainers);
    ev.lime_ridge = get_or<double>(e, "lime_ridge", ev.lime_ridge);
    ev.lime_samples = get_or<std::size_t>(e, "lime_samples", ev.lime_samples);
    ev.max_points = get_or<std::size_t>(e, "max_points", ev.max_points);
    ev.stability = get_or<bool>(e, "stability", ev.stability);
    ev.bound = get_or<bool>(e, "bound", ev.bound);
    ev.bound_delta = get_or<double>(e, "bound_delta", ev.bound_delta);
    ev.bound_mc_samples =
        get_or<std::size_t>(e, "bound_mc_samples", ev.bound_mc_samples);
    ev.bound_max_points =
        get_or<std::size_t>(e, "bound_max_points", ev.bound_max_points);
  }
  return c;
}

Dataset load_dataset(const DataConfig& config) {
  Dataset ds;
  if (config.source == "csv") {
    if (config.path.empty()) {
      throw Error(ErrorCode::kConfig, "csv source needs a path");
    }
    ds = load_csv(config.path, config.target, config.task);
  } else if (config.source == "synthetic_piecewise") {
    ds = make_piecewise_regression(config.synthetic_n, config.synthetic_d,
                                   config.synthetic_noise,
                                   config.synthetic_seed);
  } else if (config.source.rfind("toy_", 0) == 0) {
    ds = make_toy_dataset(config.source.substr(4), config.synthetic_n,
                          config.synthetic_noise, config.synthetic_seed);
  } else {
    throw Error(ErrorCode::kConfig, "unknown data source '" + config.source + "'");
  }
  if (config.feature_scale != 1.0) ds.features /= config.feature_scale;
  return ds;
}

Split prepare_data(const DataConfig& config) {
  return split(load_dataset(config), config.split);
}

RegularizerConfig resolve_regularizer(const RegularizerConfig& config,
                                      std::size_t d) {
  RegularizerConfig out = config;
  if (out.neighborhood.samples_m == 0) {
    out.neighborhood.samples_m = default_regularizer_samples(out.kind, d);
  }
  return out;
}

TrainResult train(const TrainConfig& config, const Dataset& train_set) {
  config.validate();
  const std::size_t n = train_set.size();
  const std::size_t d = train_set.dim();
  if (n == 0) throw Error(ErrorCode::kEmptyDataset, "empty training set");
  const bool classification = train_set.task == Task::kClassification;
  const std::size_t outputs = train_set.output_dim();
  if (outputs == 0) throw Error(ErrorCode::kBadShape, "dataset has no outputs");

  std::vector<std::size_t> sizes{d};
  sizes.insert(sizes.end(), config.hidden_sizes.begin(),
               config.hidden_sizes.end());
  sizes.push_back(outputs);
  Mlp model = Mlp::init(sizes, config.activation, config.seed);

  RegularizerConfig reg = resolve_regularizer(config.regularizer, d);
  reg.neighborhood.seed = mix_counter(config.seed, reg.neighborhood.seed);
  const bool regularize = reg.active();

  Adam adam(AdamParams{config.learning_rate});
  const Sgd sgd(config.learning_rate);

  TrainResult result{model, {}};
  std::vector<std::size_t> order(n);
  std::vector<std::uint64_t> counters;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto engine = make_engine(config.seed, Stream::kBatch, epoch);
    std::shuffle(order.begin(), order.end(), engine);

    double epoch_pred = 0.0;
    double epoch_reg = 0.0;
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t stop = std::min(n, start + config.batch_size);
      const auto b = static_cast<Eigen::Index>(stop - start);
      Matrix x(b, static_cast<Eigen::Index>(d));
      counters.assign(static_cast<std::size_t>(b), 0);
      for (Eigen::Index r = 0; r < b; ++r) {
        const std::size_t row = order[start + static_cast<std::size_t>(r)];
        x.row(r) = train_set.features.row(static_cast<Eigen::Index>(row));
        counters[static_cast<std::size_t>(r)] =
            static_cast<std::uint64_t>(epoch) * n + start +
            static_cast<std::size_t>(r);
      }

      GradientTape tape = GradientTape::zeros_like(model);
      const ForwardTrace trace = model.trace(x);
      const Matrix& out = trace.values.back();
      Matrix upstream(b, out.cols());
      double pred_loss = 0.0;
      const double inv_b = 1.0 / static_cast<double>(b);
      for (Eigen::Index r = 0; r < b; ++r) {
        const auto row = static_cast<Eigen::Index>(
            order[start + static_cast<std::size_t>(r)]);
        if (classification) {
          const Eigen::RowVectorXd z = out.row(r);
          const double top = z.maxCoeff();
          Eigen::RowVectorXd p = (z.array() - top).exp();
          const double norm = p.sum();
          p /= norm;
          const auto label = static_cast<Eigen::Index>(train_set.targets(row));
          pred_loss += -(z(label) - top - std::log(norm));
          p(label) -= 1.0;
          upstream.row(r) = inv_b * p;
        } else {
          const double diff = out(r, 0) - train_set.targets(row);
          pred_loss += diff * diff;
          upstream(r, 0) = 2.0 * inv_b * diff;
        }
      }
      model.backward(trace, upstream, tape);

      double reg_loss = 0.0;
      if (regularize) {
        reg_loss = accumulate_regularizer(model, x, counters, reg,
                                          reg.gamma * inv_b, tape);
      }
      const double objective = (pred_loss + reg.gamma * reg_loss) * inv_b;
      if (!std::isfinite(objective)) {
        throw Error(ErrorCode::kNonFiniteLoss,
                    "objective " + std::to_string(objective) + " at epoch " +
                        std::to_string(epoch) + ", batch starting at " +
                        std::to_string(start));
      }
      if (config.optimizer == OptimizerKind::kAdam) {
        adam.step(model, tape);
      } else {
        sgd.step(model, tape);
      }
      epoch_pred += pred_loss;
      epoch_reg += reg_loss;
    }
    result.log.push_back({epoch, epoch_pred / static_cast<double>(n),
                          epoch_reg / static_cast<double>(n)});
  }
  result.model = std::move(model);
  return result;
}

Summary predictive_performance(const Predictor& model, const Dataset& ds) {
  const Matrix out = model.predict(ds.features);
  std::vector<double> per_point(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    if (ds.task == Task::kClassification) {
      per_point[i] =
          static_cast<int>(argmax(out.row(r).transpose())) == ds.label(i) ? 1.0
                                                                          : 0.0;
    } else {
      const double diff = out(r, 0) - ds.targets(r);
      per_point[i] = diff * diff;
    }
  }
  return summarize(per_point);
}

std::string regularizer_label(const RegularizerConfig& config) {
  if (!config.active()) return "None";
  switch (config.kind) {
    case RegularizerKind::kFidelity:
      return "ExpO-F";
    case RegularizerKind::kFidelity1d:
      return "ExpO-F-1D";
    case RegularizerKind::kStability:
      return "ExpO-S";
    case RegularizerKind::kNone:
      break;
  }
  return "None";
}

MetricsReport evaluate(const Predictor& model, const Dataset& test_set,
                       const EvalConfig& eval,
                       const NeighborhoodSpec& eval_spec,
                       const std::string& label) {
  if (test_set.dim() != model.input_dim()) {
    throw Error(ErrorCode::kBadShape, "model and dataset widths differ");
  }
  eval_spec.validate();
  MetricsReport report;
  report.label = label;
  report.predictive_name =
      test_set.task == Task::kClassification ? "ACC" : "MSE";
  report.predictive = predictive_performance(model, test_set);

  const std::size_t points =
      eval.max_points == 0 ? test_set.size()
                           : std::min(eval.max_points, test_set.size());
  const std::size_t d = test_set.dim();
  for (const auto& name : eval.explainers) {
    const Explainer explainer = make_explainer(name, eval, eval_spec, d);
    const std::string prefix = explainer_name(explainer);
    if (std::holds_alternative<SaliencyExplainer>(explainer)) {
      MetricRow row{prefix + "-S", "pred", {}, {}};
      for (std::size_t i = 0; i < points; ++i) {
        const Vector x =
            test_set.features.row(static_cast<Eigen::Index>(i)).transpose();
        const std::size_t cls = argmax(model.predict_one(x));
        row.per_point.push_back(
            stability_metric(model, explainer, x, cls, eval_spec, i));
      }
      row.value = summarize(row.per_point);
      report.rows.push_back(std::move(row));
      continue;
    }
    for (std::size_t o = 0; o < model.output_dim(); ++o) {
      MetricRow pf{prefix + "-PF", std::to_string(o), {}, {}};
      MetricRow nf{prefix + "-NF", std::to_string(o), {}, {}};
      MetricRow st{prefix + "-S", std::to_string(o), {}, {}};
      for (std::size_t i = 0; i < points; ++i) {
        const Vector x =
            test_set.features.row(static_cast<Eigen::Index>(i)).transpose();
        const Explanation e = explain(explainer, model, x, o, i);
        pf.per_point.push_back(point_fidelity(model, e, x));
        nf.per_point.push_back(
            neighborhood_fidelity(model, e, x, eval_spec, i));
        if (eval.stability) {
          st.per_point.push_back(
              stability_metric(model, explainer, x, o, eval_spec, i));
        }
      }
      pf.value = summarize(pf.per_point);
      nf.value = summarize(nf.per_point);
      st.value = summarize(st.per_point);
      report.rows.push_back(std::move(pf));
      report.rows.push_back(std::move(nf));
      if (eval.stability) report.rows.push_back(std::move(st));
    }
  }
  return report;
}

void to_json(Json& j, const ExperimentReport& report) {
  Json log = Json::array();
  for (const auto& e : report.log) {
    log.push_back(Json{{"epoch", e.epoch},
                       {"predictive_loss", e.predictive_loss},
                       {"regularizer_loss", e.regularizer_loss}});
  }
  j = Json{{"run_id", report.run_id},
           {"config", report.config},
           {"train_predictive", report.train_predictive},
           {"test_predictive", report.test_predictive},
           {"metrics", report.metrics},
           {"training_log", std::move(log)},
           {"wall_seconds", report.wall_seconds}};
  if (report.bound) j["bound"] = *report.bound;
  if (!report.error.empty()) j["error"] = report.error;
}

std::string run_id(const Json& config) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const unsigned char c : config.dump()) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(hash));
  return std::string(buffer, 12);
}

namespace {

ExperimentReport evaluate_split(const TrainConfig& config, const Mlp& model,
                                const Split& data) {
  ExperimentReport report;
  report.config = config;
  report.run_id = run_id(report.config);
  report.train_predictive = predictive_performance(model, data.train);
  report.test_predictive = predictive_performance(model, data.test);
  report.metrics = evaluate(model, data.test, config.evaluation,
                            config.eval_neighborhood,
                            regularizer_label(config.regularizer));
  if (config.evaluation.bound) {
    const auto cap = [&](const Dataset& ds) {
      const auto rows = static_cast<Eigen::Index>(
          std::min(config.evaluation.bound_max_points, ds.size()));
      return Matrix(ds.features.topRows(rows));
    };
    report.bound = bound_report(model, cap(data.train), cap(data.test),
                                config.eval_neighborhood,
                                config.evaluation.bound_mc_samples,
                                config.evaluation.bound_delta, 0);
  }
  return report;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

Experiment run_experiment(const TrainConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const Split data = prepare_data(config.data);
  TrainResult trained = train(config, data.train);
  Experiment out;
  out.report = evaluate_split(config, trained.model, data);
  out.report.log = std::move(trained.log);
  out.report.wall_seconds = seconds_since(start);
  out.model = std::move(trained.model);
  return out;
}

ExperimentReport evaluate_model(const TrainConfig& config, const Mlp& model) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report =
      evaluate_split(config, model, prepare_data(config.data));
  report.wall_seconds = seconds_since(start);
  return report;
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kGamma:
      return "gamma";
    case SweepAxis::kSigmaReg:
      return "sigma_reg";
    case SweepAxis::kSigmaEval:
      return "sigma_eval";
  }
  return "gamma";
}

SweepAxis parse_sweep_axis(const std::string& name) {
  if (name == "gamma") return SweepAxis::kGamma;
  if (name == "sigma_reg") return SweepAxis::kSigmaReg;
  if (name == "sigma_eval") return SweepAxis::kSigmaEval;
  throw Error(ErrorCode::kConfig, "unknown sweep axis '" + name + "'");
}

SweepResult sweep(const TrainConfig& config, SweepAxis axis,
                  const std::vector<double>& values) {
  if (values.empty()) throw Error(ErrorCode::kConfig, "sweep needs values");
  SweepResult result{axis, values, {}};
  const auto label_for = [&](double v) {
    return to_string(axis) + "=" + format_axis_value(v);
  };

  if (axis == SweepAxis::kSigmaEval) {
    std::optional<Split> data;
    std::optional<TrainResult> trained;
    std::string failure;
    try {
      data = prepare_data(config.data);
      trained = train(config, data->train);
    } catch (const Error& e) {
      failure = e.what();
    }
    for (const double v : values) {
      const auto start = std::chrono::steady_clock::now();
      TrainConfig c = config;
      c.eval_neighborhood.width = v;
      ExperimentReport report;
      if (!failure.empty()) {
        report.config = c;
        report.run_id = run_id(report.config);
        report.error = failure;
      } else {
        try {
          report = evaluate_split(c, trained->model, *data);
          report.log = trained->log;
        } catch (const Error& e) {
          report.config = c;
          report.run_id = run_id(report.config);
          report.error = e.what();
        }
      }
      report.metrics.label = label_for(v);
      report.wall_seconds = seconds_since(start);
      result.reports.push_back(std::move(report));
    }
    return result;
  }

  for (const double v : values) {
    TrainConfig c = config;
    if (axis == SweepAxis::kGamma) {
      c.regularizer.gamma = v;
    } else {
      c.regularizer.neighborhood.width = v;
    }
    ExperimentReport report;
    try {
      report = run_experiment(c).report;
    } catch (const Error& e) {
      report.config = c;
      report.run_id = run_id(report.config);
      report.error = e.what();
    }
    report.metrics.label = label_for(v);
    result.reports.push_back(std::move(report));
  }
  return result;
}

void write_frontier_csv(std::ostream& out, const SweepResult& result) {
  const MetricsReport* layout = nullptr;
  for (const auto& r : result.reports) {
    if (r.error.empty()) {
      layout = &r.metrics;
      break;
    }
  }
  out << "axis,value,label,predictive_metric,predictive";
  if (layout != nullptr) {
    for (const auto& row : layout->rows) {
      out << ',' << row.name << '[' << row.output << ']';
    }
  }
  out << ",error\n";
  for (std::size_t i = 0; i < result.reports.size(); ++i) {
    const auto& r = result.reports[i];
    out << to_string(result.axis) << ',' << format_number(result.values[i])
        << ',' << r.metrics.label << ',';
    if (!r.error.empty() || layout == nullptr) {
      out << ',';
      if (layout != nullptr) {
        for (std::size_t k = 0; k < layout->rows.size(); ++k) out << ',';
      }
      std::string message = r.error;
      std::replace(message.begin(), message.end(), ',', ';');
      out << ',' << message << '\n';
      continue;
    }
    out << r.metrics.predictive_name << ','
        << format_number(r.metrics.predictive.mean);
    for (const auto& row : r.metrics.rows) {
      out << ',' << format_number(row.value.mean);
    }
    out << ",\n";
  }
}

DemoReport demo_toy(const DemoConfig& config) {
  if (config.grid_points < 2) {
    throw Error(ErrorCode::kConfig, "grid needs at least 2 points");
  }
  const Dataset data = make_toy_dataset(config.function, config.train_points,
                                        config.noise, config.seed);
  TrainConfig tc;
  tc.hidden_sizes = config.hidden_sizes;
  tc.activation = Activation::kTanh;
  tc.optimizer = config.optimizer;
  tc.learning_rate = config.learning_rate;
  tc.epochs = config.epochs;
  tc.batch_size = config.batch_size;
  tc.seed = config.seed;
  tc.regularizer = config.regularizer;
  const Mlp model = train(tc, data).model;

  DemoReport report;
  report.taylor_first =
      taylor_explain(model, Vector::Constant(1, config.taylor_first), 0);
  report.taylor_second =
      taylor_explain(model, Vector::Constant(1, config.taylor_second), 0);
  const Vector anchor = Vector::Constant(1, config.anchor);
  report.lime = lime_explain(model, anchor, config.lime_neighborhood, 0.0, 0, 0);
  report.lime_neighborhood_fidelity = neighborhood_fidelity(
      model, report.lime, anchor, config.lime_neighborhood, 1);

  Matrix grid(static_cast<Eigen::Index>(config.grid_points), 1);
  for (Eigen::Index k = 0; k < grid.rows(); ++k) {
    grid(k, 0) = static_cast<double>(k) / static_cast<double>(grid.rows() - 1);
  }
  const Matrix f = model.predict(grid);
  for (Eigen::Index k = 0; k < grid.rows(); ++k) {
    const Vector x = grid.row(k).transpose();
    report.rows.push_back({x(0), f(k, 0), report.taylor_first.evaluate(x),
                           report.taylor_second.evaluate(x),
                           report.lime.evaluate(x)});
  }
  return report;
}

void write_demo_csv(std::ostream& out, const DemoReport& report) {
  out << "x,f,taylor1,taylor2,lime\n";
  for (const auto& r : report.rows) {
    out << format_number(r.x) << ',' << format_number(r.f) << ','
        << format_number(r.taylor_first) << ','
        << format_number(r.taylor_second) << ',' << format_number(r.lime)
        << '\n';
  }
}

StabilityImageConfig default_stability_image_config(const std::string& csv) {
  StabilityImageConfig config;
  TrainConfig& c = config.base;
  c.data.source = "csv";
  c.data.path = csv;
  c.data.target = std::string("label");
  c.data.task = Task::kClassification;
  c.data.feature_scale = 16.0;
  c.data.split = {0.8, 0, false};
  c.hidden_sizes = {128};
  c.activation = Activation::kTanh;
  c.optimizer = OptimizerKind::kAdam;
  c.learning_rate = 3e-3;
  c.epochs = 100;
  c.batch_size = 32;
  c.seed = 0;
  c.regularizer = {RegularizerKind::kStability, 0.0,
                   {NeighborhoodSpec::Kind::kUniform, 0.05, 5, 1},
                   kDefaultRidge};
  c.eval_neighborhood = {NeighborhoodSpec::Kind::kUniform, 0.05, 20, 2};
  c.evaluation.explainers = {"saliency"};
  c.evaluation.max_points = 200;
  config.gammas = {0.0, 30.0};
  return config;
}

StabilityImageResult stability_image_experiment(
    const StabilityImageConfig& config) {
  if (config.gammas.empty()) {
    throw Error(ErrorCode::kConfig, "stability experiment needs gammas");
  }
  const Split data = prepare_data(config.base.data);
  StabilityImageResult result;
  for (const double gamma : config.gammas) {
    TrainConfig c = config.base;
    c.regularizer.kind = RegularizerKind::kStability;
    c.regularizer.gamma = gamma;
    if (std::find(c.evaluation.explainers.begin(), c.evaluation.explainers.end(),
                  "saliency") == c.evaluation.explainers.end()) {
      c.evaluation.explainers.push_back("saliency");
    }
    const auto start = std::chrono::steady_clock::now();
    TrainResult trained = train(c, data.train);
    ExperimentReport report = evaluate_split(c, trained.model, data);
    report.log = std::move(trained.log);
    report.wall_seconds = seconds_since(start);
    result.reports.push_back(std::move(report));

    std::vector<Explanation> maps;
    const std::size_t k = std::min(config.saliency_images, data.test.size());
    for (std::size_t i = 0; i < k; ++i) {
      const Vector x =
          data.test.features.row(static_cast<Eigen::Index>(i)).transpose();
      maps.push_back(
          saliency_explain(trained.model, x, argmax(trained.model.predict_one(x))));
    }
    result.saliency.push_back(std::move(maps));
  }
  return result;
}

void write_saliency_csv(std::ostream& out, const StabilityImageResult& result,
                        const std::vector<double>& gammas) {
  std::size_t width = 0;
  for (const auto& maps : result.saliency) {
    if (!maps.empty()) width = static_cast<std::size_t>(maps.front().coefficients.size());
  }
  out << "gamma,image,class";
  for (std::size_t p = 0; p < width; ++p) out << ",s" << p;
  out << '\n';
  for (std::size_t g = 0; g < result.saliency.size(); ++g) {
    for (std::size_t i = 0; i < result.saliency[g].size(); ++i) {
      const auto& e = result.saliency[g][i];
      out << format_number(gammas[g]) << ',' << i << ',' << e.output_index;
      for (Eigen::Index p = 0; p < e.coefficients.size(); ++p) {
        out << ',' << format_number(std::abs(e.coefficients(p)));
      }
      out << '\n';
    }
  }
}

}  // namespace expo
