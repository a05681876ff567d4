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

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "expo/bounds.hpp"
#include "expo/error.hpp"
#include "expo/harness.hpp"
#include "expo/serialization.hpp"

namespace fs = std::filesystem;
using expo::Json;

namespace {

// Flags are collected as a sparse JSON patch so that unset flags keep the
// TrainConfig defaults and a --config document can be layered on top.
struct NeighborhoodFlags {
  std::optional<std::string> kind;
  std::optional<double> width;
  std::optional<std::size_t> m;
  std::optional<std::uint64_t> seed;

  void add(CLI::App* app, const std::string& prefix, const std::string& group) {
    app->add_option("--" + prefix + "-neighborhood", kind,
                    "gaussian or uniform")
        ->group(group);
    app->add_option("--" + prefix + "-width", width,
                    "gaussian sigma or uniform radius")
        ->group(group);
    app->add_option("--" + prefix + "-samples", m, "samples per neighborhood")
        ->group(group);
    app->add_option("--" + prefix + "-seed", seed, "neighborhood seed")
        ->group(group);
  }

  Json patch(const expo::NeighborhoodSpec& base) const {
    Json j = Json::object();
    const bool gaussian =
        kind ? *kind == "gaussian"
             : base.kind == expo::NeighborhoodSpec::Kind::kGaussian;
    if (kind) j["kind"] = *kind;
    if (width) j[gaussian ? "sigma" : "radius"] = *width;
    if (m) j["m"] = *m;
    if (seed) j["seed"] = *seed;
    return j;
  }
};

struct TrainFlags {
  std::optional<std::string> source, path, target, task;
  std::optional<double> feature_scale, train_fraction;
  std::optional<std::uint64_t> split_seed;
  std::optional<bool> standardize;
  std::optional<std::size_t> synthetic_n, synthetic_d;
  std::optional<double> synthetic_noise;
  std::optional<std::uint64_t> synthetic_seed;
  std::optional<std::vector<std::size_t>> hidden;
  std::optional<std::string> activation, optimizer;
  std::optional<double> lr;
  std::optional<std::size_t> epochs, batch_size;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> regularizer;
  std::optional<double> gamma, reg_ridge;
  NeighborhoodFlags reg_neighborhood, eval_neighborhood;
  std::optional<std::vector<std::string>> explainers;
  std::optional<double> lime_ridge;
  std::optional<std::size_t> lime_samples, max_points;
  std::optional<bool> bound, stability;
  std::optional<double> bound_delta;
  std::optional<std::size_t> bound_mc, bound_max_points;
  std::string config_path;

  void add(CLI::App* app) {
    const std::string data = "Data";
    app->add_option("--source", source,
                    "csv, synthetic_piecewise, toy_piecewise, toy_smooth or "
                    "toy_affine")
        ->group(data);
    app->add_option("--data", path, "CSV file")->group(data);
    app->add_option("--target", target, "target column name or index")
        ->group(data);
    app->add_option("--task", task, "regression or classification")
        ->group(data);
    app->add_option("--feature-scale", feature_scale,
                    "divide raw features by this")
        ->group(data);
    app->add_option("--train-fraction", train_fraction)->group(data);
    app->add_option("--split-seed", split_seed)->group(data);
    app->add_option("--standardize", standardize)->group(data);
    app->add_option("--synthetic-n", synthetic_n)->group(data);
    app->add_option("--synthetic-d", synthetic_d)->group(data);
    app->add_option("--synthetic-noise", synthetic_noise)->group(data);
    app->add_option("--synthetic-seed", synthetic_seed)->group(data);

    const std::string model = "Model";
    app->add_option("--hidden", hidden, "hidden layer widths")
        ->delimiter(',')
        ->group(model);
    app->add_option("--activation", activation, "tanh or relu")->group(model);
    app->add_option("--optimizer", optimizer, "adam or sgd")->group(model);
    app->add_option("--lr", lr, "learning rate")->group(model);
    app->add_option("--epochs", epochs)->group(model);
    app->add_option("--batch-size", batch_size)->group(model);
    app->add_option("--seed", seed)->group(model);

    const std::string reg = "Regularizer";
    app->add_option("--regularizer", regularizer,
                    "none, fidelity, fidelity_1d or stability")
        ->group(reg);
    app->add_option("--gamma", gamma)->group(reg);
    app->add_option("--reg-ridge", reg_ridge)->group(reg);
    reg_neighborhood.add(app, "reg", reg);

    const std::string eval = "Evaluation";
    eval_neighborhood.add(app, "eval", eval);
    app->add_option("--explainers", explainers, "lime, taylor, saliency")
        ->delimiter(',')
        ->group(eval);
    app->add_option("--lime-ridge", lime_ridge)->group(eval);
    app->add_option("--lime-samples", lime_samples)->group(eval);
    app->add_option("--max-points", max_points,
                    "evaluate the first N test points (0 = all)")
        ->group(eval);
    app->add_option("--stability", stability,
                    "compute the stability rows (slow: one refit per sample)")
        ->group(eval);
    app->add_option("--bound", bound, "also compute the generalization bound")
        ->group(eval);
    app->add_option("--bound-delta", bound_delta)->group(eval);
    app->add_option("--bound-mc", bound_mc)->group(eval);
    app->add_option("--bound-max-points", bound_max_points)->group(eval);

    app->add_option("--config", config_path,
                    "JSON config; its fields override flags");
  }

  expo::TrainConfig resolve(expo::TrainConfig base = {}) const {
    Json j = Json::object();
    Json d = Json::object();
    if (source) d["source"] = *source;
    if (path) {
      d["path"] = *path;
      if (!source) d["source"] = "csv";
    }
    if (target) {
      const bool numeric =
          !target->empty() &&
          target->find_first_not_of("0123456789") == std::string::npos;
      if (numeric) {
        d["target_column"] = std::stoull(*target);
      } else {
        d["target_column"] = *target;
      }
    }
    if (task) d["task"] = *task;
    if (feature_scale) d["feature_scale"] = *feature_scale;
    if (train_fraction) d["train_fraction"] = *train_fraction;
    if (split_seed) d["split_seed"] = *split_seed;
    if (standardize) d["standardize"] = *standardize;
    Json s = Json::object();
    if (synthetic_n) s["n"] = *synthetic_n;
    if (synthetic_d) s["d"] = *synthetic_d;
    if (synthetic_noise) s["noise"] = *synthetic_noise;
    if (synthetic_seed) s["seed"] = *synthetic_seed;
    if (!s.empty()) d["synthetic"] = s;
    if (!d.empty()) j["data"] = d;

    if (hidden) j["hidden_sizes"] = *hidden;
    if (activation) j["activation"] = *activation;
    if (optimizer) j["optimizer"] = *optimizer;
    if (lr) j["learning_rate"] = *lr;
    if (epochs) j["epochs"] = *epochs;
    if (batch_size) j["batch_size"] = *batch_size;
    if (seed) j["seed"] = *seed;

    Json r = Json::object();
    if (regularizer) r["kind"] = *regularizer;
    if (gamma) r["gamma"] = *gamma;
    if (reg_ridge) r["ridge"] = *reg_ridge;
    const Json rn = reg_neighborhood.patch(base.regularizer.neighborhood);
    if (!rn.empty()) r["neighborhood"] = rn;
    if (!r.empty()) j["regularizer"] = r;

    const Json en = eval_neighborhood.patch(base.eval_neighborhood);
    if (!en.empty()) j["eval_neighborhood"] = en;

    Json e = Json::object();
    if (explainers) e["explainers"] = *explainers;
    if (lime_ridge) e["lime_ridge"] = *lime_ridge;
    if (lime_samples) e["lime_samples"] = *lime_samples;
    if (max_points) e["max_points"] = *max_points;
    if (stability) e["stability"] = *stability;
    if (bound) e["bound"] = *bound;
    if (bound_delta) e["bound_delta"] = *bound_delta;
    if (bound_mc) e["bound_mc_samples"] = *bound_mc;
    if (bound_max_points) e["bound_max_points"] = *bound_max_points;
    if (!e.empty()) j["evaluation"] = e;

    expo::TrainConfig config = expo::train_config_from_json(j, base);
    if (!config_path.empty()) {
      config = expo::train_config_from_json(expo::read_json_file(config_path),
                                            config);
    }
    config.validate();
    return config;
  }
};

std::string metrics_csv(const std::vector<expo::MetricsReport>& reports) {
  std::ostringstream out;
  expo::write_metrics_csv(out, reports);
  return out.str();
}

void write(const fs::path& dir, const std::string& name,
           const std::string& text) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw expo::Error(expo::ErrorCode::kIo,
                      "cannot create " + dir.string() + ": " + ec.message());
  }
  expo::write_text_file_atomic((dir / name).string(), text);
}

void write_report(const fs::path& dir, const expo::ExperimentReport& report) {
  write(dir, "report.json", Json(report).dump(2) + "\n");
  write(dir, "metrics.csv", metrics_csv({report.metrics}));
}

std::string summary_line(const expo::ExperimentReport& report) {
  std::ostringstream out;
  out << report.metrics.label << ' ' << report.metrics.predictive_name << '='
      << expo::format_number(report.metrics.predictive.mean);
  for (const auto& row : report.metrics.rows) {
    out << ' ' << row.name << '[' << row.output
        << "]=" << expo::format_number(row.value.mean);
  }
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Train and evaluate explanation-regularized neural networks"};
  app.require_subcommand(1);
  std::string out_dir = ".";
  app.add_option("-o,--out", out_dir, "output directory")
      ->capture_default_str();

  TrainFlags train_flags;
  auto* train_cmd = app.add_subcommand("train", "train a model and evaluate it");
  train_flags.add(train_cmd);

  TrainFlags eval_flags;
  std::string model_path;
  auto* eval_cmd =
      app.add_subcommand("evaluate", "evaluate a saved model on the test split");
  eval_flags.add(eval_cmd);
  eval_cmd->add_option("--model", model_path, "model.json from train")
      ->required();

  TrainFlags sweep_flags;
  std::string axis = "gamma";
  std::vector<double> values;
  auto* sweep_cmd = app.add_subcommand("sweep", "sweep gamma or a neighborhood width");
  sweep_flags.add(sweep_cmd);
  sweep_cmd->add_option("--axis", axis, "gamma, sigma_reg or sigma_eval")
      ->capture_default_str();
  sweep_cmd->add_option("--values", values)->delimiter(',')->required();

  expo::DemoConfig demo;
  std::string demo_reg = "none";
  std::string demo_optimizer = "sgd";
  double demo_gamma = 0.0;
  auto* demo_cmd = app.add_subcommand("demo-toy", "1-D toy curves for plotting");
  demo_cmd->add_option("--function", demo.function, "piecewise, smooth or affine")
      ->capture_default_str();
  demo_cmd->add_option("--anchor", demo.anchor)->capture_default_str();
  demo_cmd->add_option("--taylor-first", demo.taylor_first)->capture_default_str();
  demo_cmd->add_option("--taylor-second", demo.taylor_second)->capture_default_str();
  demo_cmd->add_option("--lime-radius", demo.lime_neighborhood.width)
      ->capture_default_str();
  demo_cmd->add_option("--lime-samples", demo.lime_neighborhood.samples_m)
      ->capture_default_str();
  demo_cmd->add_option("--lime-seed", demo.lime_neighborhood.seed)
      ->capture_default_str();
  demo_cmd->add_option("--grid", demo.grid_points)->capture_default_str();
  demo_cmd->add_option("--train-points", demo.train_points)->capture_default_str();
  demo_cmd->add_option("--noise", demo.noise)->capture_default_str();
  demo_cmd->add_option("--hidden", demo.hidden_sizes)->delimiter(',');
  demo_cmd->add_option("--epochs", demo.epochs)->capture_default_str();
  demo_cmd->add_option("--optimizer", demo_optimizer, "sgd or adam")
      ->check(CLI::IsMember({"sgd", "adam"}))
      ->capture_default_str();
  demo_cmd->add_option("--lr", demo.learning_rate)->capture_default_str();
  demo_cmd->add_option("--batch-size", demo.batch_size)->capture_default_str();
  demo_cmd->add_option("--seed", demo.seed)->capture_default_str();
  demo_cmd->add_option("--regularizer", demo_reg)->capture_default_str();
  demo_cmd->add_option("--gamma", demo_gamma)->capture_default_str();

  std::string image_csv = std::string(EXPO_DATA_DIR) + "/digits8x8.csv";
  std::vector<double> gammas;
  std::size_t saliency_images = 10;
  TrainFlags image_flags;
  auto* image_cmd = app.add_subcommand(
      "stability-image", "saliency stability with and without ExpO-S on images");
  image_flags.add(image_cmd);
  image_cmd->add_option("--images", image_csv, "image CSV (pixels 0-16, label)")
      ->capture_default_str();
  image_cmd->add_option("--gammas", gammas)->delimiter(',');
  image_cmd->add_option("--saliency-images", saliency_images)
      ->capture_default_str();

  TrainFlags bound_flags;
  std::string bound_model;
  auto* bound_cmd = app.add_subcommand(
      "bound", "generalization bound on neighborhood fidelity");
  bound_flags.add(bound_cmd);
  bound_cmd->add_option("--model", bound_model,
                        "model.json; trains from the config when omitted");

  TrainFlags describe_flags;
  auto* describe_cmd = app.add_subcommand("describe", "dataset summary as JSON");
  describe_flags.add(describe_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const fs::path out(out_dir);
  try {
    if (*train_cmd) {
      const expo::TrainConfig config = train_flags.resolve();
      expo::Experiment run = expo::run_experiment(config);
      write_report(out, run.report);
      expo::save_model(*run.model, (out / "model.json").string());
      std::cout << summary_line(run.report) << '\n';
    } else if (*eval_cmd) {
      const expo::TrainConfig config = eval_flags.resolve();
      const expo::Mlp model = expo::load_model(model_path);
      const expo::ExperimentReport report = expo::evaluate_model(config, model);
      write_report(out, report);
      std::cout << summary_line(report) << '\n';
    } else if (*sweep_cmd) {
      const expo::TrainConfig config = sweep_flags.resolve();
      const expo::SweepResult result =
          expo::sweep(config, expo::parse_sweep_axis(axis), values);
      std::ostringstream frontier;
      expo::write_frontier_csv(frontier, result);
      write(out, "frontier.csv", frontier.str());
      Json reports = Json::array();
      std::vector<expo::MetricsReport> metrics;
      for (const auto& r : result.reports) {
        reports.push_back(r);
        if (r.error.empty()) metrics.push_back(r.metrics);
        std::cout << (r.error.empty() ? summary_line(r)
                                      : r.metrics.label + " error: " + r.error)
                  << '\n';
      }
      write(out, "report.json",
            Json{{"axis", axis}, {"values", values}, {"runs", reports}}.dump(2) +
                "\n");
      if (!metrics.empty()) write(out, "metrics.csv", metrics_csv(metrics));
    } else if (*demo_cmd) {
      demo.optimizer = demo_optimizer == "adam" ? expo::OptimizerKind::kAdam
                                                : expo::OptimizerKind::kSgd;
      demo.regularizer.kind = expo::parse_regularizer_kind(demo_reg);
      demo.regularizer.gamma = demo_gamma;
      const expo::DemoReport report = expo::demo_toy(demo);
      std::ostringstream csv;
      expo::write_demo_csv(csv, report);
      write(out, "demo.csv", csv.str());
      write(out, "report.json",
            Json{{"taylor_first", report.taylor_first},
                 {"taylor_second", report.taylor_second},
                 {"lime", report.lime},
                 {"lime_neighborhood_fidelity",
                  report.lime_neighborhood_fidelity},
                 {"grid_points", report.rows.size()}}
                    .dump(2) +
                "\n");
      std::cout << "taylor slopes " << report.taylor_first.coefficients(0)
                << ' ' << report.taylor_second.coefficients(0)
                << ", lime slope " << report.lime.coefficients(0) << '\n';
    } else if (*image_cmd) {
      expo::StabilityImageConfig config =
          expo::default_stability_image_config(image_csv);
      config.base = image_flags.resolve(config.base);
      if (!gammas.empty()) config.gammas = gammas;
      config.saliency_images = saliency_images;
      const expo::StabilityImageResult result =
          expo::stability_image_experiment(config);
      Json reports = Json::array();
      std::vector<expo::MetricsReport> metrics;
      for (std::size_t g = 0; g < result.reports.size(); ++g) {
        expo::ExperimentReport r = result.reports[g];
        r.metrics.label = "gamma=" + expo::format_number(config.gammas[g]);
        reports.push_back(r);
        metrics.push_back(r.metrics);
        std::cout << summary_line(r) << '\n';
      }
      write(out, "report.json",
            Json{{"gammas", config.gammas}, {"runs", reports}}.dump(2) + "\n");
      write(out, "metrics.csv", metrics_csv(metrics));
      std::ostringstream saliency;
      expo::write_saliency_csv(saliency, result, config.gammas);
      write(out, "saliency.csv", saliency.str());
    } else if (*bound_cmd) {
      expo::TrainConfig config = bound_flags.resolve();
      config.evaluation.bound = true;
      expo::ExperimentReport report;
      if (bound_model.empty()) {
        report = expo::run_experiment(config).report;
      } else {
        report = expo::evaluate_model(config, expo::load_model(bound_model));
      }
      write_report(out, report);
      const expo::BoundReport& b = *report.bound;
      std::cout << "mean train residual " << expo::format_number(b.mean_train_residual)
                << ", C " << expo::format_number(b.variance_bound_C)
                << ", bound " << expo::format_number(b.bound_value)
                << ", mean test residual "
                << expo::format_number(b.mean_test_residual) << '\n';
    } else if (*describe_cmd) {
      const expo::TrainConfig config = describe_flags.resolve();
      const expo::Dataset ds = expo::load_dataset(config.data);
      Json target;
      if (const auto* name = std::get_if<std::string>(&config.data.target)) {
        target = *name;
      } else {
        target = std::get<std::size_t>(config.data.target);
      }
      std::cout << Json{{"n", ds.size()},
                        {"d", ds.dim()},
                        {"task", expo::to_string(ds.task)},
                        {"target_column", ds.target_name.empty() ? target
                                                                 : Json(ds.target_name)}}
                       .dump()
                << '\n';
    }
  } catch (const expo::Error& e) {
    std::cerr << "error (" << expo::to_string(e.code()) << "): " << e.what()
              << '\n';
    return expo::exit_status(e.code());
  }
  return 0;
}
