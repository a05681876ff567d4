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

#include "expo/serialization.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "expo/error.hpp"

namespace expo {
namespace {

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::kConfig, "expected a number array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

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

}  // namespace

void to_json(Json& j, const NeighborhoodSpec& spec) {
  const bool gaussian = spec.kind == NeighborhoodSpec::Kind::kGaussian;
  j = Json{{"kind", gaussian ? "gaussian" : "uniform"},
           {gaussian ? "sigma" : "radius", spec.width},
           {"m", spec.samples_m},
           {"seed", spec.seed}};
}

NeighborhoodSpec neighborhood_from_json(const Json& j, NeighborhoodSpec base) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kConfig, "neighborhood must be a JSON object");
  }
  const std::string kind = get_or<std::string>(
      j, "kind",
      base.kind == NeighborhoodSpec::Kind::kGaussian ? "gaussian" : "uniform");
  if (kind == "gaussian") {
    base.kind = NeighborhoodSpec::Kind::kGaussian;
  } else if (kind == "uniform") {
    base.kind = NeighborhoodSpec::Kind::kUniform;
  } else {
    throw Error(ErrorCode::kConfig, "unknown neighborhood kind '" + kind + "'");
  }
  base.width = get_or<double>(j, "sigma", base.width);
  base.width = get_or<double>(j, "radius", base.width);
  base.samples_m = get_or<std::size_t>(j, "m", base.samples_m);
  base.seed = get_or<std::uint64_t>(j, "seed", base.seed);
  return base;
}

void to_json(Json& j, const RegularizerConfig& config) {
  j = Json{{"kind", to_string(config.kind)},
           {"gamma", config.gamma},
           {"ridge", config.ridge},
           {"neighborhood", config.neighborhood}};
}

RegularizerConfig regularizer_from_json(const Json& j, RegularizerConfig base) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kConfig, "regularizer must be a JSON object");
  }
  base.kind = parse_regularizer_kind(
      get_or<std::string>(j, "kind", to_string(base.kind)));
  base.gamma = get_or<double>(j, "gamma", base.gamma);
  base.ridge = get_or<double>(j, "ridge", base.ridge);
  if (j.contains("neighborhood")) {
    base.neighborhood = neighborhood_from_json(j["neighborhood"],
                                               base.neighborhood);
  }
  return base;
}

void to_json(Json& j, const Mlp& model) {
  Json layers = Json::array();
  for (const auto& layer : model.layers()) {
    Json weights = Json::array();
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      weights.push_back(vector_to_json(layer.weights.row(r).transpose()));
    }
    layers.push_back(
        Json{{"weights", std::move(weights)}, {"bias", vector_to_json(layer.bias)}});
  }
  j = Json{{"layer_sizes", model.layer_sizes()},
           {"activation", to_string(model.activation())},
           {"layers", std::move(layers)}};
}

Mlp model_from_json(const Json& j) {
  try {
    const auto sizes = j.at("layer_sizes").get<std::vector<std::size_t>>();
    const auto& layers_json = j.at("layers");
    if (sizes.size() != layers_json.size() + 1) {
      throw Error(ErrorCode::kBadShape, "layer_sizes disagree with layers");
    }
    std::vector<DenseLayer> layers;
    for (std::size_t l = 0; l < layers_json.size(); ++l) {
      const auto& rows = layers_json[l].at("weights");
      const auto out = static_cast<Eigen::Index>(sizes[l + 1]);
      const auto in = static_cast<Eigen::Index>(sizes[l]);
      if (static_cast<Eigen::Index>(rows.size()) != out) {
        throw Error(ErrorCode::kBadShape, "weight rows disagree with sizes");
      }
      DenseLayer layer{Matrix(out, in), vector_from_json(layers_json[l].at("bias"))};
      for (Eigen::Index r = 0; r < out; ++r) {
        const Vector row = vector_from_json(rows[static_cast<std::size_t>(r)]);
        if (row.size() != in) {
          throw Error(ErrorCode::kBadShape, "weight row has wrong length");
        }
        layer.weights.row(r) = row.transpose();
      }
      layers.push_back(std::move(layer));
    }
    return Mlp(std::move(layers),
               parse_activation(j.at("activation").get<std::string>()));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("malformed model: ") + e.what());
  }
}

Mlp load_model(const std::string& path) {
  return model_from_json(read_json_file(path));
}

void save_model(const Mlp& model, const std::string& path) {
  write_text_file_atomic(path, Json(model).dump(1) + "\n");
}

void to_json(Json& j, const Explanation& explanation) {
  j = Json{{"kind", to_string(explanation.kind)},
           {"anchor_x", vector_to_json(explanation.anchor)},
           {"output_index", explanation.output_index}};
  if (explanation.kind == Explanation::Kind::kLocalLinear) {
    j["intercept"] = explanation.intercept;
    j["coefficients"] = vector_to_json(explanation.coefficients);
  } else {
    j["vector"] = vector_to_json(explanation.coefficients);
  }
}

void to_json(Json& j, const Summary& summary) {
  j = Json{{"mean", summary.mean},
           {"std_error", summary.std_error},
           {"count", summary.count}};
}

void to_json(Json& j, const MetricsReport& report) {
  Json rows = Json::array();
  for (const auto& row : report.rows) {
    rows.push_back(Json{{"metric", row.name},
                        {"output", row.output},
                        {"value", row.value}});
  }
  j = Json{{"label", report.label},
           {"predictive_metric", report.predictive_name},
           {"predictive", report.predictive},
           {"rows", std::move(rows)}};
}

void to_json(Json& j, const BoundReport& report) {
  j = Json{{"mean_train_residual", report.mean_train_residual},
           {"variance_bound_C", report.variance_bound_C},
           {"delta", report.delta},
           {"slack", report.slack},
           {"bound_value", report.bound_value},
           {"n", report.n},
           {"mean_test_residual", report.mean_test_residual},
           {"n_test", report.n_test}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kConfig,
                "invalid JSON in '" + path + "': " + e.what());
  }
}

void write_text_file_atomic(const std::string& path, const std::string& text) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) {
    std::filesystem::create_directories(target.parent_path());
  }
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write '" + tmp.string() + "'");
    out << text;
    if (!out) throw Error(ErrorCode::kIo, "write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, target);
}

}  // namespace expo
