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

#ifndef EXPO_SERIALIZATION_HPP_
#define EXPO_SERIALIZATION_HPP_

#include <string>

#include "json.hpp"

#include "expo/bounds.hpp"
#include "expo/explainers.hpp"
#include "expo/metrics.hpp"
#include "expo/model.hpp"
#include "expo/neighborhood.hpp"
#include "expo/regularizers.hpp"

namespace expo {

using Json = nlohmann::json;

// {"kind":"gaussian","sigma":0.5,"m":65,"seed":1}; uniform specs use
// "radius" in place of "sigma".
void to_json(Json& j, const NeighborhoodSpec& spec);
// Keys absent from j keep the values in `base`. m = 0 is accepted and means
// "choose a default" to callers that support it.
NeighborhoodSpec neighborhood_from_json(const Json& j,
                                        NeighborhoodSpec base = {});

// {"kind":"fidelity","gamma":0.1,"ridge":1e-6,"neighborhood":{...}}
void to_json(Json& j, const RegularizerConfig& config);
RegularizerConfig regularizer_from_json(const Json& j,
                                        RegularizerConfig base = {});

// {"layer_sizes":[...],"activation":"tanh","layers":[{"weights":[[..]],
// "bias":[..]}]}; doubles are written with round-trip precision.
void to_json(Json& j, const Mlp& model);
Mlp model_from_json(const Json& j);
Mlp load_model(const std::string& path);
void save_model(const Mlp& model, const std::string& path);

// {kind, anchor_x, output_index, intercept?, coefficients|vector}
void to_json(Json& j, const Explanation& explanation);

void to_json(Json& j, const Summary& summary);
void to_json(Json& j, const MetricsReport& report);
void to_json(Json& j, const BoundReport& report);

// Reads and parses a JSON file; ConfigError on failure.
Json read_json_file(const std::string& path);
// Writes through a temporary file and renames it into place.
void write_text_file_atomic(const std::string& path, const std::string& text);

}  // namespace expo

#endif  // EXPO_SERIALIZATION_HPP_
