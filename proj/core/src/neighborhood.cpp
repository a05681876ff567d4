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

#include "expo/neighborhood.hpp"

#include <cmath>
#include <random>

#include "expo/error.hpp"
#include "expo/rng.hpp"

namespace expo {
namespace {

template <typename Engine>
double draw_offset(const NeighborhoodSpec& spec, Engine& engine) {
  if (spec.kind == NeighborhoodSpec::Kind::kGaussian) {
    std::normal_distribution<double> normal(0.0, 1.0);
    return spec.width * normal(engine);
  }
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  return spec.width * unif(engine);
}

}  // namespace

NeighborhoodSpec NeighborhoodSpec::gaussian(double sigma, std::size_t m,
                                            std::uint64_t seed) {
  NeighborhoodSpec spec{Kind::kGaussian, sigma, m, seed};
  spec.validate();
  return spec;
}

NeighborhoodSpec NeighborhoodSpec::uniform(double radius, std::size_t m,
                                           std::uint64_t seed) {
  NeighborhoodSpec spec{Kind::kUniform, radius, m, seed};
  spec.validate();
  return spec;
}

void NeighborhoodSpec::validate() const {
  if (!(width > 0.0) || !std::isfinite(width)) {
    throw Error(ErrorCode::kBadParameter, "neighborhood width must be > 0");
  }
  if (samples_m < 1) {
    throw Error(ErrorCode::kBadParameter, "neighborhood needs m >= 1");
  }
}

Matrix sample(const NeighborhoodSpec& spec, const Vector& x,
              std::uint64_t counter) {
  spec.validate();
  auto engine = make_engine(spec.seed, Stream::kNeighborhood, counter);
  const auto m = static_cast<Eigen::Index>(spec.samples_m);
  Matrix out(m, x.size());
  for (Eigen::Index r = 0; r < m; ++r) {
    for (Eigen::Index c = 0; c < x.size(); ++c) {
      out(r, c) = x(c) + draw_offset(spec, engine);
    }
  }
  return out;
}

Matrix sample_one_dim(const NeighborhoodSpec& spec, const Vector& x,
                      std::size_t dim, std::uint64_t counter) {
  spec.validate();
  if (dim >= static_cast<std::size_t>(x.size())) {
    throw Error(ErrorCode::kBadIndex, "dimension " + std::to_string(dim) +
                                          " out of range for d = " +
                                          std::to_string(x.size()));
  }
  auto engine = make_engine(spec.seed, Stream::kNeighborhood, counter);
  const auto m = static_cast<Eigen::Index>(spec.samples_m);
  const auto c = static_cast<Eigen::Index>(dim);
  Matrix out = x.transpose().replicate(m, 1);
  for (Eigen::Index r = 0; r < m; ++r) {
    out(r, c) = x(c) + draw_offset(spec, engine);
  }
  return out;
}

std::size_t choose_dimension(const NeighborhoodSpec& spec, std::size_t d,
                             std::uint64_t counter) {
  if (d == 0) throw Error(ErrorCode::kBadIndex, "no dimensions to choose from");
  auto engine = make_engine(spec.seed, Stream::kDimension, counter);
  std::uniform_int_distribution<std::size_t> pick(0, d - 1);
  return pick(engine);
}

}  // namespace expo
