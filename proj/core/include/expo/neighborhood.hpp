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

#ifndef EXPO_NEIGHBORHOOD_HPP_
#define EXPO_NEIGHBORHOOD_HPP_

#include <cstddef>
#include <cstdint>

#include "expo/linalg.hpp"

namespace expo {

// A sampling law around an anchor point: per-coordinate Gaussian with
// standard deviation `width`, or per-coordinate uniform on [x - width,
// x + width].
struct NeighborhoodSpec {
  enum class Kind { kGaussian, kUniform };

  Kind kind = Kind::kGaussian;
  double width = 0.1;
  std::size_t samples_m = 100;
  std::uint64_t seed = 0;

  static NeighborhoodSpec gaussian(double sigma, std::size_t m,
                                   std::uint64_t seed = 0);
  static NeighborhoodSpec uniform(double radius, std::size_t m,
                                  std::uint64_t seed = 0);

  // Throws BadParameter unless width > 0 and samples_m >= 1.
  void validate() const;
};

// samples_m x d matrix of draws around x. A pure function of
// (spec, x, counter).
Matrix sample(const NeighborhoodSpec& spec, const Vector& x,
              std::uint64_t counter = 0);

// As sample(), but only coordinate dim is perturbed.
Matrix sample_one_dim(const NeighborhoodSpec& spec, const Vector& x,
                      std::size_t dim, std::uint64_t counter = 0);

// Uniform coordinate choice in [0, d) for the randomized one-dimensional
// regularizer; independent of the draws made by sample_one_dim.
std::size_t choose_dimension(const NeighborhoodSpec& spec, std::size_t d,
                             std::uint64_t counter);

}  // namespace expo

#endif  // EXPO_NEIGHBORHOOD_HPP_
