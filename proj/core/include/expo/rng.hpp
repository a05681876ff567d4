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

#ifndef EXPO_RNG_HPP_
#define EXPO_RNG_HPP_

#include <cstdint>
#include <random>

namespace expo {

// Independent random streams. A run owns one seed; each consumer draws from
// its own stream so that, for example, regularizer sampling never shifts the
// data shuffle.
enum class Stream : std::uint64_t {
  kInit = 1,
  kShuffle = 2,
  kBatch = 3,
  kNeighborhood = 4,
  kDimension = 5,
  kSynthetic = 6,
  kResample = 7,
};

// Counter-based engine: the returned generator is a pure function of
// (seed, stream, counter).
std::mt19937_64 make_engine(std::uint64_t seed, Stream stream,
                            std::uint64_t counter);

// Combines two counters into one, e.g. (test point, neighbor index).
std::uint64_t mix_counter(std::uint64_t a, std::uint64_t b);

}  // namespace expo

#endif  // EXPO_RNG_HPP_
