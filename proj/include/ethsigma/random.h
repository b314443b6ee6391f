// Copyright 2026 The ethsigma Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ETHSIGMA_RANDOM_H_
#define ETHSIGMA_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace ethsigma {

// All randomness derives from one experiment seed. Named substreams are keyed
// by (seed, name, a, b) so that every sample has its own engine and results do
// not depend on evaluation order.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard. Distributions are implemented here rather than taken from
// <random> because the library distributions are implementation-defined.

using Engine = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

std::uint64_t substream_seed(std::uint64_t seed, std::string_view name,
                             std::uint64_t a = 0, std::uint64_t b = 0);

Engine substream(std::uint64_t seed, std::string_view name,
                 std::uint64_t a = 0, std::uint64_t b = 0);

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(Engine& engine);

/// Standard normal deviate (Box-Muller, one value per call).
double standard_normal(Engine& engine);

}  // namespace ethsigma

#endif  // ETHSIGMA_RANDOM_H_
