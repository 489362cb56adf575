// Copyright 2026 The jcpulse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Deterministic random sources shared by optimizers and test drivers.

#ifndef JCPULSE_RANDOM_HPP_
#define JCPULSE_RANDOM_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>

#include "jcpulse/types.hpp"

namespace jcpulse {

using Rng = std::mt19937_64;

// Mixes a base seed with a path of integers (restart index, pulse count,
// ...) into an independent stream seed.
std::uint64_t derive_seed(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> path);

Matrix haar_unitary(int d, Rng& rng);
Vector haar_state(int d, Rng& rng);

}  // namespace jcpulse

#endif  // JCPULSE_RANDOM_HPP_
