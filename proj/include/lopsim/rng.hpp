// Copyright 2026 The lopsim Authors
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

#pragma once

#include <cstdint>
#include <random>

namespace lopsim {

/// Seedable generator with a bit-reproducible output stream on every platform.
///
/// The engine is std::mt19937_64, whose sequence the standard fixes exactly. The
/// standard distributions are not portable, so doubles are formed from the top 53
/// bits of each draw.
class Rng {
   public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    std::uint64_t next() { return engine_(); }

   private:
    std::mt19937_64 engine_;
};

/// Seed for trial `index` of a run seeded with `seed`. Independent of scheduling, so
/// trials may run in any order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace lopsim
