// Copyright 2026 The magicproj Authors
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

#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace magicproj {

inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based generator: output k is mix(seed + (k+1)*gamma). Streams for
/// different seeds are obtained with `derive_seed`, never by sharing state.
class SplitMix64 {
   public:
    using result_type = std::uint64_t;

    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return splitmix64_mix(state_);
    }

   private:
    std::uint64_t state_;
};

/// Hashes a master seed and a path of indices into an independent seed.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = splitmix64_mix(master ^ 0x6a09e667f3bcc909ULL);
    for (std::uint64_t p : path) {
        h = splitmix64_mix(h ^ splitmix64_mix(p + 0x9e3779b97f4a7c15ULL));
    }
    return h;
}

/// Uniform integer in [0, bound) by Lemire's multiply-and-reject; identical
/// on every platform, unlike std::uniform_int_distribution.
template <typename Gen>
std::uint64_t uniform_below(Gen &gen, std::uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>(gen()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            m = static_cast<unsigned __int128>(gen()) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

/// Uniform double in [0, 1) with 53 random bits.
template <typename Gen>
double uniform_unit(Gen &gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Standard normal deviate (Box-Muller; one value per call).
template <typename Gen>
double standard_normal(Gen &gen) {
    double u1 = uniform_unit(gen);
    double u2 = uniform_unit(gen);
    return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace magicproj
