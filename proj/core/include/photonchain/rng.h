// Copyright 2026 The photonchain Authors
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

#ifndef PHOTONCHAIN_RNG_H
#define PHOTONCHAIN_RNG_H

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace photonchain {

/// SplitMix64 finalizer. Used to derive well-separated stream seeds.
constexpr uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// xoshiro256** generator with counter-derived streams.
///
/// `Rng::stream(seed, index)` hashes the pair through SplitMix64, so the
/// random sequence seen by shot `index` depends only on (seed, index) and
/// never on which thread runs it or in which order. Normal and uniform
/// variates are produced here rather than through <random> distributions so
/// that outputs are identical across standard library implementations.
class Rng {
   public:
    using result_type = uint64_t;

    explicit Rng(uint64_t seed) {
        uint64_t x = seed;
        for (auto &s : state_) {
            x = splitmix64(x);
            s = x;
        }
    }

    static Rng stream(uint64_t seed, uint64_t index) {
        return Rng(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ull));
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        const uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal via Box-Muller (one variate per call, spare cached).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) {
            u1 = uniform();
        }
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

   private:
    static constexpr uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t state_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace photonchain

#endif  // PHOTONCHAIN_RNG_H
