// Copyright 2026 The netqec Authors
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


#ifndef NETQEC_RNG_H
#define NETQEC_RNG_H

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace netqec {

inline uint64_t splitmix64(uint64_t &state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Hash of a key tuple; used to derive independent streams per (seed, block, instruction).
inline uint64_t mix_keys(std::initializer_list<uint64_t> keys) {
    uint64_t h = 0x6A09E667F3BCC909ULL;
    for (auto k : keys) {
        uint64_t s = h ^ k;
        h = splitmix64(s);
    }
    return h;
}

/// xoshiro256** keyed by a 64-bit value.
class Rng {
   public:
    explicit Rng(uint64_t key) {
        uint64_t s = key;
        for (auto &w : s_) {
            w = splitmix64(s);
        }
    }

    uint64_t next() {
        uint64_t result = rotl(s_[1] * 5, 7) * 9;
        uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in (0, 1].
    double uniform_open0() {
        return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n).
    uint64_t below(uint64_t n) {
        return static_cast<uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    /// Number of failures before the next success of a Bernoulli(p) sequence, given log(1 - p).
    uint64_t geometric(double log_1mp) {
        double g = std::floor(std::log(uniform_open0()) / log_1mp);
        return g >= 1.8e19 ? UINT64_MAX : static_cast<uint64_t>(g);
    }

   private:
    static uint64_t rotl(uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    uint64_t s_[4];
};

}  // namespace netqec

#endif
