// Copyright 2026 The PQC Ensemble Authors
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
#include <limits>
#include <string_view>

namespace pqc {

/**
 * SplitMix64 (Steele, Lea, Flood). Satisfies UniformRandomBitGenerator so
 * it can drive <random> distributions, but the library draws through
 * uniform01() to keep results identical across standard libraries.
 */
class SplitMix64 {
  public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return mix(state_ += kGamma); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>((*this)() >> 11U) * 0x1.0p-53; }

    /// Unbiased integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = (*this)();
            if (r >= threshold)
                return r % bound;
        }
    }

    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30U)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27U)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31U);
    }

    friend bool operator==(const SplitMix64 &, const SplitMix64 &) = default;

  private:
    std::uint64_t state_;
};

namespace detail {
constexpr std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char ch : text) {
        h ^= static_cast<unsigned char>(ch);
        h *= 0x100000001b3ULL;
    }
    return h;
}
} // namespace detail

/**
 * Independent stream for (master seed, constituent label, purpose). For a
 * fixed seed and tag the starting state is a bijective function of j1, so
 * distinct constituents never share a stream.
 */
inline SplitMix64 derive_stream(std::uint64_t master_seed, std::uint64_t j1,
                                std::string_view purpose_tag) {
    const std::uint64_t tagged =
        SplitMix64::mix(SplitMix64::mix(master_seed) ^ detail::fnv1a(purpose_tag));
    return SplitMix64(SplitMix64::mix(tagged + j1 * SplitMix64::kGamma));
}

} // namespace pqc
