// Copyright 2026 The selact Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file random.hpp
 * Counter-based pseudo-random generation. Every draw is a pure function of
 * (key, counter), so streams are reproducible across platforms and can be
 * split per run, per iteration or per sample without shared state.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>

namespace selact {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30U)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27U)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31U);
}

/// Derive an independent child key from a parent key and a tag.
[[nodiscard]] constexpr std::uint64_t deriveKey(std::uint64_t key,
                                                std::uint64_t tag) noexcept {
    return mix64(mix64(key) ^ mix64(tag + 0x632BE59BD9B4E019ULL));
}

/**
 * @brief Counter-based generator: the i-th output is mix(key, i).
 *
 * Only integer arithmetic is used to produce bits, and the floating-point
 * conversions below are exact, so sequences are bit-identical everywhere.
 */
class CounterRng {
  public:
    explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(key) {}

    [[nodiscard]] constexpr std::uint64_t key() const noexcept { return key_; }
    [[nodiscard]] constexpr std::uint64_t counter() const noexcept {
        return counter_;
    }

    constexpr std::uint64_t nextU64() noexcept {
        return mix64(key_ ^ mix64(counter_++));
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() noexcept {
        return static_cast<double>(nextU64() >> 11U) * 0x1.0p-53;
    }

    /// Uniform on [lo, hi). The result is clamped below hi so rounding in
    /// lo + (hi - lo) * u can never produce the excluded endpoint.
    double uniform(double lo, double hi) noexcept {
        const double x = lo + (hi - lo) * uniform01();
        return x < hi ? x : std::nextafter(hi, lo);
    }

    /// Unbiased integer in [0, bound) by rejection; bound must be > 0.
    std::uint64_t uniformIndex(std::uint64_t bound) noexcept {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = nextU64();
            if (r >= threshold) {
                return r % bound;
            }
        }
    }

  private:
    std::uint64_t key_;
    std::uint64_t counter_{0};
};

} // namespace selact
