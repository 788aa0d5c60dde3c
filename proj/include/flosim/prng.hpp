/*
 * Copyright 2026 The flosim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>

namespace flosim {

/// Identifier recorded in trajectory records and reports.
inline constexpr const char* kPrngName = "splitmix64/1";

/// SplitMix64 (Steele, Lea, Flood 2014).  Counter-based: the state advances
/// by a fixed odd constant and the output is a bijective mix of the state,
/// so streams can be split by seeding with a mixed (seed, index) pair.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Independent stream for (seed, index); used to fan out trajectory shots.
    static SplitMix64 split(std::uint64_t seed, std::uint64_t index) {
        SplitMix64 mixer(seed);
        const std::uint64_t a = mixer.next();
        SplitMix64 mixer2(index ^ 0x6A09E667F3BCC909ULL);
        return SplitMix64(a ^ mixer2.next());
    }

private:
    std::uint64_t state_;
};

}  // namespace flosim
