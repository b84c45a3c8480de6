// Copyright 2026 The gsp Authors
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

#ifndef GSP_RNG_HPP_
#define GSP_RNG_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <stdexcept>

namespace gsp {

inline constexpr std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Order-sensitive hash of a tuple of integers. Used to derive independent
// streams (per episode, per matrix entry, per simulation) from a run seed so
// that results never depend on scheduling.
inline std::uint64_t DeriveSeed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x6A09E667F3BCC909ULL;
  for (std::uint64_t p : parts) h = SplitMix64(h ^ SplitMix64(p));
  return h;
}

// Thin wrapper over mt19937_64. The conversions to doubles and bounded
// integers are done here, not through <random> distributions, whose output
// is implementation-defined; this keeps files bit-identical across stdlibs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform in {0, ..., n-1}; rejection sampling, no modulo bias.
  std::uint64_t UniformInt(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("UniformInt: n must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  bool Coin() { return (engine_() >> 63) != 0; }

  // Draws an index with probability proportional to `weights`.
  std::size_t Categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0)) throw std::invalid_argument("Categorical: negative weight");
      total += w;
    }
    if (!(total > 0.0)) throw std::invalid_argument("Categorical: zero mass");
    double r = Uniform() * total;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0.0) continue;
      last_positive = i;
      if (r < weights[i]) return i;
      r -= weights[i];
    }
    return last_positive;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gsp

#endif  // GSP_RNG_HPP_
