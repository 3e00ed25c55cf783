/*
 * Copyright 2026 The fairpen Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Keyed random streams. Every consumer of randomness derives its own
// generator from (seed, key path), so results never depend on which thread
// ran a task or in what order. Distributions are implemented here rather
// than taken from <random> so draws are identical across standard libraries.

#ifndef FAIRPEN_RANDOM_HPP_
#define FAIRPEN_RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>

namespace fairpen {

inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives a child seed from a parent seed and a path of integer keys.
inline std::uint64_t DeriveSeed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = SplitMix64(seed);
  for (std::uint64_t k : path) h = SplitMix64(h ^ SplitMix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

// Stream tags, so different consumers of one seed never share a stream.
enum class StreamTag : std::uint64_t {
  kCandidates = 1,
  kFolds = 2,
  kSimulationTrain = 3,
  kSimulationEval = 4,
  kSimulationSearch = 5,
  kGenerate = 6,
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(SplitMix64(seed)) {}
  Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> path)
      : engine_(DeriveSeed(seed, path)) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer on [0, bound).
  std::uint64_t Below(std::uint64_t bound) {
    // Rejection sampling on the top of the range removes modulo bias.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  bool Bernoulli(double p) { return Uniform() < p; }

  // Box-Muller; one of the pair is discarded to keep the stream stateless.
  double Normal(double mean, double sd) {
    double u1;
    do {
      u1 = Uniform();
    } while (u1 <= 0.0);
    const double u2 = Uniform();
    return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  // Knuth's product method. Fine for the small rates used here.
  std::int64_t Poisson(double rate) {
    const double limit = std::exp(-rate);
    std::int64_t k = 0;
    double prod = Uniform();
    while (prod > limit) {
      ++k;
      prod *= Uniform();
    }
    return k;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fairpen

#endif  // FAIRPEN_RANDOM_HPP_
