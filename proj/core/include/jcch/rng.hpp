/*
 * Copyright 2026 The JCCH Authors.
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

#ifndef JCCH_RNG_HPP_
#define JCCH_RNG_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

namespace jcch {

// SplitMix64: output k is mix(seed + k * golden_gamma), so the stream is a
// pure function of (seed, counter) and identical on every platform. Uniform
// and normal draws are derived here rather than through <random>
// distributions, whose outputs differ between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Independent stream keyed by (seed, stream). Used to give each consumer
  // (labels, features, anchors, shuffles) its own sequence.
  static Rng Stream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(Mix(seed ^ Mix(stream + 0x632be59bd9b4e019ULL)));
  }

  std::uint64_t NextU64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return Mix(state_);
  }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>(NextU64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound). Rejection sampling keeps it unbiased.
  std::uint64_t UniformInt(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = NextU64();
      if (x >= threshold) return x % bound;
    }
  }

  bool Bernoulli(double p) { return Uniform() < p; }

  // Box-Muller; the second variate of each pair is cached.
  double Normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - Uniform();  // (0, 1]
    const double u2 = Uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  double Normal(double mean, double stddev) { return mean + stddev * Normal(); }

  template <typename T>
  void Shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(UniformInt(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  static std::uint64_t Mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Stream ids, one per stochastic consumer.
namespace rng_stream {
inline constexpr std::uint64_t kLabels = 1;
inline constexpr std::uint64_t kFeatures1 = 2;
inline constexpr std::uint64_t kFeatures2 = 3;
inline constexpr std::uint64_t kProjection1 = 4;
inline constexpr std::uint64_t kProjection2 = 5;
inline constexpr std::uint64_t kSplit = 6;
inline constexpr std::uint64_t kAnchors = 7;
inline constexpr std::uint64_t kInit = 8;
inline constexpr std::uint64_t kShuffle = 9;
inline constexpr std::uint64_t kCertify = 10;
}  // namespace rng_stream

}  // namespace jcch

#endif  // JCCH_RNG_HPP_
