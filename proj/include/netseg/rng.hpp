// Copyright 2026 The netseg Authors.
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

#ifndef NETSEG_RNG_HPP_
#define NETSEG_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <limits>

namespace netseg {

// Counter-based generator: the i-th output of a stream is a pure function of
// (key, i), so any stream can be split into independent child streams without
// shared state. Output mixing is the SplitMix64 finalizer.
//
// The sampling helpers below are implemented here rather than through
// <random> distributions so that results are bit-identical across standard
// library implementations.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(mix(mix(seed) ^ mix(stream + kStreamSalt))) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept { return mix(key_ + (++counter_) * kGamma); }

  // Child stream `index`; independent of how far this stream has advanced.
  Rng split(std::uint64_t index) const noexcept {
    Rng child;
    child.key_ = mix(key_ ^ mix(index * kGamma + kSplitSalt));
    return child;
  }

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  // Uniform double in (0, 1].
  double uniform_open_zero() noexcept { return 1.0 - uniform(); }

  // Uniform integer in [0, bound); bound must be positive (Lemire's method).
  std::uint64_t below(std::uint64_t bound) noexcept {
    unsigned __int128 m =
        static_cast<unsigned __int128>((*this)()) * static_cast<unsigned __int128>(bound);
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>((*this)()) * static_cast<unsigned __int128>(bound);
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  double exponential(double mean) noexcept {
    return -mean * std::log(uniform_open_zero());
  }

  // Rounds x >= 0 down or up so that the expectation equals x.
  std::uint64_t round_stochastic(double x) noexcept {
    if (!(x > 0.0)) return 0;
    const double floor_x = std::floor(x);
    const double frac = x - floor_x;
    auto result = static_cast<std::uint64_t>(floor_x);
    if (frac > 0.0 && uniform() < frac) ++result;
    return result;
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  static constexpr std::uint64_t kStreamSalt = 0xd1b54a32d192ed03ULL;
  static constexpr std::uint64_t kSplitSalt = 0x8cb92ba72f3d8dd7ULL;

  Rng() noexcept = default;

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace netseg

#endif  // NETSEG_RNG_HPP_
