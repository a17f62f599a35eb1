// SPDX-License-Identifier: Apache-2.0
//
// simlab: link-level simulation library for multi-user hybrid mmWave MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef SIMLAB_RNG_HPP
#define SIMLAB_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>

#include "simlab/types.hpp"

namespace simlab {

// Counter-friendly seeded stream: xoshiro256++ state expanded from a 64-bit
// key with SplitMix64. Child streams are derived from the parent's key, not
// its consumption state, so adding draws to one consumer never shifts the
// sequences seen by another. All distributions are generated in-house to keep
// results byte-identical across standard library implementations.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key) : key_(key) {
    std::uint64_t x = key;
    for (auto& word : state_) word = splitmix64(x);
  }

  // Deterministic substream for (this stream, tag).
  RandomStream child(std::uint64_t tag) const {
    std::uint64_t x = key_ ^ (0x9e3779b97f4a7c15ULL + tag * 0xbf58476d1ce4e5b9ULL);
    return RandomStream(mix(x));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; pairs are cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phase = 2.0 * kPi * u2;
    spare_ = r * std::sin(phase);
    has_spare_ = true;
    return r * std::cos(phase);
  }

  // Circularly symmetric CN(0,1): real and imaginary parts N(0, 1/2).
  Complex cnormal() {
    const double re = normal();
    const double im = normal();
    return Complex(re, im) * (1.0 / std::sqrt(2.0));
  }

  // Uniform integer in [0, n).
  int uniform_index(int n) {
    return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
  }

  bool coin() { return (next_u64() & 1ULL) != 0; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }
  static std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    return mix(x);
  }

  std::uint64_t key_;
  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Substream tags. Each independent random consumer owns one so that enabling
// or disabling a feature never perturbs the draws of another.
enum StreamTag : std::uint64_t {
  kTagAngles = 1,
  kTagScattering = 2,
  kTagToneNoiseBs = 3,
  kTagToneNoiseUe = 4,
  kTagPilotNoise = 5,
  kTagPhaseErrUe = 6,
  kTagPhaseErrBs = 7,
  kTagAoaErrBs = 8,
  kTagAoaErrUe = 9,
  kTagCsiError = 10,
};

}  // namespace simlab

#endif  // SIMLAB_RNG_HPP
