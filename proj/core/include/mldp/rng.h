// Copyright 2025 The MLDP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MLDP_RNG_H_
#define MLDP_RNG_H_

#include <cstdint>
#include <random>

namespace mldp {

// Deterministic pseudorandom stream with explicit substream derivation.
//
// The engine is std::mt19937_64, whose output sequence for a given seed is
// pinned by the C++ standard, so replaying a seed replays every sample
// bit-exactly on any platform. All variate transforms in this library are
// built on Uniform()/Gaussian() below rather than on std::*_distribution,
// whose mapping from engine output is implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), engine_(Scramble(seed)) {}

  // Child stream addressed by up to three indices. Derivation depends only
  // on the seed this instance was constructed with, never on how much of
  // the parent stream has been consumed, so worker streams can be handed
  // out in any order. Substream(a) == Substream(a, 0, 0).
  Rng Substream(uint64_t a, uint64_t b = 0, uint64_t c = 0) const {
    uint64_t h = seed_;
    h = Combine(h, a + 1);
    h = Combine(h, b + 1);
    h = Combine(h, c + 1);
    return Rng(h);
  }

  uint64_t NextU64() { return engine_(); }

  // Uniform on the open interval (0, 1); 0.0 and 1.0 are never returned so
  // inverse-CDF transforms stay finite.
  double Uniform() {
    return (static_cast<double>(NextU64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the second variate of each pair is
  // cached in the handle, which keeps the draw count deterministic.
  double Gaussian();

  // Uniform integer in [0, n), rejection-debiased. Requires n > 0.
  uint64_t Below(uint64_t n);

  uint64_t seed() const { return seed_; }

 private:
  static uint64_t SplitMix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }
  static uint64_t Combine(uint64_t h, uint64_t v) {
    return SplitMix64(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
  }
  // Decorrelates raw seeds (0, 1, 2, ...) before they reach the engine.
  static uint64_t Scramble(uint64_t seed) { return SplitMix64(seed); }

  uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_gaussian_ = 0.0;
  bool has_spare_gaussian_ = false;
};

}  // namespace mldp

#endif  // MLDP_RNG_H_
