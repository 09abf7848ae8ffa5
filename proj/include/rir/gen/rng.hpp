// Copyright 2026 The RIR Authors
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace rir {

/// SplitMix64 finalizer (Steele/Lea/Flood; Vigna's public-domain C code).
inline uint64_t splitmix64_mix(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Deterministic 64-bit PRNG (SplitMix64). Chosen because the stream is
/// fully specified by the algorithm, so any implementation reproduces it
/// bit for bit; reference outputs are in docs/determinism.md and pinned by
/// tests. Not cryptographic.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return splitmix64_mix(state_);
  }

  /// Uniform in [0, n); n must be positive. Plain modulo: portable, and the
  /// bias is negligible for the small ranges sampled here.
  uint64_t below(uint64_t n) { return next() % n; }

  /// Uniform double in [0, 1) with 53 significant bits.
  double next_double() { return double(next() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return next_double() < p; }

  /// Weighted index choice, renormalizing over the given weights.
  /// Zero-weight entries are never returned; all-zero weights is a caller
  /// bug and throws.
  size_t choice_weighted(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0))
      throw std::invalid_argument("choice_weighted: all weights are zero");
    double r = next_double() * total;
    double acc = 0.0;
    for (size_t i = 0; i < weights.size(); ++i) {
      acc += weights[i];
      if (r < acc && weights[i] > 0.0) return i;
    }
    // r fell into the trailing rounding gap; take the last eligible entry.
    for (size_t i = weights.size(); i-- > 0;)
      if (weights[i] > 0.0) return i;
    throw std::invalid_argument("choice_weighted: all weights are zero");
  }

 private:
  uint64_t state_;
};

/// Seed of work item `index` under campaign master seed `master`:
/// mix(master + (index + 1) * 0x9E3779B97F4A7C15). O(1) per item, so
/// campaigns stay deterministic under any scheduling.
inline uint64_t derive_seed(uint64_t master, uint64_t index) {
  return splitmix64_mix(master + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

}  // namespace rir
