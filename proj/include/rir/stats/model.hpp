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
//
// Closed-form frequency model for while-loop generation: op counts N (ops
// before the loop) and K (ops in its condition region) are geometric with
// parameter p_g, each op independently produces the needed boolean with
// probability p_bool, and the loop generates iff at least one boolean
// appears among the N + K ops.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "rir/gen/rng.hpp"

namespace rir {

struct FreqModelParams {
  double p_g = 0.2;
  double p_bool = 1.0 / 90.0;

  void validate() const {
    if (!(p_g > 0.0 && p_g < 1.0))
      throw std::invalid_argument("p_g must be in (0, 1)");
    if (!(p_bool >= 0.0 && p_bool <= 1.0))
      throw std::invalid_argument("p_bool must be in [0, 1]");
  }
};

/// P(S = s) for S = N + K, the sum of two independent geometric counts:
/// (s + 1) * p_g^2 * (1 - p_g)^s.
inline double length_sum_pmf(const FreqModelParams &params, uint64_t s) {
  params.validate();
  return (double)(s + 1) * params.p_g * params.p_g *
         std::pow(1.0 - params.p_g, (double)s);
}

/// P(while generated | while chosen) = sum_s (1 - (1-p_bool)^s) * P(S = s),
/// summed until the residual tail is below `tail_tolerance`. The tail of
/// sum (s+1) p^2 q^s past s0 has the closed form q^(s0+1) ((s0+2) p + q)
/// (verify with s0 = -1: it gives exactly 1), and the boolean factor is at
/// most 1, so that closed form bounds the remainder.
inline double while_success_probability(const FreqModelParams &params,
                                        double tail_tolerance = 1e-12) {
  params.validate();
  const double p = params.p_g, q = 1.0 - params.p_g;
  const double x = 1.0 - params.p_bool;
  double total = 0.0;
  double q_pow = 1.0;  // q^s
  double x_pow = 1.0;  // (1-p_bool)^s
  for (uint64_t s = 0;; ++s) {
    total += (1.0 - x_pow) * (double)(s + 1) * p * p * q_pow;
    double tail = q_pow * q * ((double)(s + 2) * p + q);
    if (tail < tail_tolerance) break;
    q_pow *= q;
    x_pow *= x;
  }
  return total;
}

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  uint64_t trials = 0;
};

/// Simulates the idealized process directly: draw N and K geometric (count
/// of failures before a p_g success), flip p_bool once per op, succeed iff
/// any flip lands. Deterministic per seed.
inline MonteCarloEstimate monte_carlo_while(const FreqModelParams &params,
                                            uint64_t trials, uint64_t seed) {
  params.validate();
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  SplitMix64 rng(seed);
  auto draw_geometric = [&] {
    uint64_t n = 0;
    while (!rng.chance(params.p_g)) ++n;
    return n;
  };
  uint64_t successes = 0;
  for (uint64_t t = 0; t < trials; ++t) {
    uint64_t ops = draw_geometric() + draw_geometric();
    bool found = false;
    for (uint64_t i = 0; i < ops; ++i) found |= rng.chance(params.p_bool);
    successes += found ? 1 : 0;
  }
  MonteCarloEstimate est;
  est.trials = trials;
  est.estimate = (double)successes / (double)trials;
  est.std_error =
      std::sqrt(est.estimate * (1.0 - est.estimate) / (double)trials);
  return est;
}

}  // namespace rir
