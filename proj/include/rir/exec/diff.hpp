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

#include <cstdint>
#include <string>
#include <vector>

#include "rir/core/verifier.hpp"
#include "rir/exec/interp.hpp"
#include "rir/exec/passes.hpp"
#include "rir/gen/rng.hpp"

namespace rir {

enum class Verdict : uint8_t { Agree, ValueMismatch, TrapMismatch, TerminationSuspect };

inline const char *to_string(Verdict v) {
  switch (v) {
    case Verdict::Agree: return "agree";
    case Verdict::ValueMismatch: return "value_mismatch";
    case Verdict::TrapMismatch: return "trap_mismatch";
    case Verdict::TerminationSuspect: return "termination_suspect";
  }
  return "?";
}

/// One per input vector. `message` is the frozen grouping input for
/// non-Agree verdicts: "<verdict>: unoptimized=<summary> optimized=<summary>".
struct VerdictInfo {
  Verdict verdict = Verdict::Agree;
  std::string message;
};

/// Argument vectors for one program: the all-zeros vector first, then
/// pseudo-random vectors derived from the program seed (constant salt, so
/// campaign replays see identical inputs).
inline std::vector<std::vector<int64_t>> make_input_vectors(
    const ModuleRoot &module, uint64_t program_seed, int count) {
  constexpr uint64_t kInputSalt = 0x494E505554ULL;  // "INPUT"
  std::vector<TypeDesc> arg_types;
  for (const FuncSig &sig : function_signatures(module))
    if (sig.name == module.entry) arg_types = sig.arg_types;

  std::vector<std::vector<int64_t>> vectors;
  for (int j = 0; j < count; ++j) {
    std::vector<int64_t> args;
    if (j == 0) {
      args.assign(arg_types.size(), 0);
    } else {
      SplitMix64 rng(derive_seed(program_seed ^ kInputSalt, (uint64_t)j));
      for (const TypeDesc &t : arg_types)
        args.push_back(wrap_to_width((int64_t)rng.next(), t));
    }
    vectors.push_back(std::move(args));
  }
  return vectors;
}

namespace detail {

inline VerdictInfo classify(const RunOutcome &unopt, const RunOutcome &opt) {
  using K = RunOutcome::Kind;
  Verdict v;
  if (unopt.kind == K::FuelExhausted && opt.kind == K::FuelExhausted) {
    v = Verdict::Agree;
  } else if (unopt.kind == K::FuelExhausted || opt.kind == K::FuelExhausted) {
    v = Verdict::TerminationSuspect;
  } else if (unopt.kind == K::Completed && opt.kind == K::Completed) {
    v = unopt.values == opt.values ? Verdict::Agree : Verdict::ValueMismatch;
  } else if (unopt.kind == K::Trap && opt.kind == K::Trap) {
    v = unopt.trap == opt.trap ? Verdict::Agree : Verdict::TrapMismatch;
  } else {
    v = Verdict::TrapMismatch;  // one trapped, the other completed
  }
  VerdictInfo info{v, {}};
  if (v != Verdict::Agree)
    info.message = std::string(to_string(v)) + ": unoptimized=" +
                   unopt.summary() + " optimized=" + opt.summary();
  return info;
}

}  // namespace detail

/// Runs the original and the optimized module on each input vector and
/// classifies the outcome pair. When exactly one side runs out of fuel it
/// is retried once with fuel times `escalation_factor`; only a retry that
/// still exhausts while the other side finishes is flagged as a
/// termination suspect (the side that merely ran slower reclassifies
/// normally).
inline std::vector<VerdictInfo> differential_check(
    const ModuleRoot &module, BugInjection inject,
    const std::vector<std::vector<int64_t>> &input_vectors,
    uint64_t fuel = 100000, uint64_t escalation_factor = 10,
    const std::vector<PassId> &passes = default_pipeline(),
    const Registry &registry = default_registry(),
    bool *pipeline_fixpoint = nullptr) {
  PipelineResult optimized = run_pipeline(module, passes, inject, registry);
  if (pipeline_fixpoint) *pipeline_fixpoint = optimized.reached_fixpoint;

  std::vector<VerdictInfo> verdicts;
  for (const std::vector<int64_t> &args : input_vectors) {
    RunOutcome a = interpret(module, args, fuel, module.entry, registry);
    RunOutcome b =
        interpret(optimized.module, args, fuel, module.entry, registry);
    bool a_fuel = a.kind == RunOutcome::Kind::FuelExhausted;
    bool b_fuel = b.kind == RunOutcome::Kind::FuelExhausted;
    if (a_fuel != b_fuel) {
      if (a_fuel)
        a = interpret(module, args, fuel * escalation_factor, module.entry,
                      registry);
      else
        b = interpret(optimized.module, args, fuel * escalation_factor,
                      module.entry, registry);
    }
    verdicts.push_back(detail::classify(a, b));
  }
  return verdicts;
}

}  // namespace rir
