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
// Module-to-module optimizer passes: constant folding, dead code
// elimination and common subexpression elimination, plus two switchable
// unsound behaviors (B1: DCE drops side-effect-free infinite while loops;
// B2: xori of a value with itself folds to 1). With both flags off every
// pass is semantics-preserving; that soundness is what the differential
// harness certifies.

#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rir/core/ir.hpp"
#include "rir/core/registry.hpp"
#include "rir/dialects/dialects.hpp"
#include "rir/exec/semantics.hpp"
#include "rir/text/print.hpp"

namespace rir {

enum class PassId : uint8_t { ConstFold, DCE, CSE };

inline const char *to_string(PassId p) {
  switch (p) {
    case PassId::ConstFold: return "constfold";
    case PassId::DCE: return "dce";
    case PassId::CSE: return "cse";
  }
  return "?";
}

struct BugInjection {
  bool b1_dce_drops_infinite_loops = false;
  bool b2_xor_self_misfold = false;

  bool any() const { return b1_dce_drops_infinite_loops || b2_xor_self_misfold; }
};

namespace detail {

using Subst = std::unordered_map<uint32_t, ValueRef>;

inline ValueRef resolve(const Subst &subst, ValueRef v) {
  auto it = subst.find(v.id);
  while (it != subst.end()) {
    v = it->second;
    it = subst.find(v.id);
  }
  return v;
}

inline void apply_subst(const Subst &subst, OperationNode &op) {
  for (ValueRef &v : op.operands) v = resolve(subst, v);
}

//===----------------------------------------------------------------------===//
// Constant folding
//===----------------------------------------------------------------------===//

class ConstFolder {
 public:
  ConstFolder(const Registry &registry, bool b2) : registry_(&registry), b2_(b2) {}

  void run(ModuleRoot &module) {
    for (OperationNode &op : module.body.block().ops) fold_op(op);
    // Select rewrites only redirect uses; the dead selects are DCE's job.
  }

 private:
  const Registry *registry_;
  bool b2_;
  std::unordered_map<uint32_t, int64_t> consts_;  // id -> stored value
  Subst subst_;

  std::optional<int64_t> const_of(const ValueRef &v) const {
    auto it = consts_.find(v.id);
    if (it == consts_.end()) return std::nullopt;
    return it->second;
  }

  void morph_to_constant(OperationNode &op, int64_t stored) {
    const TypeDesc t = op.results[0].type;
    stored = wrap_to_width(stored, t);
    op.dialect = "arith";
    op.name = "constant";
    op.operands.clear();
    op.attributes.clear();
    if (t.kind == TypeKind::I1)
      op.attributes.emplace("value", BoolAttr{(stored & 1) != 0});
    else
      op.attributes.emplace("value", IntAttr{stored, t});
    op.traits = registry_->lookup("arith.constant")->traits;
    consts_[op.results[0].id] = stored;
  }

  void fold_op(OperationNode &op) {
    apply_subst(subst_, op);
    const OpKindSpec *spec = registry_->lookup(op.full_name());
    if (spec) {
      switch (spec->code) {
        case OpCode::Constant: {
          const AttributeVal &attr = op.attributes.at("value");
          int64_t v = std::holds_alternative<BoolAttr>(attr)
                          ? (std::get<BoolAttr>(attr).value ? 1 : 0)
                          : std::get<IntAttr>(attr).value;
          consts_[op.results[0].id] = wrap_to_width(v, op.results[0].type);
          break;
        }
        case OpCode::XorI: {
          if (op.operands[0].id == op.operands[1].id) {
            morph_to_constant(op, b2_ ? 1 : 0);
            break;
          }
          [[fallthrough]];
        }
        case OpCode::AddI:
        case OpCode::SubI:
        case OpCode::MulI:
        case OpCode::AndI:
        case OpCode::OrI:
        case OpCode::DivSI: {
          auto a = const_of(op.operands[0]);
          auto b = const_of(op.operands[1]);
          if (a && b)
            // Division by a zero constant stays put to preserve the trap.
            if (auto r = eval_int_binary(spec->code, *a, *b, op.results[0].type))
              morph_to_constant(op, *r);
          break;
        }
        case OpCode::CmpI: {
          auto a = const_of(op.operands[0]);
          auto b = const_of(op.operands[1]);
          if (a && b)
            morph_to_constant(
                op, eval_cmp(std::get<CmpPredicate>(op.attributes.at("predicate")),
                             *a, *b, op.operands[0].type)
                        ? 1
                        : 0);
          break;
        }
        case OpCode::Select: {
          auto c = const_of(op.operands[0]);
          if (!c) break;
          const ValueRef &chosen = (*c & 1) ? op.operands[1] : op.operands[2];
          if (auto v = const_of(chosen)) {
            morph_to_constant(op, *v);
          } else {
            subst_[op.results[0].id] = chosen;
          }
          break;
        }
        default: break;
      }
    }
    for (RegionNode &region : op.regions)
      for (BlockNode &block : region.blocks)
        for (OperationNode &nested : block.ops) fold_op(nested);
  }
};

//===----------------------------------------------------------------------===//
// Dead code elimination
//===----------------------------------------------------------------------===//

// Deletion policy: only region-free pure ops with entirely unused results
// are swept, plus — under B1 — zero-result while loops with side-effect-free
// regions. Region-bearing ops and calls are never deleted even when their
// bodies are pure: dropping a bounded 1024^3-trip loop nest is semantically
// sound but makes the optimized binary arbitrarily faster than the original,
// which the fuel-escalation harness would misread as a termination change.
// Keeping loop structure bounds the speedup by roughly the block-size cap
// and leaves B1 as the only transform that can alter termination.
class DeadCodeElim {
 public:
  DeadCodeElim(const Registry &registry, bool b1) : registry_(&registry), b1_(b1) {}

  void run(ModuleRoot &module) {
    bool changed = true;
    while (changed) {
      changed = false;
      count_uses(module);
      for (OperationNode &func : module.body.block().ops)
        if (!func.regions.empty())
          changed |= sweep_block(func.regions[0].block());
    }
  }

 private:
  const Registry *registry_;
  bool b1_;
  std::unordered_map<uint32_t, int> uses_;

  void count_uses(const ModuleRoot &module) {
    uses_.clear();
    walk(module, [&](const OperationNode &op) {
      for (const ValueRef &v : op.operands) ++uses_[v.id];
    });
  }

  // Calls count as effects here: callee bodies are not inspected.
  bool side_effect_free(const OperationNode &op) const {
    if (op.has_trait(kHasSideEffects)) return false;
    if (op.full_name() == "func.call") return false;
    for (const RegionNode &region : op.regions)
      for (const BlockNode &block : region.blocks)
        for (const OperationNode &nested : block.ops)
          if (!side_effect_free(nested)) return false;
    return true;
  }

  bool results_unused(const OperationNode &op) const {
    for (const ValueRef &r : op.results) {
      auto it = uses_.find(r.id);
      if (it != uses_.end() && it->second > 0) return false;
    }
    return true;
  }

  bool deletable(const OperationNode &op) const {
    if (op.has_trait(kIsTerminator)) return false;
    if (op.full_name() == "scf.while")
      // Sound deletion would need a termination proof (an AlwaysTerminates
      // trait, which no while carries). B1 skips that proof — the injected
      // infinite-loop-elimination bug.
      return b1_ && results_unused(op) && side_effect_free(op);
    if (!op.regions.empty() || op.full_name() == "func.call") return false;
    if (op.results.empty()) return false;
    return results_unused(op) && side_effect_free(op);
  }

  void drop_uses(const OperationNode &op) {
    for (const ValueRef &v : op.operands) --uses_[v.id];
    for (const RegionNode &region : op.regions)
      for (const BlockNode &block : region.blocks)
        for (const OperationNode &nested : block.ops) drop_uses(nested);
  }

  bool sweep_block(BlockNode &block) {
    bool changed = false;
    for (size_t i = block.ops.size(); i-- > 0;) {
      OperationNode &op = block.ops[i];
      for (RegionNode &region : op.regions)
        for (BlockNode &nested : region.blocks) changed |= sweep_block(nested);
      if (deletable(op)) {
        drop_uses(op);
        block.ops.erase(block.ops.begin() + (ptrdiff_t)i);
        changed = true;
      }
    }
    return changed;
  }
};

//===----------------------------------------------------------------------===//
// Common subexpression elimination
//===----------------------------------------------------------------------===//

class CommonSubexprElim {
 public:
  explicit CommonSubexprElim(const Registry &registry) : registry_(&registry) {}

  void run(ModuleRoot &module) { run_block(module.body.block()); }

 private:
  const Registry *registry_;
  Subst subst_;

  bool eligible(const OperationNode &op) const {
    if (op.has_trait(kIsTerminator) || op.has_trait(kHasSideEffects))
      return false;
    if (!op.regions.empty() || op.results.empty()) return false;
    // Calls stay put: callee purity is not tracked here.
    return op.full_name() != "func.call";
  }

  std::string key_of(const OperationNode &op) const {
    std::string key = op.full_name();
    for (const ValueRef &v : op.operands) {
      key += '|';
      key += std::to_string(v.id);
    }
    for (const auto &[name, value] : op.attributes) {
      key += '|';
      key += name;
      key += '=';
      key += to_string(value);
    }
    return key;
  }

  /// Value numbering is per block; nested blocks start fresh tables (no
  /// merging across region boundaries) but inherit the running use
  /// substitutions from enclosing scopes.
  void run_block(BlockNode &block) {
    std::unordered_map<std::string, size_t> table;
    std::vector<size_t> drop;
    for (size_t i = 0; i < block.ops.size(); ++i) {
      OperationNode &op = block.ops[i];
      apply_subst(subst_, op);
      for (RegionNode &region : op.regions)
        for (BlockNode &nested : region.blocks) run_block(nested);
      if (!eligible(op)) continue;
      std::string key = key_of(op);
      auto [it, fresh] = table.emplace(std::move(key), i);
      if (fresh) continue;
      const OperationNode &keep = block.ops[it->second];
      for (size_t r = 0; r < op.results.size(); ++r)
        subst_[op.results[r].id] = keep.results[r];
      drop.push_back(i);
    }
    for (size_t k = drop.size(); k-- > 0;)
      block.ops.erase(block.ops.begin() + (ptrdiff_t)drop[k]);
  }
};

}  // namespace detail

/// Applies one pass as a pure module-to-module transform; the input is
/// untouched and the output stays verifier-clean.
inline ModuleRoot run_pass(const ModuleRoot &module, PassId pass,
                           BugInjection inject = {},
                           const Registry &registry = default_registry()) {
  ModuleRoot result = module;
  switch (pass) {
    case PassId::ConstFold:
      detail::ConstFolder(registry, inject.b2_xor_self_misfold).run(result);
      break;
    case PassId::DCE:
      detail::DeadCodeElim(registry, inject.b1_dce_drops_infinite_loops)
          .run(result);
      break;
    case PassId::CSE:
      detail::CommonSubexprElim(registry).run(result);
      break;
  }
  return result;
}

inline const std::vector<PassId> &default_pipeline() {
  static const std::vector<PassId> passes = {PassId::ConstFold, PassId::CSE,
                                             PassId::DCE};
  return passes;
}

struct PipelineResult {
  ModuleRoot module;
  bool reached_fixpoint = false;
  int iterations = 0;
};

/// Runs the pass list repeatedly until a fixpoint (detected by structural
/// equality) or the iteration cap; a capped run is flagged, not an error.
inline PipelineResult run_pipeline(const ModuleRoot &module,
                                   const std::vector<PassId> &passes,
                                   BugInjection inject = {},
                                   const Registry &registry = default_registry(),
                                   int max_iterations = 8) {
  PipelineResult res{module, false, 0};
  for (int i = 0; i < max_iterations; ++i) {
    ModuleRoot next = res.module;
    for (PassId p : passes) next = run_pass(next, p, inject, registry);
    ++res.iterations;
    if (structural_equal(next, res.module)) {
      res.reached_fixpoint = true;
      res.module = std::move(next);
      return res;
    }
    res.module = std::move(next);
  }
  return res;
}

inline PipelineResult run_pipeline(const ModuleRoot &module,
                                   BugInjection inject = {},
                                   const Registry &registry = default_registry()) {
  return run_pipeline(module, default_pipeline(), inject, registry);
}

}  // namespace rir
