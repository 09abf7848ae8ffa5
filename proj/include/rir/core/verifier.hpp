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

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rir/core/ir.hpp"
#include "rir/core/registry.hpp"

namespace rir {

namespace detail {

struct VerifyState {
  const Registry *registry;
  std::vector<Violation> out;
  std::unordered_map<uint32_t, TypeDesc> def_types;
  std::unordered_set<uint32_t> all_ids;
  // Innermost-last stack of visible id sets. A frame with `isolated` set
  // blocks visibility of everything outside it.
  struct Frame {
    std::unordered_set<uint32_t> ids;
    bool isolated = false;
  };
  std::vector<Frame> frames;
  std::unordered_map<std::string, FuncSig> functions;
  size_t current_function_index = 0;

  void violation(ViolationKind kind, const std::string &path,
                 std::string message) {
    out.push_back({kind, path, std::move(message)});
  }

  bool is_visible(uint32_t id) const {
    for (auto it = frames.rbegin(); it != frames.rend(); ++it) {
      if (it->ids.count(id)) return true;
      if (it->isolated) break;
    }
    return false;
  }

  void define(const ValueRef &v, const std::string &path) {
    if (!all_ids.insert(v.id).second)
      violation(ViolationKind::DuplicateResultId, path,
                "value id %" + std::to_string(v.id) + " defined twice");
    def_types[v.id] = v.type;
    frames.back().ids.insert(v.id);
  }
};

inline void verify_block(const BlockNode &block, const OperationNode *parent,
                         int region_index, const std::string &path,
                         VerifyState &st);

inline void verify_op(const OperationNode &op, const std::string &path,
                      VerifyState &st) {
  const OpKindSpec *spec = st.registry->lookup(op.full_name());
  if (!spec) {
    st.violation(ViolationKind::UnknownOp, path,
                 "unregistered operation '" + op.full_name() + "'");
    // Still walk operands/results so SSA bookkeeping stays coherent.
  } else {
    if (op.traits != spec->traits)
      st.violation(ViolationKind::TraitMismatch, path,
                   "traits do not match registry for '" + op.full_name() + "'");
    if ((int)op.regions.size() != spec->num_regions)
      st.violation(ViolationKind::RegionShape, path,
                   op.full_name() + " expects " +
                       std::to_string(spec->num_regions) + " regions, has " +
                       std::to_string(op.regions.size()));
  }

  for (size_t i = 0; i < op.operands.size(); ++i) {
    const ValueRef &v = op.operands[i];
    if (!st.is_visible(v.id)) {
      st.violation(ViolationKind::UseBeforeDef, path,
                   "operand " + std::to_string(i) + " (%" +
                       std::to_string(v.id) + ") is not defined above this op");
      continue;
    }
    auto it = st.def_types.find(v.id);
    if (it != st.def_types.end() && !(it->second == v.type))
      st.violation(ViolationKind::TypeMismatch, path,
                   "operand " + std::to_string(i) + " (%" +
                       std::to_string(v.id) + ") has type " +
                       to_string(it->second) + ", use says " +
                       to_string(v.type));
  }

  for (const ValueRef &r : op.results) st.define(r, path);

  if (spec && spec->verify) {
    VerifyCtx ctx{&st.functions, st.current_function_index};
    spec->verify(op, ctx, path, st.out);
  }

  bool is_func = op.full_name() == "func.func";
  for (size_t r = 0; r < op.regions.size(); ++r) {
    const RegionNode &region = op.regions[r];
    if (region.blocks.size() != 1) {
      st.violation(ViolationKind::RegionShape, path,
                   "region " + std::to_string(r) + " must hold exactly one "
                   "block, has " + std::to_string(region.blocks.size()));
      continue;
    }
    // Function bodies read as "<name>/body/..."; other regions by index.
    std::string region_path =
        is_func ? path + "/body" : path + "/region[" + std::to_string(r) + "]";
    verify_block(region.block(), &op, (int)r, region_path, st);
  }
}

inline void verify_block(const BlockNode &block, const OperationNode *parent,
                         int region_index, const std::string &path,
                         VerifyState &st) {
  st.frames.push_back(
      {{}, parent != nullptr && parent->has_trait(kIsolatedFromAbove)});
  for (const ValueRef &arg : block.args) st.define(arg, path);

  const OpKindSpec *parent_spec =
      parent ? st.registry->lookup(parent->full_name()) : nullptr;
  std::string expected_term;
  if (parent_spec && region_index < (int)parent_spec->region_terminators.size())
    expected_term = parent_spec->region_terminators[region_index];

  for (size_t i = 0; i < block.ops.size(); ++i) {
    const OperationNode &op = block.ops[i];
    std::string op_path = path + "/op[" + std::to_string(i) + "]";
    bool is_last = i + 1 == block.ops.size();
    if (op.has_trait(kIsTerminator) && !is_last)
      st.violation(ViolationKind::MisplacedTerminator, op_path,
                   "terminator is not the final op of its block");
    verify_op(op, op_path, st);
  }

  if (!expected_term.empty()) {
    const RegionNode &region = parent->regions[region_index];
    if (block.ops.empty() || !block.ops.back().has_trait(kIsTerminator) ||
        block.ops.back().full_name() != expected_term) {
      st.violation(ViolationKind::MissingTerminator, path,
                   "block must end with " + expected_term);
    } else {
      const OperationNode &term = block.ops.back();
      std::vector<TypeDesc> term_types;
      for (const ValueRef &v : term.operands) term_types.push_back(v.type);
      if (term_types != region.declared_result_types)
        st.violation(ViolationKind::TerminatorTypeMismatch, path,
                     "declared region result types do not match " +
                         expected_term + " operand types");
    }
  }

  st.frames.pop_back();
}

}  // namespace detail

/// Name of a module-block op for path strings: the function symbol when
/// available, otherwise a positional segment.
inline std::string top_level_path_segment(const OperationNode &op, size_t i) {
  if (auto it = op.attributes.find("sym_name"); it != op.attributes.end())
    if (const auto *sym = std::get_if<SymbolAttr>(&it->second))
      return sym->name;
  return "op[" + std::to_string(i) + "]";
}

/// Collects the signatures of all function definitions in module order.
inline std::vector<FuncSig> function_signatures(const ModuleRoot &module) {
  std::vector<FuncSig> sigs;
  const BlockNode &top = module.body.blocks.front();
  for (size_t i = 0; i < top.ops.size(); ++i) {
    const OperationNode &op = top.ops[i];
    if (op.full_name() != "func.func" || op.regions.size() != 1 ||
        op.regions[0].blocks.size() != 1)
      continue;
    FuncSig sig;
    sig.name = top_level_path_segment(op, i);
    for (const ValueRef &a : op.regions[0].block().args)
      sig.arg_types.push_back(a.type);
    sig.result_types = op.regions[0].declared_result_types;
    sig.index = i;
    sigs.push_back(std::move(sig));
  }
  return sigs;
}

/// Structural verification: SSA dominance and isolation, terminator
/// placement, retroactively declared region types, module shape, and every
/// per-op constraint registered by the dialects. Violations are data; an
/// empty result means the module is clean.
inline std::vector<Violation> verify_module(const ModuleRoot &module,
                                            const Registry &registry) {
  detail::VerifyState st;
  st.registry = &registry;

  if (module.body.blocks.size() != 1) {
    st.violation(ViolationKind::ModuleStructure, "module",
                 "module body must hold exactly one block");
    return std::move(st.out);
  }

  for (const FuncSig &sig : function_signatures(module))
    st.functions.emplace(sig.name, sig);

  const BlockNode &top = module.body.blocks.front();
  int entry_count = 0;
  st.frames.push_back({{}, true});
  for (size_t i = 0; i < top.ops.size(); ++i) {
    const OperationNode &op = top.ops[i];
    std::string path = top_level_path_segment(op, i);
    if (op.full_name() != "func.func") {
      st.violation(ViolationKind::ModuleStructure, path,
                   "module block may hold only func.func definitions");
      continue;
    }
    if (path == module.entry) {
      ++entry_count;
      if (op.regions.size() == 1 && op.regions[0].blocks.size() == 1) {
        const BlockNode &body = op.regions[0].block();
        if (body.args.empty())
          st.violation(ViolationKind::ModuleStructure, path,
                       "entry function must take at least one argument");
        for (const ValueRef &a : body.args)
          if (!a.type.is_integer())
            st.violation(ViolationKind::ModuleStructure, path,
                         "entry function arguments must be integer kinds");
      }
    }
    st.current_function_index = i;
    detail::verify_op(op, path, st);
  }
  st.frames.pop_back();

  if (entry_count != 1)
    st.violation(ViolationKind::ModuleStructure, "module",
                 "module must define exactly one function named '" +
                     module.entry + "'");
  return std::move(st.out);
}

}  // namespace rir
