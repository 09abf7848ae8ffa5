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
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rir/core/ir.hpp"

namespace rir {

class OpBuilder;

enum class GenStatus { Inserted, NotApplicable };

/// Interpreter dispatch code; one per registered op kind.
enum class OpCode : uint8_t {
  Constant, AddI, SubI, MulI, AndI, OrI, XorI, DivSI, CmpI, Select,
  If, For, While, Yield, Condition,
  Func, Return, Call,
  Alloc, Load, Store, Dealloc,
};

enum class ViolationKind : uint8_t {
  UnknownOp,
  UseBeforeDef,
  TypeMismatch,
  ArityMismatch,
  AttributeInvalid,
  RegionShape,
  MissingTerminator,
  MisplacedTerminator,
  TerminatorTypeMismatch,
  DuplicateResultId,
  TraitMismatch,
  CallTarget,
  ModuleStructure,
};

inline const char *to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::UnknownOp: return "UnknownOp";
    case ViolationKind::UseBeforeDef: return "UseBeforeDef";
    case ViolationKind::TypeMismatch: return "TypeMismatch";
    case ViolationKind::ArityMismatch: return "ArityMismatch";
    case ViolationKind::AttributeInvalid: return "AttributeInvalid";
    case ViolationKind::RegionShape: return "RegionShape";
    case ViolationKind::MissingTerminator: return "MissingTerminator";
    case ViolationKind::MisplacedTerminator: return "MisplacedTerminator";
    case ViolationKind::TerminatorTypeMismatch: return "TerminatorTypeMismatch";
    case ViolationKind::DuplicateResultId: return "DuplicateResultId";
    case ViolationKind::TraitMismatch: return "TraitMismatch";
    case ViolationKind::CallTarget: return "CallTarget";
    case ViolationKind::ModuleStructure: return "ModuleStructure";
  }
  return "?";
}

/// A verifier finding. `path` is a stable location string such as
/// "main/body/op[3]/region[0]/op[1]".
struct Violation {
  ViolationKind kind;
  std::string path;
  std::string message;
};

/// Function signature as seen by call sites and the verifier.
struct FuncSig {
  std::string name;
  std::vector<TypeDesc> arg_types;
  std::vector<TypeDesc> result_types;
  size_t index = 0;  // definition order within the module block
};

/// Context handed to per-op verify hooks.
struct VerifyCtx {
  const std::unordered_map<std::string, FuncSig> *functions = nullptr;
  // Index of the function definition currently being verified; call sites
  // may only target strictly smaller indices (no recursion, no forward refs).
  size_t current_function_index = 0;
};

/// Static description of one op kind: traits, region shape, and the
/// constraint check shared by the verifier and by checked insertion.
struct OpKindSpec {
  std::string dialect;
  std::string name;
  OpCode code;
  TraitMask traits = 0;
  int num_regions = 0;
  // Expected terminator (full name) for each region; empty for none.
  std::vector<std::string> region_terminators;
  // Whether fill_block may pick this op for its selection pool.
  bool pool_eligible = false;
  // Appends violations for per-op constraints (signature, attributes,
  // region shape). Generic SSA checks live in the verifier walker.
  void (*verify)(const OperationNode &, const VerifyCtx &,
                 const std::string &path, std::vector<Violation> &) = nullptr;
  // Attempts to build and insert one instance at the current insertion
  // point. Null for terminators and for ops inserted by dedicated drivers.
  GenStatus (*generate)(OpBuilder &) = nullptr;

  std::string full_name() const { return dialect + "." + name; }
};

/// Immutable table of registered op kinds, keyed by full name.
class Registry {
 public:
  void add(OpKindSpec spec) {
    std::string key = spec.full_name();
    order_.push_back(key);
    specs_.emplace(std::move(key), std::move(spec));
  }

  const OpKindSpec *lookup(const std::string &full_name) const {
    auto it = specs_.find(full_name);
    return it == specs_.end() ? nullptr : &it->second;
  }

  /// Registration order; used for deterministic pool construction.
  const std::vector<std::string> &names() const { return order_; }

 private:
  std::unordered_map<std::string, OpKindSpec> specs_;
  std::vector<std::string> order_;
};

}  // namespace rir
