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
#include <map>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace rir {

//===----------------------------------------------------------------------===//
// Types
//===----------------------------------------------------------------------===//

enum class TypeKind : uint8_t { I1, I32, I64, Index, MemRef };

/// A value type. Integer kinds are i1/i32/i64/index (index is 64-bit signed
/// at runtime); MemRef is a 1-D buffer of i32 with a static element count.
struct TypeDesc {
  TypeKind kind = TypeKind::I32;
  int64_t memref_size = 0;  // element count; 0 unless kind == MemRef

  static TypeDesc i1() { return {TypeKind::I1, 0}; }
  static TypeDesc i32() { return {TypeKind::I32, 0}; }
  static TypeDesc i64() { return {TypeKind::I64, 0}; }
  static TypeDesc index() { return {TypeKind::Index, 0}; }
  static TypeDesc memref(int64_t size) { return {TypeKind::MemRef, size}; }

  bool is_integer() const { return kind != TypeKind::MemRef; }
  bool is_memref() const { return kind == TypeKind::MemRef; }

  /// Bit width of integer kinds (index counts as 64).
  int bit_width() const {
    switch (kind) {
      case TypeKind::I1: return 1;
      case TypeKind::I32: return 32;
      default: return 64;
    }
  }

  friend bool operator==(const TypeDesc &, const TypeDesc &) = default;
};

inline std::string to_string(const TypeDesc &t) {
  switch (t.kind) {
    case TypeKind::I1: return "i1";
    case TypeKind::I32: return "i32";
    case TypeKind::I64: return "i64";
    case TypeKind::Index: return "index";
    case TypeKind::MemRef:
      return "memref<" + std::to_string(t.memref_size) + "xi32>";
  }
  return "?";
}

//===----------------------------------------------------------------------===//
// Attributes
//===----------------------------------------------------------------------===//

enum class CmpPredicate : uint8_t { eq, ne, slt, sle, sgt, sge };

inline const char *to_string(CmpPredicate p) {
  switch (p) {
    case CmpPredicate::eq: return "eq";
    case CmpPredicate::ne: return "ne";
    case CmpPredicate::slt: return "slt";
    case CmpPredicate::sle: return "sle";
    case CmpPredicate::sgt: return "sgt";
    case CmpPredicate::sge: return "sge";
  }
  return "?";
}

/// Integer attribute: a signed value that fits the bit width of `type`.
struct IntAttr {
  int64_t value = 0;
  TypeDesc type;
  friend bool operator==(const IntAttr &, const IntAttr &) = default;
};

struct BoolAttr {
  bool value = false;
  friend bool operator==(const BoolAttr &, const BoolAttr &) = default;
};

/// Reference to a function by name.
struct SymbolAttr {
  std::string name;
  friend bool operator==(const SymbolAttr &, const SymbolAttr &) = default;
};

using AttributeVal = std::variant<IntAttr, BoolAttr, CmpPredicate, SymbolAttr>;

//===----------------------------------------------------------------------===//
// Traits
//===----------------------------------------------------------------------===//

using TraitMask = uint8_t;
enum OpTrait : TraitMask {
  kIsTerminator = 1u << 0,
  kIsolatedFromAbove = 1u << 1,
  kHasSideEffects = 1u << 2,
  kAlwaysTerminates = 1u << 3,
};

//===----------------------------------------------------------------------===//
// IR nodes
//===----------------------------------------------------------------------===//

/// A typed SSA value. Ids are unique module-wide and monotonically
/// increasing in creation order; the defining site (op result or block
/// argument) is wherever the ref is stored structurally.
struct ValueRef {
  uint32_t id = 0;
  TypeDesc type;
  friend bool operator==(const ValueRef &, const ValueRef &) = default;
};

struct RegionNode;

/// One IR operation: namespaced name, operands, attributes, results and
/// nested single-block regions.
struct OperationNode {
  std::string dialect;
  std::string name;
  std::vector<ValueRef> operands;
  std::map<std::string, AttributeVal> attributes;  // ordered for printing
  std::vector<ValueRef> results;
  std::vector<RegionNode> regions;
  TraitMask traits = 0;

  std::string full_name() const { return dialect + "." + name; }
  bool has_trait(OpTrait t) const { return (traits & t) != 0; }
};

struct BlockNode {
  uint32_t id = 0;
  std::vector<ValueRef> args;
  std::vector<OperationNode> ops;
};

/// A region holds exactly one block in this IR. `declared_result_types` is
/// fixed retrospectively when the terminator is inserted and must equal the
/// terminator's operand types.
struct RegionNode {
  std::vector<BlockNode> blocks;
  std::vector<TypeDesc> declared_result_types;

  BlockNode &block() { return blocks.front(); }
  const BlockNode &block() const { return blocks.front(); }
};

/// Top-level module: a single region whose block holds function definitions.
struct ModuleRoot {
  RegionNode body;
  std::string entry = "main";

  ModuleRoot() { body.blocks.emplace_back(); }
};

//===----------------------------------------------------------------------===//
// Traversal
//===----------------------------------------------------------------------===//

namespace detail {
template <typename Block, typename F>
int walk_block(Block &block, F &&fn) {
  int n = 0;
  for (auto &op : block.ops) {
    fn(op);
    ++n;
    for (auto &region : op.regions)
      for (auto &b : region.blocks) n += walk_block(b, fn);
  }
  return n;
}
}  // namespace detail

/// Pre-order traversal of every operation, including nested regions.
/// Returns the number of operations visited.
template <typename F>
int walk(const ModuleRoot &module, F &&fn) {
  int n = 0;
  for (const auto &b : module.body.blocks) n += detail::walk_block(b, fn);
  return n;
}

template <typename F>
int walk(ModuleRoot &module, F &&fn) {
  int n = 0;
  for (auto &b : module.body.blocks) n += detail::walk_block(b, fn);
  return n;
}

//===----------------------------------------------------------------------===//
// Structural equality
//===----------------------------------------------------------------------===//

namespace detail {

struct IdBijection {
  std::unordered_map<uint32_t, uint32_t> fwd, rev;

  // Records a definition pair; fails on any clash with earlier pairs.
  bool define(uint32_t a, uint32_t b) {
    auto [it, inserted] = fwd.emplace(a, b);
    if (!inserted && it->second != b) return false;
    auto [jt, jinserted] = rev.emplace(b, a);
    if (!jinserted && jt->second != a) return false;
    return true;
  }

  bool matches(uint32_t a, uint32_t b) const {
    auto it = fwd.find(a);
    return it != fwd.end() && it->second == b;
  }
};

inline bool equal_block(const BlockNode &, const BlockNode &, IdBijection &);

inline bool equal_op(const OperationNode &a, const OperationNode &b,
                     IdBijection &map) {
  if (a.dialect != b.dialect || a.name != b.name) return false;
  if (a.attributes != b.attributes) return false;
  if (a.operands.size() != b.operands.size()) return false;
  for (size_t i = 0; i < a.operands.size(); ++i) {
    if (a.operands[i].type != b.operands[i].type) return false;
    if (!map.matches(a.operands[i].id, b.operands[i].id)) return false;
  }
  if (a.results.size() != b.results.size()) return false;
  for (size_t i = 0; i < a.results.size(); ++i) {
    if (a.results[i].type != b.results[i].type) return false;
    if (!map.define(a.results[i].id, b.results[i].id)) return false;
  }
  if (a.regions.size() != b.regions.size()) return false;
  for (size_t i = 0; i < a.regions.size(); ++i) {
    if (a.regions[i].declared_result_types != b.regions[i].declared_result_types)
      return false;
    if (a.regions[i].blocks.size() != b.regions[i].blocks.size()) return false;
    for (size_t j = 0; j < a.regions[i].blocks.size(); ++j)
      if (!equal_block(a.regions[i].blocks[j], b.regions[i].blocks[j], map))
        return false;
  }
  return true;
}

inline bool equal_block(const BlockNode &a, const BlockNode &b,
                        IdBijection &map) {
  if (a.args.size() != b.args.size()) return false;
  for (size_t i = 0; i < a.args.size(); ++i) {
    if (a.args[i].type != b.args[i].type) return false;
    if (!map.define(a.args[i].id, b.args[i].id)) return false;
  }
  if (a.ops.size() != b.ops.size()) return false;
  for (size_t i = 0; i < a.ops.size(); ++i)
    if (!equal_op(a.ops[i], b.ops[i], map)) return false;
  return true;
}

}  // namespace detail

/// True iff the two modules are isomorphic up to value-id renaming: same op
/// names, attributes and operand positions (mapped through the renaming),
/// same region shapes and declared types.
inline bool structural_equal(const ModuleRoot &a, const ModuleRoot &b) {
  if (a.entry != b.entry) return false;
  if (a.body.blocks.size() != b.body.blocks.size()) return false;
  detail::IdBijection map;
  for (size_t i = 0; i < a.body.blocks.size(); ++i)
    if (!detail::equal_block(a.body.blocks[i], b.body.blocks[i], map))
      return false;
  return true;
}

}  // namespace rir
