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
// The four built-in dialects: arith (integer arithmetic, compares, select),
// scf (structured if/for/while), func (definitions, calls, returns) and mem
// (1-D i32 buffers). Each op kind carries a constraint check used by both
// the verifier and checked insertion, and most carry a generator that the
// selection pool invokes.

#pragma once

#include <climits>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rir/core/ir.hpp"
#include "rir/core/registry.hpp"
#include "rir/gen/builder.hpp"

namespace rir {

//===----------------------------------------------------------------------===//
// Type generators
//===----------------------------------------------------------------------===//

/// Integer type sampler used by arith.constant. Booleans are deliberately
/// rare, roughly matching how often boolean literals appear in real code.
inline TypeDesc sample_constant_type(SplitMix64 &rng) {
  static const double weights[] = {0.15, 4.0, 2.0, 1.5};  // i1 i32 i64 index
  switch (rng.choice_weighted(weights)) {
    case 0: return TypeDesc::i1();
    case 1: return TypeDesc::i32();
    case 2: return TypeDesc::i64();
    default: return TypeDesc::index();
  }
}

/// Function argument types; i1 is excluded so call boundaries stay plain.
inline TypeDesc sample_func_arg_type(SplitMix64 &rng) {
  switch (rng.below(3)) {
    case 0: return TypeDesc::i32();
    case 1: return TypeDesc::i64();
    default: return TypeDesc::index();
  }
}

/// Wraps a signed value into the two's-complement range of `type`.
inline int64_t wrap_to_width(int64_t v, const TypeDesc &type) {
  switch (type.kind) {
    case TypeKind::I1: return v & 1;
    case TypeKind::I32: return (int32_t)(uint32_t)(uint64_t)v;
    default: return v;
  }
}

/// Samples a constant value: one of the configured pool values, the min or
/// max of the sampled width, or a fresh uniform draw — all equally likely.
inline int64_t sample_int_constant(OpBuilder &b, const TypeDesc &type) {
  const std::vector<int64_t> &pool = b.config().int_constant_pool;
  int64_t mn = type.bit_width() == 32 ? INT32_MIN : INT64_MIN;
  int64_t mx = type.bit_width() == 32 ? INT32_MAX : INT64_MAX;
  size_t k = b.rng().below(pool.size() + 3);
  int64_t v;
  if (k < pool.size())
    v = pool[k];
  else if (k == pool.size())
    v = mn;
  else if (k == pool.size() + 1)
    v = mx;
  else
    v = (int64_t)b.rng().next();
  return wrap_to_width(v, type);
}

//===----------------------------------------------------------------------===//
// Shared verify helpers
//===----------------------------------------------------------------------===//

namespace vfy {

inline void arity(const OperationNode &op, size_t operands, size_t results,
                  const std::string &path, std::vector<Violation> &out) {
  if (op.operands.size() != operands)
    out.push_back({ViolationKind::ArityMismatch, path,
                   op.full_name() + " expects " + std::to_string(operands) +
                       " operands, has " + std::to_string(op.operands.size())});
  if (op.results.size() != results)
    out.push_back({ViolationKind::ArityMismatch, path,
                   op.full_name() + " expects " + std::to_string(results) +
                       " results, has " + std::to_string(op.results.size())});
}

inline void operand_type(const OperationNode &op, size_t i, const TypeDesc &t,
                         const std::string &path, std::vector<Violation> &out) {
  if (i < op.operands.size() && !(op.operands[i].type == t))
    out.push_back({ViolationKind::TypeMismatch, path,
                   op.full_name() + " operand " + std::to_string(i) +
                       " must be " + to_string(t)});
}

template <typename T>
const T *attr_as(const OperationNode &op, const std::string &key) {
  auto it = op.attributes.find(key);
  if (it == op.attributes.end()) return nullptr;
  return std::get_if<T>(&it->second);
}

}  // namespace vfy

//===----------------------------------------------------------------------===//
// arith
//===----------------------------------------------------------------------===//

inline void verify_arith_constant(const OperationNode &op, const VerifyCtx &,
                                  const std::string &path,
                                  std::vector<Violation> &out) {
  vfy::arity(op, 0, 1, path, out);
  if (op.results.size() != 1) return;
  const TypeDesc &t = op.results[0].type;
  if (!t.is_integer()) {
    out.push_back({ViolationKind::TypeMismatch, path,
                   "arith.constant result must be an integer kind"});
    return;
  }
  if (t.kind == TypeKind::I1) {
    if (!vfy::attr_as<BoolAttr>(op, "value"))
      out.push_back({ViolationKind::AttributeInvalid, path,
                     "boolean constant needs a true/false 'value' attribute"});
    return;
  }
  const IntAttr *attr = vfy::attr_as<IntAttr>(op, "value");
  if (!attr || !(attr->type == t)) {
    out.push_back({ViolationKind::AttributeInvalid, path,
                   "constant needs an integer 'value' attribute of its result type"});
    return;
  }
  if (attr->value != wrap_to_width(attr->value, t))
    out.push_back({ViolationKind::AttributeInvalid, path,
                   "constant value does not fit " + to_string(t)});
}

inline void verify_arith_binary(const OperationNode &op, const VerifyCtx &,
                                const std::string &path,
                                std::vector<Violation> &out) {
  vfy::arity(op, 2, 1, path, out);
  if (op.operands.size() != 2 || op.results.size() != 1) return;
  const TypeDesc &t = op.results[0].type;
  if (!t.is_integer())
    out.push_back({ViolationKind::TypeMismatch, path,
                   op.full_name() + " works on integer kinds"});
  vfy::operand_type(op, 0, t, path, out);
  vfy::operand_type(op, 1, t, path, out);
}

inline void verify_arith_cmpi(const OperationNode &op, const VerifyCtx &,
                              const std::string &path,
                              std::vector<Violation> &out) {
  vfy::arity(op, 2, 1, path, out);
  if (!vfy::attr_as<CmpPredicate>(op, "predicate"))
    out.push_back({ViolationKind::AttributeInvalid, path,
                   "arith.cmpi needs a 'predicate' attribute"});
  if (op.operands.size() != 2 || op.results.size() != 1) return;
  if (!(op.results[0].type == TypeDesc::i1()))
    out.push_back({ViolationKind::TypeMismatch, path,
                   "arith.cmpi produces i1"});
  if (!op.operands[0].type.is_integer() ||
      !(op.operands[0].type == op.operands[1].type))
    out.push_back({ViolationKind::TypeMismatch, path,
                   "arith.cmpi operands must share one integer kind"});
}

inline void verify_arith_select(const OperationNode &op, const VerifyCtx &,
                                const std::string &path,
                                std::vector<Violation> &out) {
  vfy::arity(op, 3, 1, path, out);
  if (op.operands.size() != 3 || op.results.size() != 1) return;
  vfy::operand_type(op, 0, TypeDesc::i1(), path, out);
  const TypeDesc &t = op.results[0].type;
  if (!(op.operands[1].type == t) || !(op.operands[2].type == t))
    out.push_back({ViolationKind::TypeMismatch, path,
                   "arith.select branch values must match the result type"});
}

inline GenStatus gen_arith_constant(OpBuilder &b) {
  TypeDesc t = sample_constant_type(b.rng());
  OperationNode op = b.make_op("arith.constant");
  int64_t raw;
  if (t.kind == TypeKind::I1) {
    bool v = b.rng().below(2) == 1;
    op.attributes.emplace("value", BoolAttr{v});
    raw = v ? 1 : 0;
  } else {
    int64_t v = sample_int_constant(b, t);
    op.attributes.emplace("value", IntAttr{v, t});
    raw = v;
  }
  ValueRef r = b.new_value(t);
  op.results.push_back(r);
  GenStatus st = b.create_checked(std::move(op));
  if (st == GenStatus::Inserted) b.record_constant(r.id, raw);
  return st;
}

/// Distinct widths with visible values. Arithmetic keeps its hands off i1
/// (booleans flow through constant, cmpi, select conditions and if results);
/// cmpi alone may compare i1 pairs.
inline std::vector<TypeDesc> visible_arith_widths(OpBuilder &b,
                                                  bool include_i1) {
  std::vector<TypeDesc> widths;
  for (const ValueRef &v : b.visible_values_if([&](const ValueRef &v) {
         return v.type.is_integer() &&
                (include_i1 || v.type.kind != TypeKind::I1);
       })) {
    bool seen = false;
    for (const TypeDesc &t : widths) seen |= t == v.type;
    if (!seen) widths.push_back(v.type);
  }
  return widths;
}

/// Common body of the commutative/odd binaries: picks one integer width
/// that has visible values, then samples both operands from it (they may
/// coincide).
inline GenStatus gen_arith_binary_common(OpBuilder &b, const char *full_name) {
  std::vector<TypeDesc> widths = visible_arith_widths(b, /*include_i1=*/false);
  if (widths.empty()) return GenStatus::NotApplicable;
  TypeDesc t = widths[b.rng().below(widths.size())];
  OperationNode op = b.make_op(full_name);
  op.operands.push_back(*b.sample_value(t));
  op.operands.push_back(*b.sample_value(t));
  op.results.push_back(b.new_value(t));
  return b.create_checked(std::move(op));
}

inline GenStatus gen_arith_addi(OpBuilder &b) { return gen_arith_binary_common(b, "arith.addi"); }
inline GenStatus gen_arith_subi(OpBuilder &b) { return gen_arith_binary_common(b, "arith.subi"); }
inline GenStatus gen_arith_muli(OpBuilder &b) { return gen_arith_binary_common(b, "arith.muli"); }
inline GenStatus gen_arith_andi(OpBuilder &b) { return gen_arith_binary_common(b, "arith.andi"); }
inline GenStatus gen_arith_ori(OpBuilder &b) { return gen_arith_binary_common(b, "arith.ori"); }
inline GenStatus gen_arith_xori(OpBuilder &b) { return gen_arith_binary_common(b, "arith.xori"); }

/// Division is kept trap-free at generation time: the divisor must be the
/// result of a constant op with a nonzero value.
inline GenStatus gen_arith_divsi(OpBuilder &b) {
  auto divisors = b.visible_values_if([&](const ValueRef &v) {
    if (!v.type.is_integer() || v.type.kind == TypeKind::I1) return false;
    auto c = b.constant_value(v.id);
    return c.has_value() && *c != 0;
  });
  if (divisors.empty()) return GenStatus::NotApplicable;
  ValueRef divisor = divisors[b.rng().below(divisors.size())];
  OperationNode op = b.make_op("arith.divsi");
  op.operands.push_back(*b.sample_value(divisor.type));
  op.operands.push_back(divisor);
  op.results.push_back(b.new_value(divisor.type));
  return b.create_checked(std::move(op));
}

inline GenStatus gen_arith_cmpi(OpBuilder &b) {
  std::vector<TypeDesc> widths = visible_arith_widths(b, /*include_i1=*/true);
  if (widths.empty()) return GenStatus::NotApplicable;
  TypeDesc t = widths[b.rng().below(widths.size())];
  OperationNode op = b.make_op("arith.cmpi");
  op.attributes.emplace("predicate", (CmpPredicate)b.rng().below(6));
  op.operands.push_back(*b.sample_value(t));
  op.operands.push_back(*b.sample_value(t));
  op.results.push_back(b.new_value(TypeDesc::i1()));
  return b.create_checked(std::move(op));
}

inline GenStatus gen_arith_select(OpBuilder &b) {
  auto cond = b.sample_value(TypeDesc::i1());
  if (!cond) return GenStatus::NotApplicable;
  std::vector<TypeDesc> widths = visible_arith_widths(b, /*include_i1=*/false);
  if (widths.empty()) return GenStatus::NotApplicable;
  TypeDesc t = widths[b.rng().below(widths.size())];
  OperationNode op = b.make_op("arith.select");
  op.operands.push_back(*cond);
  op.operands.push_back(*b.sample_value(t));
  op.operands.push_back(*b.sample_value(t));
  op.results.push_back(b.new_value(t));
  return b.create_checked(std::move(op));
}

//===----------------------------------------------------------------------===//
// scf
//===----------------------------------------------------------------------===//

inline void verify_scf_if(const OperationNode &op, const VerifyCtx &,
                          const std::string &path, std::vector<Violation> &out) {
  vfy::arity(op, 1, op.results.size(), path, out);
  vfy::operand_type(op, 0, TypeDesc::i1(), path, out);
  if (op.regions.size() != 2) return;
  std::vector<TypeDesc> result_types;
  for (const ValueRef &r : op.results) result_types.push_back(r.type);
  for (int i = 0; i < 2; ++i)
    if (op.regions[i].declared_result_types != result_types)
      out.push_back({ViolationKind::TypeMismatch, path,
                     "scf.if region " + std::to_string(i) +
                         " must yield exactly the op's result types"});
}

inline void verify_scf_for(const OperationNode &op, const VerifyCtx &,
                           const std::string &path, std::vector<Violation> &out) {
  vfy::arity(op, 3, 0, path, out);
  for (size_t i = 0; i < 3; ++i)
    vfy::operand_type(op, i, TypeDesc::index(), path, out);
  if (op.regions.size() != 1 || op.regions[0].blocks.size() != 1) return;
  const BlockNode &body = op.regions[0].block();
  if (body.args.size() != 1 || !(body.args[0].type == TypeDesc::index()))
    out.push_back({ViolationKind::RegionShape, path,
                   "scf.for body takes exactly one index induction argument"});
  if (!op.regions[0].declared_result_types.empty())
    out.push_back({ViolationKind::TypeMismatch, path,
                   "scf.for body must yield no values"});
}

inline void verify_scf_while(const OperationNode &op, const VerifyCtx &,
                             const std::string &path,
                             std::vector<Violation> &out) {
  vfy::arity(op, 0, 0, path, out);
  if (op.regions.size() != 2) return;
  if (!(op.regions[0].declared_result_types ==
        std::vector<TypeDesc>{TypeDesc::i1()}))
    out.push_back({ViolationKind::TypeMismatch, path,
                   "scf.while condition region must produce a single i1"});
  if (!op.regions[1].declared_result_types.empty())
    out.push_back({ViolationKind::TypeMismatch, path,
                   "scf.while body region must yield no values"});
  for (int i = 0; i < 2; ++i)
    if (op.regions[i].blocks.size() == 1 && !op.regions[i].block().args.empty())
      out.push_back({ViolationKind::RegionShape, path,
                     "scf.while regions take no arguments"});
}

inline void verify_scf_yield(const OperationNode &op, const VerifyCtx &,
                             const std::string &path,
                             std::vector<Violation> &out) {
  if (!op.results.empty())
    out.push_back({ViolationKind::ArityMismatch, path,
                   "scf.yield produces no results"});
}

inline void verify_scf_condition(const OperationNode &op, const VerifyCtx &,
                                 const std::string &path,
                                 std::vector<Violation> &out) {
  vfy::arity(op, 1, 0, path, out);
  vfy::operand_type(op, 0, TypeDesc::i1(), path, out);
}

inline bool region_gen_allowed(OpBuilder &b, int ops_needed) {
  return b.region_depth() < b.config().max_region_depth &&
         b.budget_left() >= ops_needed && b.block_room() >= ops_needed;
}

/// Appends one region holding a fresh empty block.
inline BlockNode &add_region_block(OpBuilder &b, OperationNode &op) {
  RegionNode &region = op.regions.emplace_back();
  BlockNode &block = region.blocks.emplace_back();
  block.id = b.next_block_id();
  return block;
}

inline ValueRef insert_index_constant(OpBuilder &b, int64_t value) {
  OperationNode op = b.make_op("arith.constant");
  op.attributes.emplace("value", IntAttr{value, TypeDesc::index()});
  ValueRef r = b.new_value(TypeDesc::index());
  op.results.push_back(r);
  if (b.create_checked(std::move(op)) != GenStatus::Inserted)
    throw std::logic_error("index constant insertion cannot fail");
  b.record_constant(r.id, value);
  return r;
}

/// scf.if: the then-region is generated first and its yield fixes the op's
/// result types; the else-region must then produce matching values. When it
/// cannot, the op degrades to zero results and both yields turn empty (the
/// then-side picks stay behind as dead code).
inline GenStatus gen_scf_if(OpBuilder &b) {
  if (!region_gen_allowed(b, 1)) return GenStatus::NotApplicable;
  auto cond = b.sample_value(TypeDesc::i1());
  if (!cond) return GenStatus::NotApplicable;

  b.reserve_op();
  OperationNode op = b.make_op("scf.if");
  op.operands.push_back(*cond);
  op.regions.reserve(2);  // references below must survive the second region
  BlockNode &then_block = add_region_block(b, op);
  RegionNode &then_region = op.regions.back();
  {
    OpBuilder::ScopedRegion scope(b, &then_block, &then_region, false);
    b.fill_block();
    int want = (int)b.rng().below(b.config().max_return_values + 1);
    OperationNode yield = b.make_op("scf.yield");
    for (int i = 0; i < want; ++i)
      if (auto v = b.sample_value_if(
              [](const ValueRef &v) { return v.type.is_integer(); }))
        yield.operands.push_back(*v);
    b.insert_terminator(std::move(yield));
  }

  BlockNode &else_block = add_region_block(b, op);
  RegionNode &else_region = op.regions.back();
  bool matched = true;
  {
    OpBuilder::ScopedRegion scope(b, &else_block, &else_region, false);
    b.fill_block();
    OperationNode yield = b.make_op("scf.yield");
    for (const TypeDesc &t : then_region.declared_result_types) {
      if (auto v = b.sample_value(t)) {
        yield.operands.push_back(*v);
      } else {
        matched = false;
        break;
      }
    }
    if (!matched) yield.operands.clear();
    b.insert_terminator(std::move(yield));
  }
  if (!matched) {
    then_region.block().ops.back().operands.clear();
    then_region.declared_result_types.clear();
  }
  for (const TypeDesc &t : then_region.declared_result_types)
    op.results.push_back(b.new_value(t));
  return b.attach_reserved(std::move(op));
}

/// scf.for: bounds are synthesized as fresh index constants (lower 0, upper
/// in [0, 1024], step in [1, 4]), so every loop trip count is finite.
inline GenStatus gen_scf_for(OpBuilder &b) {
  if (!region_gen_allowed(b, 4)) return GenStatus::NotApplicable;
  ValueRef lb = insert_index_constant(b, 0);
  ValueRef ub = insert_index_constant(b, (int64_t)b.rng().below(1025));
  ValueRef step = insert_index_constant(b, 1 + (int64_t)b.rng().below(4));

  b.reserve_op();
  OperationNode op = b.make_op("scf.for");
  op.operands = {lb, ub, step};
  BlockNode &body = add_region_block(b, op);
  RegionNode &region = op.regions.back();
  body.args.push_back(b.new_value(TypeDesc::index()));
  {
    OpBuilder::ScopedRegion scope(b, &body, &region, false);
    b.fill_block();
    b.insert_terminator(b.make_op("scf.yield"));
  }
  return b.attach_reserved(std::move(op));
}

/// scf.while: no iteration values. The condition region is filled first and
/// must see some i1 (from its own ops or the non-isolated outer scope); if
/// none exists the whole attempt rolls back. May loop forever at runtime.
inline GenStatus gen_scf_while(OpBuilder &b) {
  if (!region_gen_allowed(b, 1)) return GenStatus::NotApplicable;
  OpBuilder::Snapshot snap = b.snapshot();
  b.reserve_op();
  OperationNode op = b.make_op("scf.while");
  op.regions.reserve(2);  // references below must survive the second region

  BlockNode &before = add_region_block(b, op);
  RegionNode &before_region = op.regions.back();
  bool have_condition = false;
  {
    OpBuilder::ScopedRegion scope(b, &before, &before_region, false);
    b.fill_block();
    if (auto cond = b.sample_value(TypeDesc::i1())) {
      OperationNode term = b.make_op("scf.condition");
      term.operands.push_back(*cond);
      b.insert_terminator(std::move(term));
      have_condition = true;
    }
  }
  if (!have_condition) {
    b.restore(snap);
    return GenStatus::NotApplicable;
  }

  BlockNode &after = add_region_block(b, op);
  RegionNode &after_region = op.regions.back();
  {
    OpBuilder::ScopedRegion scope(b, &after, &after_region, false);
    b.fill_block();
    b.insert_terminator(b.make_op("scf.yield"));
  }
  return b.attach_reserved(std::move(op));
}

//===----------------------------------------------------------------------===//
// func
//===----------------------------------------------------------------------===//

inline void verify_func_func(const OperationNode &op, const VerifyCtx &,
                             const std::string &path,
                             std::vector<Violation> &out) {
  vfy::arity(op, 0, 0, path, out);
  if (!vfy::attr_as<SymbolAttr>(op, "sym_name"))
    out.push_back({ViolationKind::AttributeInvalid, path,
                   "func.func needs a 'sym_name' symbol attribute"});
  if (op.regions.size() == 1 && op.regions[0].blocks.size() == 1)
    for (const ValueRef &a : op.regions[0].block().args)
      if (!a.type.is_integer())
        out.push_back({ViolationKind::TypeMismatch, path,
                       "function arguments must be integer kinds"});
}

inline void verify_func_return(const OperationNode &op, const VerifyCtx &,
                               const std::string &path,
                               std::vector<Violation> &out) {
  if (!op.results.empty())
    out.push_back({ViolationKind::ArityMismatch, path,
                   "func.return produces no results"});
}

inline void verify_func_call(const OperationNode &op, const VerifyCtx &ctx,
                             const std::string &path,
                             std::vector<Violation> &out) {
  const SymbolAttr *callee = vfy::attr_as<SymbolAttr>(op, "callee");
  if (!callee) {
    out.push_back({ViolationKind::AttributeInvalid, path,
                   "func.call needs a 'callee' symbol attribute"});
    return;
  }
  if (!ctx.functions) return;
  auto it = ctx.functions->find(callee->name);
  if (it == ctx.functions->end()) {
    out.push_back({ViolationKind::CallTarget, path,
                   "unknown callee '" + callee->name + "'"});
    return;
  }
  const FuncSig &sig = it->second;
  if (sig.index >= ctx.current_function_index) {
    out.push_back({ViolationKind::CallTarget, path,
                   "callee '" + callee->name +
                       "' must be defined before the calling function"});
  }
  if (op.operands.size() != sig.arg_types.size() ||
      op.results.size() != sig.result_types.size()) {
    out.push_back({ViolationKind::ArityMismatch, path,
                   "call signature does not match '" + callee->name + "'"});
    return;
  }
  for (size_t i = 0; i < sig.arg_types.size(); ++i)
    vfy::operand_type(op, i, sig.arg_types[i], path, out);
  for (size_t i = 0; i < sig.result_types.size(); ++i)
    if (!(op.results[i].type == sig.result_types[i]))
      out.push_back({ViolationKind::TypeMismatch, path,
                     "call result " + std::to_string(i) +
                         " does not match '" + callee->name + "'"});
}

inline GenStatus gen_func_call(OpBuilder &b) {
  std::vector<const FuncSig *> eligible;
  for (const FuncSig &sig : b.completed_functions()) {
    bool ok = true;
    for (const TypeDesc &t : sig.arg_types)
      ok = ok && !b.visible_values(t).empty();
    if (ok) eligible.push_back(&sig);
  }
  if (eligible.empty()) return GenStatus::NotApplicable;
  const FuncSig *callee = eligible[b.rng().below(eligible.size())];
  OperationNode op = b.make_op("func.call");
  op.attributes.emplace("callee", SymbolAttr{callee->name});
  for (const TypeDesc &t : callee->arg_types)
    op.operands.push_back(*b.sample_value(t));
  for (const TypeDesc &t : callee->result_types)
    op.results.push_back(b.new_value(t));
  return b.create_checked(std::move(op));
}

/// Builds one function definition into the module block (the module scope
/// must be current). The body is pool-filled and func.return retroactively
/// declares the result types from up to max_return_values sampled integer
/// values. Only integers may cross the call boundary, which keeps buffers
/// function-local.
inline void generate_function(OpBuilder &b, const std::string &name,
                              bool is_main) {
  OperationNode op = b.make_op("func.func");
  op.attributes.emplace("sym_name", SymbolAttr{name});
  BlockNode &body = add_region_block(b, op);
  RegionNode &region = op.regions.back();
  int nargs = is_main ? 1 + (int)b.rng().below(3) : (int)b.rng().below(4);
  for (int i = 0; i < nargs; ++i)
    body.args.push_back(b.new_value(sample_func_arg_type(b.rng())));
  {
    OpBuilder::ScopedRegion scope(b, &body, &region, /*isolated=*/true);
    b.fill_block();
    int want = (int)b.rng().below(b.config().max_return_values + 1);
    OperationNode ret = b.make_op("func.return");
    for (int i = 0; i < want; ++i)
      if (auto v = b.sample_value_if(
              [](const ValueRef &v) { return v.type.is_integer(); }))
        ret.operands.push_back(*v);
    b.insert_terminator(std::move(ret));
  }
  FuncSig sig;
  sig.name = name;
  for (const ValueRef &a : body.args) sig.arg_types.push_back(a.type);
  sig.result_types = region.declared_result_types;
  sig.index = b.current_block().ops.size();
  b.attach_function(std::move(op));
  b.add_function(std::move(sig));
}

//===----------------------------------------------------------------------===//
// mem
//===----------------------------------------------------------------------===//

inline void verify_mem_alloc(const OperationNode &op, const VerifyCtx &,
                             const std::string &path,
                             std::vector<Violation> &out) {
  vfy::arity(op, 0, 1, path, out);
  if (op.results.size() == 1 &&
      (!op.results[0].type.is_memref() || op.results[0].type.memref_size < 1))
    out.push_back({ViolationKind::TypeMismatch, path,
                   "mem.alloc produces a memref with positive size"});
}

inline void verify_mem_load(const OperationNode &op, const VerifyCtx &,
                            const std::string &path,
                            std::vector<Violation> &out) {
  vfy::arity(op, 2, 1, path, out);
  if (op.operands.size() == 2 && !op.operands[0].type.is_memref())
    out.push_back({ViolationKind::TypeMismatch, path,
                   "mem.load operand 0 must be a memref"});
  vfy::operand_type(op, 1, TypeDesc::index(), path, out);
  if (op.results.size() == 1 && !(op.results[0].type == TypeDesc::i32()))
    out.push_back({ViolationKind::TypeMismatch, path, "mem.load produces i32"});
}

inline void verify_mem_store(const OperationNode &op, const VerifyCtx &,
                             const std::string &path,
                             std::vector<Violation> &out) {
  vfy::arity(op, 3, 0, path, out);
  vfy::operand_type(op, 0, TypeDesc::i32(), path, out);
  if (op.operands.size() == 3 && !op.operands[1].type.is_memref())
    out.push_back({ViolationKind::TypeMismatch, path,
                   "mem.store operand 1 must be a memref"});
  vfy::operand_type(op, 2, TypeDesc::index(), path, out);
}

inline void verify_mem_dealloc(const OperationNode &op, const VerifyCtx &,
                               const std::string &path,
                               std::vector<Violation> &out) {
  vfy::arity(op, 1, 0, path, out);
  if (op.operands.size() == 1 && !op.operands[0].type.is_memref())
    out.push_back({ViolationKind::TypeMismatch, path,
                   "mem.dealloc operand must be a memref"});
}

inline GenStatus gen_mem_alloc(OpBuilder &b) {
  int64_t size = 1 + (int64_t)b.rng().below(8);
  OperationNode op = b.make_op("mem.alloc");
  op.results.push_back(b.new_value(TypeDesc::memref(size)));
  return b.create_checked(std::move(op));
}

/// Picks an access index for a buffer of `size` elements: in bounds under
/// safe mode, possibly past the end otherwise.
inline int64_t sample_access_index(OpBuilder &b, int64_t size) {
  if (b.config().allow_unsafe_memory) return (int64_t)b.rng().below(size + 2);
  return (int64_t)b.rng().below(size);
}

inline std::optional<ValueRef> sample_live_memref(OpBuilder &b) {
  bool safe = !b.config().allow_unsafe_memory;
  return b.sample_value_if([&](const ValueRef &v) {
    return v.type.is_memref() && (!safe || !b.is_deallocated(v.id));
  });
}

inline GenStatus gen_mem_load(OpBuilder &b) {
  if (b.budget_left() < 2 || b.block_room() < 2) return GenStatus::NotApplicable;
  auto m = sample_live_memref(b);
  if (!m) return GenStatus::NotApplicable;
  ValueRef idx = insert_index_constant(b, sample_access_index(b, m->type.memref_size));
  OperationNode op = b.make_op("mem.load");
  op.operands = {*m, idx};
  op.results.push_back(b.new_value(TypeDesc::i32()));
  return b.create_checked(std::move(op));
}

inline GenStatus gen_mem_store(OpBuilder &b) {
  if (b.budget_left() < 2 || b.block_room() < 2) return GenStatus::NotApplicable;
  auto value = b.sample_value(TypeDesc::i32());
  if (!value) return GenStatus::NotApplicable;
  auto m = sample_live_memref(b);
  if (!m) return GenStatus::NotApplicable;
  ValueRef idx = insert_index_constant(b, sample_access_index(b, m->type.memref_size));
  OperationNode op = b.make_op("mem.store");
  op.operands = {*value, *m, idx};
  return b.create_checked(std::move(op));
}

/// Safe mode only deallocates buffers allocated in the same block (each
/// execution of the block then frees exactly the buffer it allocated) and
/// never the same value twice. Unsafe mode deallocates anything visible,
/// which is what produces the double-free and use-after-free specimens.
inline GenStatus gen_mem_dealloc(OpBuilder &b) {
  bool safe = !b.config().allow_unsafe_memory;
  std::optional<ValueRef> m;
  if (safe) {
    auto candidates = b.current_block_values_if([&](const ValueRef &v) {
      return v.type.is_memref() && !b.is_deallocated(v.id);
    });
    m = b.pick_uniform(candidates);
  } else {
    m = b.sample_value_if([](const ValueRef &v) { return v.type.is_memref(); });
  }
  if (!m) return GenStatus::NotApplicable;
  OperationNode op = b.make_op("mem.dealloc");
  op.operands.push_back(*m);
  GenStatus st = b.create_checked(std::move(op));
  if (st == GenStatus::Inserted && safe) b.mark_deallocated(m->id);
  return st;
}

//===----------------------------------------------------------------------===//
// Registry
//===----------------------------------------------------------------------===//

inline Registry build_default_registry() {
  Registry r;
  auto arith = [&](const char *name, GenStatus (*gen)(OpBuilder &),
                   void (*verify)(const OperationNode &, const VerifyCtx &,
                                  const std::string &, std::vector<Violation> &),
                   OpCode code) {
    r.add({.dialect = "arith", .name = name, .code = code, .traits = 0,
           .num_regions = 0, .region_terminators = {}, .pool_eligible = true,
           .verify = verify, .generate = gen});
  };
  arith("constant", gen_arith_constant, verify_arith_constant, OpCode::Constant);
  arith("addi", gen_arith_addi, verify_arith_binary, OpCode::AddI);
  arith("subi", gen_arith_subi, verify_arith_binary, OpCode::SubI);
  arith("muli", gen_arith_muli, verify_arith_binary, OpCode::MulI);
  arith("andi", gen_arith_andi, verify_arith_binary, OpCode::AndI);
  arith("ori", gen_arith_ori, verify_arith_binary, OpCode::OrI);
  arith("xori", gen_arith_xori, verify_arith_binary, OpCode::XorI);
  arith("divsi", gen_arith_divsi, verify_arith_binary, OpCode::DivSI);
  arith("cmpi", gen_arith_cmpi, verify_arith_cmpi, OpCode::CmpI);
  arith("select", gen_arith_select, verify_arith_select, OpCode::Select);

  r.add({.dialect = "scf", .name = "if", .code = OpCode::If, .traits = 0,
         .num_regions = 2, .region_terminators = {"scf.yield", "scf.yield"},
         .pool_eligible = true, .verify = verify_scf_if, .generate = gen_scf_if});
  r.add({.dialect = "scf", .name = "for", .code = OpCode::For,
         .traits = kAlwaysTerminates, .num_regions = 1,
         .region_terminators = {"scf.yield"}, .pool_eligible = true,
         .verify = verify_scf_for, .generate = gen_scf_for});
  r.add({.dialect = "scf", .name = "while", .code = OpCode::While, .traits = 0,
         .num_regions = 2, .region_terminators = {"scf.condition", "scf.yield"},
         .pool_eligible = true, .verify = verify_scf_while,
         .generate = gen_scf_while});
  r.add({.dialect = "scf", .name = "yield", .code = OpCode::Yield,
         .traits = kIsTerminator, .num_regions = 0, .region_terminators = {},
         .pool_eligible = false, .verify = verify_scf_yield, .generate = nullptr});
  r.add({.dialect = "scf", .name = "condition", .code = OpCode::Condition,
         .traits = kIsTerminator, .num_regions = 0, .region_terminators = {},
         .pool_eligible = false, .verify = verify_scf_condition,
         .generate = nullptr});

  r.add({.dialect = "func", .name = "func", .code = OpCode::Func,
         .traits = kIsolatedFromAbove, .num_regions = 1,
         .region_terminators = {"func.return"}, .pool_eligible = false,
         .verify = verify_func_func, .generate = nullptr});
  r.add({.dialect = "func", .name = "return", .code = OpCode::Return,
         .traits = kIsTerminator, .num_regions = 0, .region_terminators = {},
         .pool_eligible = false, .verify = verify_func_return,
         .generate = nullptr});
  r.add({.dialect = "func", .name = "call", .code = OpCode::Call, .traits = 0,
         .num_regions = 0, .region_terminators = {}, .pool_eligible = true,
         .verify = verify_func_call, .generate = gen_func_call});

  auto mem = [&](const char *name, GenStatus (*gen)(OpBuilder &),
                 void (*verify)(const OperationNode &, const VerifyCtx &,
                                const std::string &, std::vector<Violation> &),
                 OpCode code) {
    r.add({.dialect = "mem", .name = name, .code = code,
           .traits = kHasSideEffects, .num_regions = 0,
           .region_terminators = {}, .pool_eligible = true, .verify = verify,
           .generate = gen});
  };
  mem("alloc", gen_mem_alloc, verify_mem_alloc, OpCode::Alloc);
  mem("load", gen_mem_load, verify_mem_load, OpCode::Load);
  mem("store", gen_mem_store, verify_mem_store, OpCode::Store);
  mem("dealloc", gen_mem_dealloc, verify_mem_dealloc, OpCode::Dealloc);
  return r;
}

inline const Registry &default_registry() {
  static const Registry registry = build_default_registry();
  return registry;
}

}  // namespace rir
