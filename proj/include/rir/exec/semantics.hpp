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
// Integer semantics shared by the interpreter and the constant folder, so
// the two can never disagree on an arithmetic result.

#pragma once

#include <cstdint>
#include <optional>

#include "rir/core/ir.hpp"
#include "rir/core/registry.hpp"
#include "rir/dialects/dialects.hpp"

namespace rir {

/// Signed reading of a stored value. Values are kept in canonical stored
/// form: i1 as 0/1, i32 sign-extended, i64/index as-is. A stored i1 of 1
/// reads as -1 in two's complement.
inline int64_t signed_of(int64_t stored, const TypeDesc &t) {
  if (t.kind == TypeKind::I1) return (stored & 1) ? -1 : 0;
  return stored;
}

/// Evaluates one integer binary op on stored operand values, returning the
/// stored result. All overflow wraps (including INT_MIN / -1, computed in
/// unsigned space). Division by zero is the one trap, reported as nullopt.
inline std::optional<int64_t> eval_int_binary(OpCode code, int64_t lhs_stored,
                                              int64_t rhs_stored,
                                              const TypeDesc &t) {
  int64_t a = signed_of(lhs_stored, t);
  int64_t b = signed_of(rhs_stored, t);
  int64_t r = 0;
  switch (code) {
    case OpCode::AddI: r = (int64_t)((uint64_t)a + (uint64_t)b); break;
    case OpCode::SubI: r = (int64_t)((uint64_t)a - (uint64_t)b); break;
    case OpCode::MulI: r = (int64_t)((uint64_t)a * (uint64_t)b); break;
    case OpCode::AndI: r = a & b; break;
    case OpCode::OrI: r = a | b; break;
    case OpCode::XorI: r = a ^ b; break;
    case OpCode::DivSI:
      if (b == 0) return std::nullopt;
      r = (b == -1) ? (int64_t)(0 - (uint64_t)a) : a / b;
      break;
    default: return std::nullopt;
  }
  return wrap_to_width(r, t);
}

inline bool eval_cmp(CmpPredicate pred, int64_t lhs_stored, int64_t rhs_stored,
                     const TypeDesc &operand_type) {
  int64_t a = signed_of(lhs_stored, operand_type);
  int64_t b = signed_of(rhs_stored, operand_type);
  switch (pred) {
    case CmpPredicate::eq: return a == b;
    case CmpPredicate::ne: return a != b;
    case CmpPredicate::slt: return a < b;
    case CmpPredicate::sle: return a <= b;
    case CmpPredicate::sgt: return a > b;
    case CmpPredicate::sge: return a >= b;
  }
  return false;
}

}  // namespace rir
