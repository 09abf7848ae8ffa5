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

#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace rir;
using namespace rir::test;

namespace {

// main(x) { y = xori(x, x); return y } — the canonical B2 victim.
ModuleRoot xor_self_module() {
  ValueRef arg{0, TypeDesc::i32()};
  ValueRef y{1, TypeDesc::i32()};
  return single_func_module({arg}, {make_op("arith.xori", {arg, arg}, {y})},
                            {y});
}

// main(x) { while(true){} ; return x }
ModuleRoot infinite_while_module() {
  ValueRef arg{0, TypeDesc::i32()};
  ValueRef t{1, TypeDesc::i1()};
  OperationNode wh = make_op("scf.while");
  RegionNode &before = wh.regions.emplace_back();
  BlockNode &bb = before.blocks.emplace_back();
  bb.id = 2;
  bb.ops.push_back(make_bool_constant(t, true));
  bb.ops.push_back(make_op("scf.condition", {t}, {}));
  before.declared_result_types = {TypeDesc::i1()};
  RegionNode &after = wh.regions.emplace_back();
  after.blocks.emplace_back().id = 3;
  after.block().ops.push_back(make_op("scf.yield"));
  return single_func_module({arg}, {std::move(wh)}, {arg});
}

}  // namespace

TEST_CASE("input vectors start with zeros and derive deterministically",
          "[diff]") {
  ModuleRoot m = doubling_module();
  auto a = make_input_vectors(m, 99, 4);
  auto b = make_input_vectors(m, 99, 4);
  REQUIRE(a.size() == 4);
  CHECK(a == b);
  CHECK(a[0] == std::vector<int64_t>{0});
  CHECK(a[1] != a[2]);
  auto other = make_input_vectors(m, 100, 4);
  CHECK(a[1] != other[1]);
}

TEST_CASE("input vectors respect argument widths", "[diff]") {
  ValueRef flag{0, TypeDesc::i1()};
  ValueRef c{1, TypeDesc::i32()};
  ModuleRoot m = single_func_module({flag}, {make_int_constant(c, 1)}, {c});
  for (const auto &vec : make_input_vectors(m, 5, 20))
    CHECK((vec[0] == 0 || vec[0] == 1));
}

TEST_CASE("sound pipeline agrees with the original everywhere", "[diff]") {
  ModuleRoot m = doubling_module();
  auto verdicts =
      differential_check(m, {}, make_input_vectors(m, 1, 4));
  for (const VerdictInfo &v : verdicts) {
    CHECK(v.verdict == Verdict::Agree);
    CHECK(v.message.empty());
  }
}

TEST_CASE("B2 produces a value mismatch of 0 versus 1", "[diff]") {
  ModuleRoot m = xor_self_module();
  BugInjection b2;
  b2.b2_xor_self_misfold = true;
  // Use a nonzero input so xori(x, x) is a genuinely runtime zero.
  auto verdicts = differential_check(m, b2, {{12345}});
  REQUIRE(verdicts.size() == 1);
  CHECK(verdicts[0].verdict == Verdict::ValueMismatch);
  CHECK(verdicts[0].message ==
        "value_mismatch: unoptimized=completed(0) optimized=completed(1)");
}

TEST_CASE("B1 on an infinite loop is a termination suspect", "[diff]") {
  ModuleRoot m = infinite_while_module();
  BugInjection b1;
  b1.b1_dce_drops_infinite_loops = true;
  auto verdicts = differential_check(m, b1, {{7}}, /*fuel=*/2000);
  REQUIRE(verdicts.size() == 1);
  CHECK(verdicts[0].verdict == Verdict::TerminationSuspect);
  CHECK(verdicts[0].message.find("termination_suspect:") == 0);
  CHECK(verdicts[0].message.find("fuel_exhausted") != std::string::npos);
}

TEST_CASE("without injection the same loop agrees (both exhaust)", "[diff]") {
  ModuleRoot m = infinite_while_module();
  auto verdicts = differential_check(m, {}, {{7}}, /*fuel=*/2000);
  REQUIRE(verdicts.size() == 1);
  CHECK(verdicts[0].verdict == Verdict::Agree);
}

TEST_CASE("escalation clears a merely-slow unoptimized side", "[diff]") {
  // A pure bounded loop of 600 iterations: the original exhausts a fuel of
  // 500, the optimized module drops the loop entirely. The 10x retry lets
  // the original finish, so the verdict must be agreement.
  ValueRef arg{0, TypeDesc::i32()};
  ValueRef lb{1, TypeDesc::index()}, ub{2, TypeDesc::index()},
      step{3, TypeDesc::index()};
  ValueRef iv{4, TypeDesc::index()};
  OperationNode loop = make_op("scf.for", {lb, ub, step}, {});
  RegionNode &body = loop.regions.emplace_back();
  BlockNode &body_b = body.blocks.emplace_back();
  body_b.id = 9;
  body_b.args = {iv};
  body_b.ops.push_back(make_op("scf.yield"));
  ModuleRoot m = single_func_module(
      {arg},
      {make_int_constant(lb, 0), make_int_constant(ub, 600),
       make_int_constant(step, 1), std::move(loop)},
      {arg});
  REQUIRE(verify_module(m, default_registry()).empty());

  RunOutcome starved = interpret(m, {3}, 500);
  REQUIRE(starved.kind == RunOutcome::Kind::FuelExhausted);

  auto verdicts = differential_check(m, {}, {{3}}, /*fuel=*/500);
  REQUIRE(verdicts.size() == 1);
  CHECK(verdicts[0].verdict == Verdict::Agree);
}

TEST_CASE("optimizing away a trap is a trap mismatch", "[diff]") {
  // main(x) { y = xori(x, x); return x / y } traps by zero; under B2 the
  // divisor folds to 1 and the program completes.
  ValueRef arg{0, TypeDesc::i32()};
  ValueRef y{1, TypeDesc::i32()};
  ValueRef q{2, TypeDesc::i32()};
  ModuleRoot m = single_func_module(
      {arg},
      {make_op("arith.xori", {arg, arg}, {y}),
       make_op("arith.divsi", {arg, y}, {q})},
      {q});
  BugInjection b2;
  b2.b2_xor_self_misfold = true;
  auto verdicts = differential_check(m, b2, {{9}});
  REQUIRE(verdicts.size() == 1);
  CHECK(verdicts[0].verdict == Verdict::TrapMismatch);
  CHECK(verdicts[0].message.find("div_by_zero") != std::string::npos);
}

TEST_CASE("safe generated corpus yields only agreement", "[diff]") {
  for (uint64_t seed = 0; seed < 60; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    ModuleRoot m = generate_module(cfg);
    auto verdicts =
        differential_check(m, {}, make_input_vectors(m, seed, 4), 20000);
    for (const VerdictInfo &v : verdicts) {
      if (v.verdict != Verdict::Agree) {
        CAPTURE(seed, v.message);
        FAIL("sound pipeline disagreed with the interpreter");
      }
    }
  }
}
