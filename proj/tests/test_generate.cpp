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
#include <unordered_set>

#include "test_support.hpp"

using namespace rir;
using namespace rir::test;

TEST_CASE("identical seed and config reproduce the module exactly",
          "[generate]") {
  GenConfig cfg = small_config(20240817);
  ModuleRoot a = generate_module(cfg);
  ModuleRoot b = generate_module(cfg);
  CHECK(structural_equal(a, b));
  CHECK(print_module(a) == print_module(b));
}

TEST_CASE("an observing event sink does not perturb generation",
          "[generate]") {
  struct Counter : GenEventSink {
    int n = 0;
    void op_chosen(const std::string &) override { ++n; }
  } counter;
  GenConfig cfg = small_config(8);
  ModuleRoot plain = generate_module(cfg);
  ModuleRoot observed = generate_module(cfg, default_registry(), &counter);
  CHECK(structural_equal(plain, observed));
  CHECK(counter.n > 0);
}

TEST_CASE("thousand-seed sweep is verifier clean", "[generate]") {
  for (uint64_t seed = 0; seed < 1000; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    ModuleRoot m = generate_module(cfg);
    auto violations = verify_module(m, default_registry());
    if (!violations.empty()) {
      CAPTURE(seed, violations[0].path, violations[0].message);
      FAIL("verifier violation on generated module");
    }
  }
}

TEST_CASE("total op budget holds module-wide", "[generate]") {
  SECTION("budget of one") {
    GenConfig cfg;
    cfg.seed = 77;
    cfg.max_total_ops = 1;
    ModuleRoot m = generate_module(cfg);
    int pool_ops = 0;
    walk(m, [&](const OperationNode &op) {
      const OpKindSpec *spec = default_registry().lookup(op.full_name());
      if (spec && spec->pool_eligible) ++pool_ops;
    });
    CHECK(pool_ops <= 1);
  }
  SECTION("default budget over many seeds") {
    for (uint64_t seed = 100; seed < 140; ++seed) {
      GenConfig cfg;
      cfg.seed = seed;
      cfg.max_total_ops = 37;
      ModuleRoot m = generate_module(cfg);
      int pool_ops = 0;
      walk(m, [&](const OperationNode &op) {
        const OpKindSpec *spec = default_registry().lookup(op.full_name());
        if (spec && spec->pool_eligible) ++pool_ops;
      });
      CHECK(pool_ops <= 37);
    }
  }
}

TEST_CASE("between one and max_functions functions, main last",
          "[generate]") {
  std::unordered_set<size_t> counts;
  for (uint64_t seed = 0; seed < 60; ++seed) {
    GenConfig cfg = small_config(seed);
    cfg.max_functions = 3;
    ModuleRoot m = generate_module(cfg);
    const BlockNode &top = m.body.block();
    REQUIRE(top.ops.size() >= 1);
    REQUIRE(top.ops.size() <= 3);
    counts.insert(top.ops.size());
    CHECK(top_level_path_segment(top.ops.back(), top.ops.size() - 1) ==
          "main");
  }
  CHECK(counts.size() == 3);  // all counts occur
}

// Independent scope-safety check, coded separately from the verifier: every
// operand must be defined in a previous op of the same block, in a block
// argument, or in a non-isolated enclosing block prefix.
namespace {
bool scope_safe_block(const BlockNode &block,
                      std::vector<std::unordered_set<uint32_t>> &stack,
                      std::vector<bool> &isolated, bool block_isolated,
                      const Registry &registry) {
  stack.emplace_back();
  isolated.push_back(block_isolated);
  for (const ValueRef &a : block.args) stack.back().insert(a.id);
  bool ok = true;
  for (const OperationNode &op : block.ops) {
    for (const ValueRef &v : op.operands) {
      bool found = false;
      for (size_t i = stack.size(); i-- > 0;) {
        if (stack[i].count(v.id)) {
          found = true;
          break;
        }
        if (isolated[i]) break;
      }
      ok = ok && found;
    }
    for (const RegionNode &region : op.regions)
      ok = ok && scope_safe_block(region.blocks.front(), stack, isolated,
                                  op.has_trait(kIsolatedFromAbove), registry);
    for (const ValueRef &r : op.results) stack.back().insert(r.id);
  }
  stack.pop_back();
  isolated.pop_back();
  return ok;
}
}  // namespace

TEST_CASE("every generated operand is in scope at its position",
          "[generate]") {
  for (uint64_t seed = 500; seed < 700; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    ModuleRoot m = generate_module(cfg);
    std::vector<std::unordered_set<uint32_t>> stack;
    std::vector<bool> isolated;
    bool ok = true;
    for (const OperationNode &func : m.body.block().ops)
      ok = ok && scope_safe_block(func.regions[0].blocks.front(), stack,
                                  isolated, true, default_registry());
    CHECK(ok);
  }
}

TEST_CASE("result ids are unique module-wide", "[generate]") {
  for (uint64_t seed = 40; seed < 60; ++seed) {
    GenConfig cfg = small_config(seed);
    ModuleRoot m = generate_module(cfg);
    std::unordered_set<uint32_t> ids;
    bool unique = true;
    walk(m, [&](const OperationNode &op) {
      for (const ValueRef &r : op.results) unique &= ids.insert(r.id).second;
    });
    CHECK(unique);
  }
}

TEST_CASE("zero-weight ops never appear", "[generate]") {
  GenConfig cfg = small_config(4242);
  cfg.op_weights["scf.while"] = 0.0;
  cfg.op_weights["mem.alloc"] = 0.0;
  for (uint64_t seed = 0; seed < 50; ++seed) {
    cfg.seed = seed;
    ModuleRoot m = generate_module(cfg);
    walk(m, [&](const OperationNode &op) {
      CHECK(op.full_name() != "scf.while");
      CHECK(op.full_name() != "mem.alloc");
    });
  }
}

TEST_CASE("safe-mode corpus never traps on any tested input", "[generate][safety]") {
  // Fuel exhaustion is fine (while loops may spin); traps are not.
  int runs = 0;
  for (uint64_t seed = 0; seed < 2000; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    ModuleRoot m = generate_module(cfg);
    for (const auto &args : make_input_vectors(m, seed, 4)) {
      RunOutcome out = interpret(m, args, 10000);
      ++runs;
      if (out.kind == RunOutcome::Kind::Trap) {
        CAPTURE(seed, out.message);
        FAIL("trap in safe mode");
      }
    }
  }
  CHECK(runs == 8000);
}

namespace {
// Structural scan for memory hazards: an access index constant at or past
// the buffer size, or two deallocs reaching the same value.
bool has_memory_hazard(const ModuleRoot &m) {
  std::unordered_map<uint32_t, int64_t> constants;
  std::unordered_map<uint32_t, int> dealloc_count;
  bool hazard = false;
  walk(m, [&](const OperationNode &op) {
    if (op.full_name() == "arith.constant") {
      const AttributeVal &attr = op.attributes.at("value");
      if (const auto *iv = std::get_if<IntAttr>(&attr))
        constants[op.results[0].id] = iv->value;
    } else if (op.full_name() == "mem.load" || op.full_name() == "mem.store") {
      size_t mem_at = op.full_name() == "mem.load" ? 0 : 1;
      auto idx = constants.find(op.operands[mem_at + 1].id);
      if (idx != constants.end() &&
          idx->second >= op.operands[mem_at].type.memref_size)
        hazard = true;
    } else if (op.full_name() == "mem.dealloc") {
      if (++dealloc_count[op.operands[0].id] > 1) hazard = true;
    }
  });
  return hazard;
}
}  // namespace

TEST_CASE("unsafe mode eventually emits memory hazards", "[generate][safety]") {
  GenConfig cfg;
  cfg.allow_unsafe_memory = true;
  int hazardous = 0;
  for (uint64_t seed = 0; seed < 1000; ++seed) {
    cfg.seed = seed;
    if (has_memory_hazard(generate_module(cfg))) ++hazardous;
  }
  CHECK(hazardous > 0);
}
