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

#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rir/core/ir.hpp"
#include "rir/core/registry.hpp"
#include "rir/gen/config.hpp"
#include "rir/gen/rng.hpp"

namespace rir {

/// Observer for the generation loop. `op_chosen` fires when the selection
/// pool picks an op generator; `op_inserted` fires when that generator
/// succeeds, with the freshly attached op. Events from regions that later
/// roll back are still reported (they were real attempts).
struct GenEventSink {
  virtual ~GenEventSink() = default;
  virtual void op_chosen(const std::string & /*full_name*/) {}
  virtual void op_inserted(const OperationNode & /*op*/) {}
};

/// Builds a module one op at a time. The insertion point is always the end
/// of the innermost open block and only ever moves forward/downward; region
/// generators open nested scopes and close them again, so a position is
/// never revisited.
class OpBuilder {
 public:
  OpBuilder(GenConfig config, const Registry &registry,
            GenEventSink *events = nullptr)
      : config_(std::move(config)),
        registry_(&registry),
        rng_(config_.seed),
        events_(events) {
    config_.validate();
  }

  const GenConfig &config() const { return config_; }
  const Registry &registry() const { return *registry_; }
  SplitMix64 &rng() { return rng_; }
  GenEventSink *events() { return events_; }

  //===--------------------------------------------------------------------===//
  // Scopes and insertion point
  //===--------------------------------------------------------------------===//

  /// Opens `block` (owned by `region`, or by the module root when region is
  /// null) as the current insertion scope. `isolated` blocks visibility of
  /// enclosing scopes, mirroring the owning op's IsolatedFromAbove trait.
  void push_scope(BlockNode *block, RegionNode *region, bool isolated) {
    frames_.push_back({block, region, isolated});
  }

  void pop_scope() { frames_.pop_back(); }

  /// Region nesting depth of the insertion point; the module block is 0 and
  /// a function body is 1.
  int region_depth() const { return (int)frames_.size() - 1; }

  BlockNode &current_block() { return *frames_.back().block; }
  const BlockNode &current_block() const { return *frames_.back().block; }

  /// RAII scope handle for region generators.
  struct ScopedRegion {
    OpBuilder *b;
    ScopedRegion(OpBuilder &builder, BlockNode *block, RegionNode *region,
                 bool isolated)
        : b(&builder) {
      b->push_scope(block, region, isolated);
    }
    ~ScopedRegion() { b->pop_scope(); }
  };

  //===--------------------------------------------------------------------===//
  // Budget
  //===--------------------------------------------------------------------===//

  struct Snapshot {
    int ops_created;
  };

  Snapshot snapshot() const { return {ops_created_}; }

  /// Rolls back the op budget to an earlier snapshot. Used when a region
  /// generator discards a partially built op; the RNG stream is never
  /// rewound, and value ids stay monotone.
  void restore(const Snapshot &s) { ops_created_ = s.ops_created; }

  int ops_created() const { return ops_created_; }
  int budget_left() const { return config_.max_total_ops - ops_created_; }
  int block_room() const {
    return config_.max_ops_per_block - (int)current_block().ops.size();
  }

  /// Charges the budget for an op that will be attached later with
  /// attach_reserved (region-bearing ops charge before filling their
  /// regions, so nested fills can never overrun the total budget).
  void reserve_op() { charge(); }

  //===--------------------------------------------------------------------===//
  // Values
  //===--------------------------------------------------------------------===//

  ValueRef new_value(TypeDesc type) { return {next_value_id_++, type}; }

  /// All values visible at the insertion point: everything defined above it
  /// in the current block plus block args, walking outward until an
  /// isolated-from-above boundary. Innermost scope first, definition order
  /// within each scope.
  template <typename Pred>
  std::vector<ValueRef> visible_values_if(Pred pred) const {
    std::vector<ValueRef> out;
    for (auto it = frames_.rbegin(); it != frames_.rend(); ++it) {
      for (const ValueRef &a : it->block->args)
        if (pred(a)) out.push_back(a);
      for (const OperationNode &op : it->block->ops)
        for (const ValueRef &r : op.results)
          if (pred(r)) out.push_back(r);
      if (it->isolated) break;
    }
    return out;
  }

  std::vector<ValueRef> visible_values(
      const std::optional<TypeDesc> &type_filter = std::nullopt) const {
    return visible_values_if([&](const ValueRef &v) {
      return !type_filter || v.type == *type_filter;
    });
  }

  /// Uniform pick over the visible values of `type`; none when there are no
  /// candidates. Consumes exactly one RNG draw when candidates exist.
  std::optional<ValueRef> sample_value(TypeDesc type) {
    return pick_uniform(visible_values(type));
  }

  template <typename Pred>
  std::optional<ValueRef> sample_value_if(Pred pred) {
    return pick_uniform(visible_values_if(pred));
  }

  /// Values defined by ops of the current block only (no args, no outer
  /// scopes). Safe-mode dealloc is restricted to these.
  template <typename Pred>
  std::vector<ValueRef> current_block_values_if(Pred pred) const {
    std::vector<ValueRef> out;
    for (const OperationNode &op : frames_.back().block->ops)
      for (const ValueRef &r : op.results)
        if (pred(r)) out.push_back(r);
    return out;
  }

  std::optional<ValueRef> pick_uniform(const std::vector<ValueRef> &vals) {
    if (vals.empty()) return std::nullopt;
    return vals[rng_.below(vals.size())];
  }

  //===--------------------------------------------------------------------===//
  // Generation-side safety bookkeeping
  //===--------------------------------------------------------------------===//

  void record_constant(uint32_t id, int64_t value) {
    constant_values_[id] = value;
  }
  std::optional<int64_t> constant_value(uint32_t id) const {
    auto it = constant_values_.find(id);
    if (it == constant_values_.end()) return std::nullopt;
    return it->second;
  }

  // Dealloc marks are conservative: a mark made inside a region that later
  // rolls back is kept, which only suppresses further deallocs.
  void mark_deallocated(uint32_t id) { deallocated_.insert(id); }
  bool is_deallocated(uint32_t id) const { return deallocated_.count(id); }

  //===--------------------------------------------------------------------===//
  // Functions
  //===--------------------------------------------------------------------===//

  const std::vector<FuncSig> &completed_functions() const { return funcs_; }

  void add_function(FuncSig sig) {
    funcs_map_.emplace(sig.name, sig);
    funcs_.push_back(std::move(sig));
  }

  //===--------------------------------------------------------------------===//
  // Checked insertion
  //===--------------------------------------------------------------------===//

  /// Makes a detached op of a registered kind with traits prefilled.
  OperationNode make_op(const std::string &full_name) {
    const OpKindSpec *spec = registry_->lookup(full_name);
    if (!spec)
      throw std::logic_error("make_op: unregistered op '" + full_name + "'");
    OperationNode op;
    op.dialect = spec->dialect;
    op.name = spec->name;
    op.traits = spec->traits;
    return op;
  }

  /// Runs the op's constraint check and, on success, attaches it at the
  /// insertion point (charging one op of budget). On failure nothing is
  /// attached and NotApplicable is returned; RNG draws made while building
  /// the attempt are not replayed. Unregistered ops are a programming error
  /// and throw.
  GenStatus create_checked(OperationNode op) { return attach(std::move(op), true); }

  /// Like create_checked for an op whose budget was already charged with
  /// reserve_op (region-bearing ops).
  GenStatus attach_reserved(OperationNode op) { return attach(std::move(op), false); }

  /// Attaches a terminator to the current block and retroactively fixes the
  /// owning region's declared result types from the terminator's operand
  /// types. Terminators are free of budget. A malformed terminator is a
  /// framework bug and throws.
  void insert_terminator(OperationNode op) {
    const OpKindSpec *spec = registry_->lookup(op.full_name());
    if (!spec || !(spec->traits & kIsTerminator))
      throw std::logic_error("insert_terminator: '" + op.full_name() +
                             "' is not a registered terminator");
    if (!check_operands(op))
      throw std::logic_error("insert_terminator: operand not visible");
    Frame &f = frames_.back();
    if (f.region) {
      f.region->declared_result_types.clear();
      for (const ValueRef &v : op.operands)
        f.region->declared_result_types.push_back(v.type);
    }
    f.block->ops.push_back(std::move(op));
  }

  /// Attaches a function definition to the module block (exempt from the op
  /// budget, like terminators).
  void attach_function(OperationNode op) {
    if (attach(std::move(op), false, false) != GenStatus::Inserted)
      throw std::logic_error("attach_function: constraint check failed");
  }

 private:
  struct Frame {
    BlockNode *block;
    RegionNode *region;  // null for the module top block
    bool isolated;
  };

  void charge() {
    if (ops_created_ >= config_.max_total_ops)
      throw std::logic_error("op budget overrun");
    ++ops_created_;
  }

  const ValueRef *find_visible_def(uint32_t id) const {
    for (auto it = frames_.rbegin(); it != frames_.rend(); ++it) {
      for (const ValueRef &a : it->block->args)
        if (a.id == id) return &a;
      for (const OperationNode &def : it->block->ops)
        for (const ValueRef &r : def.results)
          if (r.id == id) return &r;
      if (it->isolated) break;
    }
    return nullptr;
  }

  bool check_operands(const OperationNode &op) const {
    for (const ValueRef &v : op.operands) {
      const ValueRef *def = find_visible_def(v.id);
      if (!def || !(def->type == v.type)) return false;
    }
    return true;
  }

  GenStatus attach(OperationNode op, bool charge_budget, bool check_scope = true) {
    const OpKindSpec *spec = registry_->lookup(op.full_name());
    if (!spec)
      throw std::logic_error("create_checked: unregistered op '" +
                             op.full_name() + "'");
    if (spec->verify) {
      std::vector<Violation> violations;
      VerifyCtx ctx{&funcs_map_, funcs_.size()};
      spec->verify(op, ctx, "<detached>", violations);
      if (!violations.empty()) return GenStatus::NotApplicable;
    }
    if (check_scope && !check_operands(op)) return GenStatus::NotApplicable;
    if (charge_budget) charge();
    frames_.back().block->ops.push_back(std::move(op));
    return GenStatus::Inserted;
  }

 public:
  /// The selection-pool loop. Builds the pool from every pool-eligible op
  /// with positive weight, samples by weight, and calls the op's generator:
  /// an unsuccessful generator drops out of the pool until the next success
  /// resets it. Stops with probability p_stop after each insertion, or when
  /// the pool is exhausted or a budget cap is hit. Terminators never enter
  /// the pool; the caller inserts them. Returns the number of insertions.
  int fill_block() {
    struct Entry {
      const OpKindSpec *spec;
      double weight;
    };
    std::vector<Entry> full;
    for (const std::string &name : registry_->names()) {
      const OpKindSpec *spec = registry_->lookup(name);
      if (!spec->pool_eligible) continue;
      double w = config_.weight_for(name);
      if (w > 0.0) full.push_back({spec, w});
    }
    if (full.empty())
      throw std::invalid_argument("selection pool is empty: every op weight is zero");

    std::vector<Entry> pool = full;
    std::vector<double> weights;
    int inserted = 0;
    while (true) {
      if (ops_created_ >= config_.max_total_ops) break;
      if (block_room() <= 0) break;
      if (pool.empty()) break;
      weights.clear();
      for (const Entry &e : pool) weights.push_back(e.weight);
      size_t pick = rng_.choice_weighted(weights);
      if (events_) events_->op_chosen(pool[pick].spec->full_name());
      if (pool[pick].spec->generate(*this) == GenStatus::Inserted) {
        ++inserted;
        if (events_) events_->op_inserted(current_block().ops.back());
        pool = full;
        if (rng_.chance(config_.p_stop)) break;
      } else {
        pool.erase(pool.begin() + pick);
      }
    }
    return inserted;
  }

  uint32_t next_block_id() { return next_block_id_++; }

 private:
  GenConfig config_;
  const Registry *registry_;
  SplitMix64 rng_;
  GenEventSink *events_;
  std::vector<Frame> frames_;
  int ops_created_ = 0;
  uint32_t next_value_id_ = 0;
  uint32_t next_block_id_ = 0;
  std::unordered_map<uint32_t, int64_t> constant_values_;
  std::unordered_set<uint32_t> deallocated_;
  std::vector<FuncSig> funcs_;
  std::unordered_map<std::string, FuncSig> funcs_map_;
};

}  // namespace rir
