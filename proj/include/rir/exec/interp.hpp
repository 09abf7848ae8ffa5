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
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "rir/core/ir.hpp"
#include "rir/core/registry.hpp"
#include "rir/dialects/dialects.hpp"
#include "rir/exec/semantics.hpp"

namespace rir {

enum class TrapKind : uint8_t { div_by_zero, oob, use_after_free, double_free };

inline const char *to_string(TrapKind k) {
  switch (k) {
    case TrapKind::div_by_zero: return "div_by_zero";
    case TrapKind::oob: return "oob";
    case TrapKind::use_after_free: return "use_after_free";
    case TrapKind::double_free: return "double_free";
  }
  return "?";
}

/// One runtime value; memrefs are represented by their buffer handle.
struct RunValue {
  TypeDesc type;
  int64_t value = 0;
  friend bool operator==(const RunValue &, const RunValue &) = default;
};

/// Result of one interpretation: normal completion with the entry
/// function's results, a trap, or fuel exhaustion (the stand-in for a
/// wall-clock time limit). Deterministic in (module, args, fuel), including
/// the bytes of the trap message.
struct RunOutcome {
  enum class Kind : uint8_t { Completed, Trap, FuelExhausted };
  Kind kind = Kind::Completed;
  std::vector<RunValue> values;         // Completed
  TrapKind trap = TrapKind::div_by_zero;  // Trap
  std::string message;                  // Trap, verbatim grouping input
  uint64_t ops_executed = 0;

  bool completed() const { return kind == Kind::Completed; }

  /// Frozen one-line form used by verdict messages and the CLI.
  std::string summary() const {
    switch (kind) {
      case Kind::Completed: {
        std::string s = "completed(";
        for (size_t i = 0; i < values.size(); ++i)
          s += (i ? ", " : "") + std::to_string(values[i].value);
        return s + ")";
      }
      case Kind::Trap: return message;
      case Kind::FuelExhausted:
        return "fuel_exhausted(" + std::to_string(ops_executed) + ")";
    }
    return "?";
  }
};

namespace detail {

class Interpreter {
 public:
  Interpreter(const ModuleRoot &module, const Registry &registry,
              uint64_t fuel)
      : registry_(&registry), fuel_(fuel) {
    const BlockNode &top = module.body.blocks.front();
    for (size_t i = 0; i < top.ops.size(); ++i)
      funcs_.emplace(top_level_path_segment(top.ops[i], i), &top.ops[i]);
    // One registry lookup per op node up front; execution then never
    // touches name strings.
    walk(module, [&](const OperationNode &op) {
      const OpKindSpec *spec = registry_->lookup(op.full_name());
      if (!spec)
        throw std::runtime_error("interpret: unknown op " + op.full_name());
      specs_.emplace(&op, spec);
    });
  }

  RunOutcome run(const std::string &entry, const std::vector<int64_t> &args) {
    const OperationNode *func = find_function(entry);
    const BlockNode &body = func->regions[0].block();
    if (args.size() != body.args.size())
      throw std::invalid_argument("interpret: entry takes " +
                                  std::to_string(body.args.size()) +
                                  " arguments, got " +
                                  std::to_string(args.size()));
    RunOutcome out;
    try {
      std::vector<int64_t> results = call(entry, args, 0);
      out.kind = RunOutcome::Kind::Completed;
      const auto &result_types = func->regions[0].declared_result_types;
      for (size_t i = 0; i < results.size(); ++i)
        out.values.push_back({result_types[i], results[i]});
    } catch (const TrapSignal &trap) {
      out.kind = RunOutcome::Kind::Trap;
      out.trap = trap.kind;
      out.message = trap.message;
    } catch (const FuelSignal &) {
      out.kind = RunOutcome::Kind::FuelExhausted;
    }
    out.ops_executed = executed_;
    return out;
  }

 private:
  struct TrapSignal {
    TrapKind kind;
    std::string message;
  };
  struct FuelSignal {};
  struct Buffer {
    std::vector<int32_t> data;
    bool freed = false;
  };
  using Env = std::unordered_map<uint32_t, int64_t>;

  const Registry *registry_;
  uint64_t fuel_;
  uint64_t executed_ = 0;
  std::unordered_map<std::string, const OperationNode *> funcs_;
  std::unordered_map<const OperationNode *, const OpKindSpec *> specs_;
  std::vector<Buffer> heap_;

  // Trap paths are materialized only when a trap fires. Each block being
  // executed holds one frame: the region index within its parent op (-1
  // for a function body) and the index of the op currently running.
  struct PathFrame {
    int region;
    size_t op;
  };
  std::vector<PathFrame> path_;
  // (function name, depth of path_ at entry) per active call.
  std::vector<std::pair<const std::string *, size_t>> call_stack_;

  std::string current_path() const {
    const auto &[func, base] = call_stack_.back();
    std::string out = *func + "/body";
    for (size_t i = base; i < path_.size(); ++i) {
      if (path_[i].region >= 0)
        out += "/region[" + std::to_string(path_[i].region) + "]";
      out += "/op[" + std::to_string(path_[i].op) + "]";
    }
    return out;
  }

  const OperationNode *find_function(const std::string &name) const {
    auto it = funcs_.find(name);
    if (it == funcs_.end())
      throw std::invalid_argument("interpret: no function '" + name + "'");
    return it->second;
  }

  [[noreturn]] void trap(TrapKind kind, const std::string &detail) const {
    throw TrapSignal{kind, std::string(to_string(kind)) + " at " +
                               current_path() + ": " + detail};
  }

  void charge() {
    if (fuel_ == 0) throw FuelSignal{};
    --fuel_;
    ++executed_;
  }

  std::vector<int64_t> call(const std::string &name,
                            const std::vector<int64_t> &args, int depth) {
    // Generated call graphs are acyclic, so this cap only guards
    // hand-written input from blowing the host stack.
    if (depth > 256)
      throw std::runtime_error("interpret: call depth limit exceeded");
    auto named = funcs_.find(name);
    if (named == funcs_.end())
      throw std::invalid_argument("interpret: no function '" + name + "'");
    const OperationNode *func = named->second;
    const BlockNode &body = func->regions[0].block();
    Env env;
    for (size_t i = 0; i < body.args.size(); ++i)
      env[body.args[i].id] = wrap_to_width(args[i], body.args[i].type);
    call_stack_.emplace_back(&named->first, path_.size());
    std::vector<int64_t> results = exec_block(body, env, -1, depth);
    call_stack_.pop_back();
    return results;
  }

  int64_t get(const Env &env, const ValueRef &v) const {
    auto it = env.find(v.id);
    if (it == env.end())
      throw std::runtime_error("interpret: %" + std::to_string(v.id) +
                               " has no binding (run the verifier first)");
    return it->second;
  }

  /// Executes a block and returns the terminator's operand values.
  std::vector<int64_t> exec_block(const BlockNode &block, Env &env,
                                  int region_index, int depth) {
    path_.push_back({region_index, 0});
    std::vector<int64_t> terminator_values = run_ops(block, env, depth);
    path_.pop_back();
    return terminator_values;
  }

  std::vector<int64_t> run_ops(const BlockNode &block, Env &env, int depth) {
    for (size_t i = 0; i < block.ops.size(); ++i) {
      const OperationNode &op = block.ops[i];
      path_.back().op = i;
      charge();
      const OpKindSpec *spec = specs_.at(&op);
      switch (spec->code) {
        case OpCode::Yield:
        case OpCode::Condition:
        case OpCode::Return: {
          std::vector<int64_t> vals;
          for (const ValueRef &v : op.operands) vals.push_back(get(env, v));
          return vals;
        }
        case OpCode::Constant: {
          const AttributeVal &attr = op.attributes.at("value");
          int64_t v = std::holds_alternative<BoolAttr>(attr)
                          ? (std::get<BoolAttr>(attr).value ? 1 : 0)
                          : std::get<IntAttr>(attr).value;
          env[op.results[0].id] = wrap_to_width(v, op.results[0].type);
          break;
        }
        case OpCode::AddI:
        case OpCode::SubI:
        case OpCode::MulI:
        case OpCode::AndI:
        case OpCode::OrI:
        case OpCode::XorI:
        case OpCode::DivSI:
          exec_binary(op, spec->code, env);
          break;
        case OpCode::CmpI: {
          bool r = eval_cmp(std::get<CmpPredicate>(op.attributes.at("predicate")),
                            get(env, op.operands[0]), get(env, op.operands[1]),
                            op.operands[0].type);
          env[op.results[0].id] = r ? 1 : 0;
          break;
        }
        case OpCode::Select: {
          int64_t c = get(env, op.operands[0]) & 1;
          env[op.results[0].id] =
              c ? get(env, op.operands[1]) : get(env, op.operands[2]);
          break;
        }
        case OpCode::If: {
          int64_t c = get(env, op.operands[0]) & 1;
          int region = c ? 0 : 1;
          std::vector<int64_t> vals =
              exec_block(op.regions[region].block(), env, region, depth);
          for (size_t r = 0; r < op.results.size(); ++r)
            env[op.results[r].id] = vals[r];
          break;
        }
        case OpCode::For: {
          int64_t lb = get(env, op.operands[0]);
          int64_t ub = get(env, op.operands[1]);
          int64_t step = get(env, op.operands[2]);
          const BlockNode &loop = op.regions[0].block();
          // Generated steps are >= 1; a hand-written zero or negative step
          // just burns fuel like any other non-terminating loop.
          for (int64_t iv = lb; iv < ub;
               iv = (int64_t)((uint64_t)iv + (uint64_t)step)) {
            env[loop.args[0].id] = iv;
            exec_block(loop, env, 0, depth);
          }
          break;
        }
        case OpCode::While: {
          const BlockNode &before = op.regions[0].block();
          const BlockNode &after = op.regions[1].block();
          while (true) {
            std::vector<int64_t> c = exec_block(before, env, 0, depth);
            if (!(c[0] & 1)) break;
            exec_block(after, env, 1, depth);
          }
          break;
        }
        case OpCode::Call: {
          const std::string &callee =
              std::get<SymbolAttr>(op.attributes.at("callee")).name;
          std::vector<int64_t> args;
          for (const ValueRef &v : op.operands) args.push_back(get(env, v));
          std::vector<int64_t> results = call(callee, args, depth + 1);
          for (size_t r = 0; r < op.results.size(); ++r)
            env[op.results[r].id] = results[r];
          break;
        }
        case OpCode::Alloc: {
          heap_.push_back(
              {std::vector<int32_t>((size_t)op.results[0].type.memref_size, 0),
               false});
          env[op.results[0].id] = (int64_t)heap_.size() - 1;
          break;
        }
        case OpCode::Load: {
          Buffer &buf = buffer_at(op, 0, env);
          int64_t idx = get(env, op.operands[1]);
          check_access(buf, op.operands[0].type, idx,
                       get(env, op.operands[0]));
          env[op.results[0].id] = (int64_t)buf.data[(size_t)idx];
          break;
        }
        case OpCode::Store: {
          Buffer &buf = buffer_at(op, 1, env);
          int64_t idx = get(env, op.operands[2]);
          check_access(buf, op.operands[1].type, idx,
                       get(env, op.operands[1]));
          buf.data[(size_t)idx] = (int32_t)get(env, op.operands[0]);
          break;
        }
        case OpCode::Dealloc: {
          Buffer &buf = buffer_at(op, 0, env);
          int64_t handle = get(env, op.operands[0]);
          if (buf.freed)
            trap(TrapKind::double_free,
                 "buffer " + std::to_string(handle) + " deallocated twice");
          buf.freed = true;
          break;
        }
        case OpCode::Func:
          throw std::runtime_error("interpret: nested func.func");
      }
    }
    return {};
  }

  Buffer &buffer_at(const OperationNode &op, size_t operand_index, Env &env) {
    int64_t handle = get(env, op.operands[operand_index]);
    if (handle < 0 || (size_t)handle >= heap_.size())
      throw std::runtime_error("interpret: bad buffer handle");
    return heap_[(size_t)handle];
  }

  void check_access(const Buffer &buf, const TypeDesc &type, int64_t idx,
                    int64_t handle) const {
    if (buf.freed)
      trap(TrapKind::use_after_free,
           "buffer " + std::to_string(handle) + " used after dealloc (index " +
               std::to_string(idx) + ")");
    if (idx < 0 || idx >= (int64_t)buf.data.size())
      trap(TrapKind::oob, "index " + std::to_string(idx) +
                              " out of bounds for " + to_string(type));
  }

  void exec_binary(const OperationNode &op, OpCode code, Env &env) {
    const TypeDesc &t = op.results[0].type;
    int64_t a = get(env, op.operands[0]);
    int64_t b = get(env, op.operands[1]);
    std::optional<int64_t> r = eval_int_binary(code, a, b, t);
    if (!r)
      trap(TrapKind::div_by_zero, std::to_string(signed_of(a, t)) + " / 0");
    env[op.results[0].id] = *r;
  }
};

}  // namespace detail

/// Big-step reference evaluation of `entry` with the given argument values.
/// Every executed op costs one unit of fuel (terminators included); buffers
/// are zero-initialized at alloc, integer overflow wraps, and the four
/// memory/division hazards trap with a stable, path-carrying message.
inline RunOutcome interpret(const ModuleRoot &module,
                            const std::vector<int64_t> &args,
                            uint64_t fuel = 100000,
                            const std::string &entry = "main",
                            const Registry &registry = default_registry()) {
  return detail::Interpreter(module, registry, fuel).run(entry, args);
}

}  // namespace rir
