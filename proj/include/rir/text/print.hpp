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

#include "rir/core/ir.hpp"

namespace rir {

inline std::string to_string(const AttributeVal &attr) {
  if (const auto *i = std::get_if<IntAttr>(&attr))
    return std::to_string(i->value) + " : " + to_string(i->type);
  if (const auto *b = std::get_if<BoolAttr>(&attr))
    return b->value ? "true" : "false";
  if (const auto *p = std::get_if<CmpPredicate>(&attr)) return to_string(*p);
  return "@" + std::get<SymbolAttr>(attr).name;
}

namespace detail {

/// Canonical printer. Value ids are renumbered densely in order of first
/// textual definition, so structurally equal modules print byte-identically
/// regardless of their internal id history.
class ModulePrinter {
 public:
  std::string print(const ModuleRoot &module) {
    const BlockNode &top = module.body.blocks.front();
    for (const OperationNode &op : top.ops) print_op(op, 0);
    return std::move(out_);
  }

 private:
  std::string out_;
  std::unordered_map<uint32_t, uint32_t> id_map_;
  uint32_t next_id_ = 0;

  std::string name(const ValueRef &v) {
    auto [it, fresh] = id_map_.emplace(v.id, next_id_);
    if (fresh) ++next_id_;
    return "%" + std::to_string(it->second);
  }

  void indent(int depth) { out_.append((size_t)depth * 2, ' '); }

  void print_op(const OperationNode &op, int depth) {
    indent(depth);
    for (size_t i = 0; i < op.results.size(); ++i) {
      if (i) out_ += ", ";
      out_ += name(op.results[i]);
    }
    if (!op.results.empty()) out_ += " = ";
    out_ += '"';
    out_ += op.full_name();
    out_ += "\"(";
    for (size_t i = 0; i < op.operands.size(); ++i) {
      if (i) out_ += ", ";
      out_ += name(op.operands[i]);
    }
    out_ += ')';
    if (!op.attributes.empty()) {
      out_ += " {";
      bool first = true;
      for (const auto &[key, value] : op.attributes) {
        if (!first) out_ += ", ";
        first = false;
        out_ += key + " = " + to_string(value);
      }
      out_ += '}';
    }
    out_ += " : (";
    for (size_t i = 0; i < op.operands.size(); ++i) {
      if (i) out_ += ", ";
      out_ += to_string(op.operands[i].type);
    }
    out_ += ") -> (";
    for (size_t i = 0; i < op.results.size(); ++i) {
      if (i) out_ += ", ";
      out_ += to_string(op.results[i].type);
    }
    out_ += ')';
    if (op.regions.empty()) {
      out_ += '\n';
      return;
    }
    for (size_t r = 0; r < op.regions.size(); ++r) {
      out_ += " {\n";
      print_block(op.regions[r].blocks.front(), depth + 1);
      indent(depth);
      out_ += '}';
    }
    out_ += '\n';
  }

  void print_block(const BlockNode &block, int depth) {
    if (!block.args.empty()) {
      indent(depth);
      out_ += "^(";
      for (size_t i = 0; i < block.args.size(); ++i) {
        if (i) out_ += ", ";
        out_ += name(block.args[i]) + ": " + to_string(block.args[i].type);
      }
      out_ += "):\n";
    }
    for (const OperationNode &op : block.ops) print_op(op, depth);
  }
};

}  // namespace detail

/// Deterministic canonical text: one op per line, two-space indentation per
/// region depth, LF line endings, trailing newline. The grammar lives in
/// docs/format.md.
inline std::string print_module(const ModuleRoot &module) {
  return detail::ModulePrinter().print(module);
}

}  // namespace rir
