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

#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "rir/core/ir.hpp"
#include "rir/core/registry.hpp"

namespace rir {

struct ParseError {
  int line = 1;
  int column = 1;
  std::string expected;

  std::string to_string() const {
    return "parse error at line " + std::to_string(line) + ", column " +
           std::to_string(column) + ": expected " + expected;
  }
};

using ParseResult = std::variant<ModuleRoot, ParseError>;

namespace detail {

/// Recursive-descent parser for the canonical text format. Quoted op names
/// keep the grammar LL(1); whitespace (including newlines) only separates
/// tokens. Structural validity beyond syntax (dominance, signatures) is the
/// verifier's job — this builds the tree and resolves value names.
class ModuleParser {
 public:
  ModuleParser(const std::string &text, const Registry &registry)
      : text_(text), registry_(&registry) {}

  ParseResult run() {
    ModuleRoot module;
    module.body.block().id = next_block_id_++;
    skip_ws();
    while (!at_end()) {
      auto op = parse_op();
      if (!op) return *error_;
      module.body.block().ops.push_back(std::move(*op));
      skip_ws();
    }
    return module;
  }

 private:
  const std::string &text_;
  const Registry *registry_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  uint32_t next_value_id_ = 0;
  uint32_t next_block_id_ = 0;
  std::unordered_map<uint64_t, ValueRef> defs_;  // text id -> internal value
  std::optional<ParseError> error_;

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void advance() {
    if (at_end()) return;
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_ws() {
    while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\n' ||
                         peek() == '\r'))
      advance();
  }

  std::nullopt_t fail(std::string expected) {
    if (!error_) error_ = ParseError{line_, col_, std::move(expected)};
    return std::nullopt;
  }

  bool expect(char c) {
    if (peek() != c) {
      fail(std::string("'") + c + "'");
      return false;
    }
    advance();
    return true;
  }

  std::optional<uint64_t> parse_value_id() {
    if (!expect('%')) return fail("value id");
    if (!isdigit((unsigned char)peek())) return fail("value id digits");
    uint64_t n = 0;
    while (isdigit((unsigned char)peek())) {
      n = n * 10 + (uint64_t)(peek() - '0');
      advance();
    }
    return n;
  }

  std::optional<int64_t> parse_int() {
    bool neg = false;
    if (peek() == '-') {
      neg = true;
      advance();
    }
    if (!isdigit((unsigned char)peek())) return fail("integer");
    uint64_t n = 0;
    while (isdigit((unsigned char)peek())) {
      n = n * 10 + (uint64_t)(peek() - '0');
      advance();
    }
    return neg ? -(int64_t)n : (int64_t)n;
  }

  std::string parse_ident() {
    std::string s;
    while (isalnum((unsigned char)peek()) || peek() == '_') {
      s += peek();
      advance();
    }
    return s;
  }

  std::optional<TypeDesc> parse_type() {
    std::string id = parse_ident();
    if (id == "i1") return TypeDesc::i1();
    if (id == "i32") return TypeDesc::i32();
    if (id == "i64") return TypeDesc::i64();
    if (id == "index") return TypeDesc::index();
    if (id == "memref") {
      if (!expect('<')) return std::nullopt;
      auto n = parse_int();
      if (!n) return std::nullopt;
      std::string elem = parse_ident();
      if (elem != "xi32") return fail("'xi32'");
      if (!expect('>')) return std::nullopt;
      return TypeDesc::memref(*n);
    }
    return fail("type");
  }

  std::optional<std::vector<TypeDesc>> parse_type_list() {
    std::vector<TypeDesc> types;
    if (!expect('(')) return std::nullopt;
    skip_ws();
    if (peek() == ')') {
      advance();
      return types;
    }
    while (true) {
      auto t = parse_type();
      if (!t) return std::nullopt;
      types.push_back(*t);
      skip_ws();
      if (peek() == ',') {
        advance();
        skip_ws();
        continue;
      }
      if (!expect(')')) return std::nullopt;
      return types;
    }
  }

  std::optional<AttributeVal> parse_attr_value() {
    if (peek() == '@') {
      advance();
      std::string name = parse_ident();
      if (name.empty()) return fail("symbol name");
      return AttributeVal{SymbolAttr{std::move(name)}};
    }
    if (isalpha((unsigned char)peek())) {
      std::string word = parse_ident();
      if (word == "true") return AttributeVal{BoolAttr{true}};
      if (word == "false") return AttributeVal{BoolAttr{false}};
      for (int p = 0; p < 6; ++p)
        if (word == to_string((CmpPredicate)p))
          return AttributeVal{(CmpPredicate)p};
      return fail("attribute value");
    }
    auto v = parse_int();
    if (!v) return std::nullopt;
    skip_ws();
    if (!expect(':')) return std::nullopt;
    skip_ws();
    auto t = parse_type();
    if (!t) return std::nullopt;
    return AttributeVal{IntAttr{*v, *t}};
  }

  ValueRef define(uint64_t text_id, TypeDesc type, bool *fresh) {
    auto [it, inserted] = defs_.emplace(text_id, ValueRef{next_value_id_, type});
    *fresh = inserted;
    if (inserted) ++next_value_id_;
    return it->second;
  }

  std::optional<OperationNode> parse_op() {
    // Results.
    std::vector<uint64_t> result_ids;
    if (peek() == '%') {
      while (true) {
        auto id = parse_value_id();
        if (!id) return std::nullopt;
        result_ids.push_back(*id);
        skip_ws();
        if (peek() == ',') {
          advance();
          skip_ws();
          continue;
        }
        break;
      }
      if (!expect('=')) return std::nullopt;
      skip_ws();
    }

    // Quoted name.
    if (!expect('"')) return std::nullopt;
    std::string full;
    while (!at_end() && peek() != '"' && peek() != '\n') {
      full += peek();
      advance();
    }
    if (!expect('"')) return std::nullopt;
    size_t dot = full.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == full.size())
      return fail("op name of the form dialect.name");

    OperationNode op;
    op.dialect = full.substr(0, dot);
    op.name = full.substr(dot + 1);
    if (const OpKindSpec *spec = registry_->lookup(full)) op.traits = spec->traits;

    // Operand ids.
    if (!expect('(')) return std::nullopt;
    std::vector<uint64_t> operand_ids;
    skip_ws();
    if (peek() != ')') {
      while (true) {
        auto id = parse_value_id();
        if (!id) return std::nullopt;
        operand_ids.push_back(*id);
        skip_ws();
        if (peek() == ',') {
          advance();
          skip_ws();
          continue;
        }
        break;
      }
    }
    if (!expect(')')) return std::nullopt;
    skip_ws();

    // Attributes.
    if (peek() == '{') {
      advance();
      skip_ws();
      if (peek() == '}') {
        advance();
      } else {
        while (true) {
          std::string key = parse_ident();
          if (key.empty()) return fail("attribute name");
          skip_ws();
          if (!expect('=')) return std::nullopt;
          skip_ws();
          auto value = parse_attr_value();
          if (!value) return std::nullopt;
          op.attributes.emplace(std::move(key), std::move(*value));
          skip_ws();
          if (peek() == ',') {
            advance();
            skip_ws();
            continue;
          }
          if (!expect('}')) return std::nullopt;
          break;
        }
      }
      skip_ws();
    }

    // Type signature.
    if (!expect(':')) return std::nullopt;
    skip_ws();
    auto operand_types = parse_type_list();
    if (!operand_types) return std::nullopt;
    skip_ws();
    if (!expect('-')) return std::nullopt;
    if (!expect('>')) return std::nullopt;
    skip_ws();
    auto result_types = parse_type_list();
    if (!result_types) return std::nullopt;

    if (operand_types->size() != operand_ids.size())
      return fail("one operand type per operand");
    if (result_types->size() != result_ids.size())
      return fail("one result type per result");

    for (size_t i = 0; i < operand_ids.size(); ++i) {
      auto it = defs_.find(operand_ids[i]);
      // Unknown names still parse; the verifier reports them as
      // use-before-def on a fresh id.
      ValueRef v = it != defs_.end()
                       ? ValueRef{it->second.id, (*operand_types)[i]}
                       : ValueRef{next_value_id_++, (*operand_types)[i]};
      op.operands.push_back(v);
    }
    for (size_t i = 0; i < result_ids.size(); ++i) {
      bool fresh = false;
      ValueRef v = define(result_ids[i], (*result_types)[i], &fresh);
      if (!fresh) return fail("unique value id (%" +
                              std::to_string(result_ids[i]) + " redefined)");
      op.results.push_back(v);
    }

    // Regions.
    skip_ws();
    while (peek() == '{') {
      advance();
      auto region = parse_region();
      if (!region) return std::nullopt;
      op.regions.push_back(std::move(*region));
      skip_ws();
    }
    return op;
  }

  std::optional<RegionNode> parse_region() {
    RegionNode region;
    BlockNode &block = region.blocks.emplace_back();
    block.id = next_block_id_++;
    skip_ws();
    if (peek() == '^') {
      advance();
      if (!expect('(')) return std::nullopt;
      skip_ws();
      if (peek() != ')') {
        while (true) {
          auto id = parse_value_id();
          if (!id) return std::nullopt;
          skip_ws();
          if (!expect(':')) return std::nullopt;
          skip_ws();
          auto t = parse_type();
          if (!t) return std::nullopt;
          bool fresh = false;
          ValueRef v = define(*id, *t, &fresh);
          if (!fresh)
            return fail("unique value id (%" + std::to_string(*id) +
                        " redefined)");
          block.args.push_back(v);
          skip_ws();
          if (peek() == ',') {
            advance();
            skip_ws();
            continue;
          }
          break;
        }
      }
      if (!expect(')')) return std::nullopt;
      if (!expect(':')) return std::nullopt;
      skip_ws();
    }
    while (peek() != '}') {
      if (at_end()) return fail("'}'");
      auto op = parse_op();
      if (!op) return std::nullopt;
      block.ops.push_back(std::move(*op));
      skip_ws();
    }
    advance();  // consume '}'
    // Declared region result types come from the terminator, mirroring how
    // generation fixes them retrospectively.
    if (!block.ops.empty() && block.ops.back().has_trait(kIsTerminator))
      for (const ValueRef &v : block.ops.back().operands)
        region.declared_result_types.push_back(v.type);
    return region;
  }
};

}  // namespace detail

/// Parses canonical module text. Syntax errors return a ParseError with the
/// position and the expectation that failed; structurally suspect but
/// syntactically valid input parses, and the caller runs the verifier.
inline ParseResult parse_module(const std::string &text,
                                const Registry &registry) {
  return detail::ModuleParser(text, registry).run();
}

}  // namespace rir
