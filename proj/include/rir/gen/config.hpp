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
#include <charconv>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rir {

class Registry;

/// Generation settings. Serializes to a flat "key = value" text file whose
/// keys match the field names; per-op weights use "weight.<dialect>.<op>".
struct GenConfig {
  uint64_t seed = 0;
  // Probability of stopping block filling after each successful insertion.
  double p_stop = 0.2;
  int max_region_depth = 4;
  int max_total_ops = 200;
  int max_ops_per_block = 32;
  int max_functions = 3;
  int max_return_values = 2;
  bool allow_unsafe_memory = false;
  // Base pool for integer constant values. The sampler always extends it
  // with min/max of the sampled width and one fresh uniform draw.
  std::vector<int64_t> int_constant_pool = {0, 1, -1, 2, 7};
  // Fully-qualified op name -> weight. Unlisted ops weigh 1.0; a weight of
  // zero removes the op from selection pools entirely.
  std::map<std::string, double> op_weights;

  double weight_for(const std::string &full_name) const {
    auto it = op_weights.find(full_name);
    return it == op_weights.end() ? 1.0 : it->second;
  }

  void validate() const {
    if (!(p_stop > 0.0 && p_stop < 1.0))
      throw std::invalid_argument("p_stop must be in (0, 1)");
    if (max_region_depth < 1 || max_total_ops < 1 || max_ops_per_block < 1 ||
        max_functions < 1)
      throw std::invalid_argument("size limits must be positive");
    if (max_return_values < 0)
      throw std::invalid_argument("max_return_values must be >= 0");
    for (const auto &[name, w] : op_weights)
      if (w < 0.0)
        throw std::invalid_argument("negative weight for " + name);
  }
};

namespace detail {

inline std::string trim(const std::string &s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline uint64_t parse_u64(const std::string &s, const std::string &key) {
  try {
    size_t pos = 0;
    uint64_t v = std::stoull(s, &pos, 0);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception &) {
    throw std::invalid_argument("config: bad unsigned value for '" + key +
                                "': " + s);
  }
}

inline int64_t parse_i64(const std::string &s, const std::string &key) {
  try {
    size_t pos = 0;
    int64_t v = std::stoll(s, &pos, 0);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception &) {
    throw std::invalid_argument("config: bad integer value for '" + key +
                                "': " + s);
  }
}

inline double parse_f64(const std::string &s, const std::string &key) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception &) {
    throw std::invalid_argument("config: bad real value for '" + key +
                                "': " + s);
  }
}

inline bool parse_bool(const std::string &s, const std::string &key) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw std::invalid_argument("config: bad bool value for '" + key + "': " + s);
}

// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, end);
}

}  // namespace detail

/// Parses the line-oriented config format. Blank lines and '#' comments are
/// skipped; unknown keys are a load error.
inline GenConfig parse_config(const std::string &text) {
  GenConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected 'key = value'");
    std::string key = detail::trim(t.substr(0, eq));
    std::string val = detail::trim(t.substr(eq + 1));
    if (key == "seed") {
      cfg.seed = detail::parse_u64(val, key);
    } else if (key == "p_stop") {
      cfg.p_stop = detail::parse_f64(val, key);
    } else if (key == "max_region_depth") {
      cfg.max_region_depth = (int)detail::parse_i64(val, key);
    } else if (key == "max_total_ops") {
      cfg.max_total_ops = (int)detail::parse_i64(val, key);
    } else if (key == "max_ops_per_block") {
      cfg.max_ops_per_block = (int)detail::parse_i64(val, key);
    } else if (key == "max_functions") {
      cfg.max_functions = (int)detail::parse_i64(val, key);
    } else if (key == "max_return_values") {
      cfg.max_return_values = (int)detail::parse_i64(val, key);
    } else if (key == "allow_unsafe_memory") {
      cfg.allow_unsafe_memory = detail::parse_bool(val, key);
    } else if (key == "int_constant_pool") {
      cfg.int_constant_pool.clear();
      std::string item;
      std::istringstream items(val);
      while (std::getline(items, item, ',')) {
        item = detail::trim(item);
        if (!item.empty())
          cfg.int_constant_pool.push_back(detail::parse_i64(item, key));
      }
    } else if (key.rfind("weight.", 0) == 0) {
      std::string op = key.substr(7);
      if (op.find('.') == std::string::npos)
        throw std::invalid_argument("config: bad weight key '" + key +
                                    "' (want weight.<dialect>.<op>)");
      cfg.op_weights[op] = detail::parse_f64(val, key);
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

/// Serializes a fully-resolved config. When `all_ops` is given, a weight
/// line is emitted for every registered name so dumps are self-describing.
inline std::string serialize_config(
    const GenConfig &cfg, const std::vector<std::string> &all_ops = {}) {
  std::ostringstream out;
  out << "seed = " << cfg.seed << "\n";
  out << "p_stop = " << detail::format_double(cfg.p_stop) << "\n";
  out << "max_region_depth = " << cfg.max_region_depth << "\n";
  out << "max_total_ops = " << cfg.max_total_ops << "\n";
  out << "max_ops_per_block = " << cfg.max_ops_per_block << "\n";
  out << "max_functions = " << cfg.max_functions << "\n";
  out << "max_return_values = " << cfg.max_return_values << "\n";
  out << "allow_unsafe_memory = "
      << (cfg.allow_unsafe_memory ? "true" : "false") << "\n";
  out << "int_constant_pool = ";
  for (size_t i = 0; i < cfg.int_constant_pool.size(); ++i)
    out << (i ? ", " : "") << cfg.int_constant_pool[i];
  out << "\n";
  std::map<std::string, double> weights(cfg.op_weights);
  for (const std::string &name : all_ops)
    weights.emplace(name, cfg.weight_for(name));
  for (const auto &[name, w] : weights)
    out << "weight." << name << " = " << detail::format_double(w) << "\n";
  return out.str();
}

}  // namespace rir
