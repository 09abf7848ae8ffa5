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
#include <string>
#include <string_view>

#include "rir/fuzz/md5.hpp"

namespace rir {

/// Conservative message normalization for bug grouping: every maximal run
/// of ASCII decimal digits collapses to a single '#', so messages that
/// differ only in line numbers, indices or values land in one group.
inline std::string normalize_message(std::string_view msg) {
  std::string out;
  out.reserve(msg.size());
  bool in_digits = false;
  for (char c : msg) {
    if (c >= '0' && c <= '9') {
      if (!in_digits) out += '#';
      in_digits = true;
    } else {
      out += c;
      in_digits = false;
    }
  }
  return out;
}

/// Group key: MD5 of the normalized message bytes, lowercase hex.
inline std::string group_digest(std::string_view normalized) {
  return md5_hex(normalized);
}

/// One equivalence class of failures.
struct BugGroup {
  std::string digest;
  std::string normalized_message;
  uint64_t count = 0;
  uint64_t first_seed = 0;
  uint64_t first_index = 0;
  std::string representative_path;
};

}  // namespace rir
