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

#include <stdexcept>
#include <string>

#include "rir/core/verifier.hpp"
#include "rir/dialects/dialects.hpp"
#include "rir/gen/builder.hpp"

namespace rir {

/// Generates one whole module: between 1 and max_functions functions, the
/// last one being the entry "main" (earlier ones are callable from later
/// ones). The result is always verifier-clean; a violation here is a
/// framework bug and aborts with the offending seed. Deterministic in
/// (seed, config).
inline ModuleRoot generate_module(const GenConfig &config,
                                  const Registry &registry = default_registry(),
                                  GenEventSink *events = nullptr) {
  OpBuilder b(config, registry, events);
  ModuleRoot module;
  module.body.block().id = b.next_block_id();
  b.push_scope(&module.body.block(), nullptr, /*isolated=*/true);
  int n_functions = 1 + (int)b.rng().below((uint64_t)config.max_functions);
  for (int i = 0; i < n_functions; ++i) {
    bool is_main = i == n_functions - 1;
    generate_function(b, is_main ? "main" : "f" + std::to_string(i), is_main);
  }
  b.pop_scope();

  auto violations = verify_module(module, registry);
  if (!violations.empty())
    throw std::runtime_error(
        "generated module failed verification (seed " +
        std::to_string(config.seed) + "): " + to_string(violations[0].kind) +
        " at " + violations[0].path + ": " + violations[0].message);
  return module;
}

}  // namespace rir
