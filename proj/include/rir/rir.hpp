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

#include "rir/core/ir.hpp"
#include "rir/core/registry.hpp"
#include "rir/core/verifier.hpp"
#include "rir/dialects/dialects.hpp"
#include "rir/exec/diff.hpp"
#include "rir/exec/interp.hpp"
#include "rir/exec/passes.hpp"
#include "rir/exec/semantics.hpp"
#include "rir/fuzz/campaign.hpp"
#include "rir/fuzz/group.hpp"
#include "rir/fuzz/md5.hpp"
#include "rir/gen/builder.hpp"
#include "rir/gen/config.hpp"
#include "rir/gen/generate.hpp"
#include "rir/gen/rng.hpp"
#include "rir/stats/measure.hpp"
#include "rir/stats/model.hpp"
#include "rir/text/parse.hpp"
#include "rir/text/print.hpp"
