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

#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rir/gen/generate.hpp"
#include "rir/stats/model.hpp"

namespace rir {

struct OpFrequency {
  std::string name;
  uint64_t chosen = 0;
  uint64_t generated = 0;
  double success_fraction = 0.0;  // generated / chosen
  double share = 0.0;             // generated / all generated
};

/// Instrumented generation sweep: per-op chosen/generated counts plus the
/// empirical bool-producer fraction, and the frequency-model comparison
/// computed at matched parameters (the config's p_stop and the measured
/// p_bool).
struct FrequencyReport {
  uint64_t programs = 0;
  uint64_t total_chosen = 0;
  uint64_t total_generated = 0;
  uint64_t bool_producing_generated = 0;
  double measured_p_bool = 0.0;
  double p_stop = 0.0;
  double analytic_while = 0.0;   // model at (p_stop, measured_p_bool)
  double empirical_while = 0.0;  // chosen -> generated fraction of scf.while
  std::vector<OpFrequency> ops;  // name-sorted
};

namespace detail {

struct FrequencyCounter : GenEventSink {
  std::map<std::string, std::pair<uint64_t, uint64_t>> counts;
  uint64_t generated_total = 0;
  uint64_t bool_producing = 0;

  void op_chosen(const std::string &name) override { ++counts[name].first; }

  void op_inserted(const OperationNode &op) override {
    ++counts[op.full_name()].second;
    ++generated_total;
    for (const ValueRef &r : op.results)
      if (r.type == TypeDesc::i1()) {
        ++bool_producing;
        break;
      }
  }

  void merge_into(FrequencyCounter &total) const {
    for (const auto &[name, c] : counts) {
      total.counts[name].first += c.first;
      total.counts[name].second += c.second;
    }
    total.generated_total += generated_total;
    total.bool_producing += bool_producing;
  }
};

}  // namespace detail

/// Generates `n_programs` modules (seeds derived from config.seed exactly
/// like a campaign) with event counting switched on. Deterministic in
/// (seed, config) for any job count: the per-program counters merge
/// commutatively.
inline FrequencyReport measure_op_frequencies(const GenConfig &config,
                                              uint64_t n_programs,
                                              int jobs = 1) {
  detail::FrequencyCounter total;
  std::mutex mu;
  std::atomic<uint64_t> next{0};
  auto worker = [&] {
    detail::FrequencyCounter local_total;
    while (true) {
      uint64_t index = next.fetch_add(1);
      if (index >= n_programs) break;
      GenConfig cfg = config;
      cfg.seed = derive_seed(config.seed, index);
      detail::FrequencyCounter counter;
      generate_module(cfg, default_registry(), &counter);
      counter.merge_into(local_total);
    }
    std::lock_guard<std::mutex> lock(mu);
    local_total.merge_into(total);
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (std::thread &t : threads) t.join();
  }

  FrequencyReport report;
  report.programs = n_programs;
  report.total_generated = total.generated_total;
  report.bool_producing_generated = total.bool_producing;
  report.p_stop = config.p_stop;
  for (const auto &[name, c] : total.counts) {
    OpFrequency f;
    f.name = name;
    f.chosen = c.first;
    f.generated = c.second;
    f.success_fraction = c.first ? (double)c.second / (double)c.first : 0.0;
    f.share = total.generated_total
                  ? (double)c.second / (double)total.generated_total
                  : 0.0;
    report.total_chosen += c.first;
    if (name == "scf.while") report.empirical_while = f.success_fraction;
    report.ops.push_back(std::move(f));
  }
  report.measured_p_bool =
      total.generated_total
          ? (double)total.bool_producing / (double)total.generated_total
          : 0.0;
  report.analytic_while =
      while_success_probability({config.p_stop, report.measured_p_bool});
  return report;
}

/// Frequency table as TSV (ops sorted by name; comparison lines are the
/// caller's business).
inline std::string frequency_table_tsv(const FrequencyReport &report) {
  std::ostringstream out;
  out << "op\tchosen\tgenerated\tsuccess_fraction\tshare\n";
  char buf[64];
  for (const OpFrequency &f : report.ops) {
    snprintf(buf, sizeof buf, "%.6f\t%.6f", f.success_fraction, f.share);
    out << f.name << '\t' << f.chosen << '\t' << f.generated << '\t' << buf
        << '\n';
  }
  return out.str();
}

}  // namespace rir
