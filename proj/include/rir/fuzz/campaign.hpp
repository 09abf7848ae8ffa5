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
//
// Campaign driver: generate N programs (or run for a wall-clock budget),
// differential-test each one, group every non-agreeing verdict by the MD5
// of its number-normalized message, and persist everything needed to
// replay a finding. Work items are independent; per-program seeds are
// derived O(1) from the master seed, so any job count produces the same
// groups.tsv bytes in program-count mode.

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "rir/exec/diff.hpp"
#include "rir/fuzz/group.hpp"
#include "rir/gen/generate.hpp"
#include "rir/text/parse.hpp"
#include "rir/text/print.hpp"

namespace rir {

struct CampaignOptions {
  GenConfig config;             // config.seed is the campaign master seed
  BugInjection inject;
  uint64_t program_count = 0;   // exactly one budget must be set
  double wall_seconds = 0.0;
  int inputs_per_program = 4;
  uint64_t fuel = 100000;
  std::string output_dir;
  int jobs = 1;
};

struct CampaignReport {
  uint64_t programs_generated = 0;
  uint64_t agree = 0, value_mismatch = 0, trap_mismatch = 0,
           termination_suspect = 0;
  std::vector<BugGroup> groups;  // count-descending
  double gen_ms_median = 0, gen_ms_p95 = 0;
  double check_ms_median = 0, check_ms_p95 = 0;
  uint64_t non_fixpoint_pipelines = 0;
  // (elapsed seconds, cumulative group count), one row per new group.
  std::vector<std::pair<double, uint64_t>> series;
};

namespace detail {

struct ProgramResult {
  uint64_t index = 0;
  uint64_t seed = 0;
  std::vector<VerdictInfo> verdicts;
  bool pipeline_fixpoint = true;
  double gen_ms = 0, check_ms = 0;
  double finished_at_s = 0;  // since campaign start
  std::string path;
};

inline double percentile(std::vector<double> xs, double p) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  double rank = p * (double)(xs.size() - 1);
  size_t lo = (size_t)rank;
  size_t hi = std::min(lo + 1, xs.size() - 1);
  double frac = rank - (double)lo;
  return xs[lo] * (1.0 - frac) + xs[hi] * frac;
}

inline std::string format_seconds(double s) {
  char buf[32];
  snprintf(buf, sizeof buf, "%.3f", s);
  return buf;
}

}  // namespace detail

/// Checks one already-built module exactly the way the campaign does;
/// `program_seed` drives the input vectors.
inline std::vector<VerdictInfo> replay_module(const ModuleRoot &module,
                                              uint64_t program_seed,
                                              const CampaignOptions &opt) {
  auto vectors =
      make_input_vectors(module, program_seed, opt.inputs_per_program);
  return differential_check(module, opt.inject, vectors, opt.fuel);
}

/// Replays from a recorded per-program seed (regenerates the program).
inline std::vector<VerdictInfo> replay_seed(uint64_t program_seed,
                                            const CampaignOptions &opt) {
  GenConfig cfg = opt.config;
  cfg.seed = program_seed;
  return replay_module(generate_module(cfg), program_seed, opt);
}

/// Replays from a persisted .rir file plus its recorded seed.
inline std::vector<VerdictInfo> replay_file(const std::string &path,
                                            uint64_t program_seed,
                                            const CampaignOptions &opt) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("replay: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  ParseResult parsed = parse_module(buf.str(), default_registry());
  if (const auto *err = std::get_if<ParseError>(&parsed))
    throw std::runtime_error("replay: " + path + ": " + err->to_string());
  return replay_module(std::get<ModuleRoot>(parsed), program_seed, opt);
}

inline CampaignReport run_campaign(const CampaignOptions &opt) {
  namespace fs = std::filesystem;
  using clock = std::chrono::steady_clock;
  if ((opt.program_count == 0) == (opt.wall_seconds <= 0.0))
    throw std::invalid_argument(
        "campaign: set exactly one of program_count and wall_seconds");
  fs::create_directories(fs::path(opt.output_dir) / "programs");

  const auto start = clock::now();
  auto elapsed_s = [&] {
    return std::chrono::duration<double>(clock::now() - start).count();
  };

  std::vector<detail::ProgramResult> results;
  std::mutex results_mu;
  std::atomic<uint64_t> next_index{0};
  std::atomic<bool> aborted{false};
  std::string abort_reason;

  auto worker_body = [&] {
    while (!aborted.load()) {
      uint64_t index = next_index.fetch_add(1);
      if (opt.program_count > 0 && index >= opt.program_count) return;
      if (opt.wall_seconds > 0 && elapsed_s() >= opt.wall_seconds) return;

      detail::ProgramResult r;
      r.index = index;
      r.seed = derive_seed(opt.config.seed, index);
      GenConfig cfg = opt.config;
      cfg.seed = r.seed;

      auto t0 = clock::now();
      ModuleRoot module = generate_module(cfg);
      auto t1 = clock::now();
      r.gen_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

      r.path = (fs::path(opt.output_dir) / "programs" /
                (std::to_string(index) + "_" + std::to_string(r.seed) + ".rir"))
                   .string();
      {
        std::ofstream out(r.path, std::ios::binary);
        if (!out) throw std::runtime_error("campaign: cannot write " + r.path);
        out << print_module(module);
      }

      auto vectors =
          make_input_vectors(module, r.seed, opt.inputs_per_program);
      r.verdicts = differential_check(module, opt.inject, vectors, opt.fuel,
                                      10, default_pipeline(),
                                      default_registry(), &r.pipeline_fixpoint);
      r.check_ms =
          std::chrono::duration<double, std::milli>(clock::now() - t1).count();
      r.finished_at_s = elapsed_s();
      std::lock_guard<std::mutex> lock(results_mu);
      results.push_back(std::move(r));
    }
  };
  // A failing work item (I/O, typically) stops the campaign; the partial
  // report is still flushed below and the error rethrown afterwards.
  auto worker = [&] {
    try {
      worker_body();
    } catch (const std::exception &e) {
      std::lock_guard<std::mutex> lock(results_mu);
      abort_reason = e.what();
      aborted.store(true);
    }
  };

  int jobs = std::max(1, opt.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (std::thread &t : threads) t.join();
  }

  // Aggregation is index-ordered so the report does not depend on thread
  // scheduling.
  std::sort(results.begin(), results.end(),
            [](const auto &a, const auto &b) { return a.index < b.index; });

  CampaignReport report;
  std::map<std::string, BugGroup> groups;  // digest -> group, insertion by index
  std::vector<double> gen_times, check_times;
  double max_elapsed_seen = 0;
  for (const detail::ProgramResult &r : results) {
    ++report.programs_generated;
    gen_times.push_back(r.gen_ms);
    check_times.push_back(r.check_ms);
    if (!r.pipeline_fixpoint) ++report.non_fixpoint_pipelines;
    for (const VerdictInfo &v : r.verdicts) {
      switch (v.verdict) {
        case Verdict::Agree: ++report.agree; continue;
        case Verdict::ValueMismatch: ++report.value_mismatch; break;
        case Verdict::TrapMismatch: ++report.trap_mismatch; break;
        case Verdict::TerminationSuspect: ++report.termination_suspect; break;
      }
      std::string normalized = normalize_message(v.message);
      std::string digest = group_digest(normalized);
      auto [it, fresh] = groups.try_emplace(digest);
      if (fresh) {
        it->second = BugGroup{digest, normalized, 0, r.seed, r.index, r.path};
        max_elapsed_seen = std::max(max_elapsed_seen, r.finished_at_s);
        report.series.emplace_back(max_elapsed_seen, groups.size());
      }
      ++it->second.count;
    }
  }

  report.gen_ms_median = detail::percentile(gen_times, 0.5);
  report.gen_ms_p95 = detail::percentile(gen_times, 0.95);
  report.check_ms_median = detail::percentile(check_times, 0.5);
  report.check_ms_p95 = detail::percentile(check_times, 0.95);

  for (const auto &[digest, group] : groups) report.groups.push_back(group);
  std::sort(report.groups.begin(), report.groups.end(),
            [](const BugGroup &a, const BugGroup &b) {
              if (a.count != b.count) return a.count > b.count;
              return a.first_index < b.first_index;
            });

  // groups.tsv: deterministic bytes in program-count mode.
  {
    std::ofstream out(fs::path(opt.output_dir) / "groups.tsv",
                      std::ios::binary);
    out << "digest\tcount\tfirst_seed\tnormalized_message\n";
    for (const BugGroup &g : report.groups)
      out << g.digest << '\t' << g.count << '\t' << g.first_seed << '\t'
          << g.normalized_message << '\n';
  }
  {
    std::ofstream out(fs::path(opt.output_dir) / "series.tsv",
                      std::ios::binary);
    out << "elapsed_seconds\tgroup_count\n";
    for (const auto &[sec, n] : report.series)
      out << detail::format_seconds(sec) << '\t' << n << '\n';
  }
  {
    std::ofstream out(fs::path(opt.output_dir) / "report.txt",
                      std::ios::binary);
    out << "programs_generated: " << report.programs_generated << '\n'
        << "inputs_per_program: " << opt.inputs_per_program << '\n'
        << "verdict agree: " << report.agree << '\n'
        << "verdict value_mismatch: " << report.value_mismatch << '\n'
        << "verdict trap_mismatch: " << report.trap_mismatch << '\n'
        << "verdict termination_suspect: " << report.termination_suspect << '\n'
        << "bug_groups: " << report.groups.size() << '\n'
        << "non_fixpoint_pipelines: " << report.non_fixpoint_pipelines << '\n'
        << "generation_ms median: " << report.gen_ms_median
        << " p95: " << report.gen_ms_p95 << '\n'
        << "check_ms median: " << report.check_ms_median
        << " p95: " << report.check_ms_p95 << '\n';
    for (const BugGroup &g : report.groups)
      out << "group " << g.digest << " count=" << g.count
          << " first_seed=" << g.first_seed << " rep=" << g.representative_path
          << '\n';
    if (aborted.load()) out << "aborted: " << abort_reason << '\n';
  }
  if (aborted.load())
    throw std::runtime_error("campaign aborted (partial report in " +
                             opt.output_dir + "): " + abort_reason);
  return report;
}

}  // namespace rir
