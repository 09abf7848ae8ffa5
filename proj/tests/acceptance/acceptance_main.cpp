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
// Acceptance suite: every gate the project commits to, one pass/fail line
// each. Run it via ctest or directly; it exits with the number of failed
// criteria. Thresholds are fixed here, not tuned at runtime.

#include <sys/resource.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include "rir/rir.hpp"

namespace fs = std::filesystem;
using clock_type = std::chrono::steady_clock;

namespace {

int g_failures = 0;
clock_type::time_point g_t0;

int jobs() {
  unsigned hw = std::thread::hardware_concurrency();
  return (int)std::min(hw == 0 ? 2u : hw, 8u);
}

void begin(const std::string &name) {
  std::cout << "... " << name << std::flush;
  g_t0 = clock_type::now();
}

void finish(bool pass, const std::string &detail) {
  double sec = std::chrono::duration<double>(clock_type::now() - g_t0).count();
  char buf[32];
  snprintf(buf, sizeof buf, "%.1fs", sec);
  std::cout << "\r" << (pass ? "[PASS] " : "[FAIL] ") << detail << "  (" << buf
            << ")\n";
  if (!pass) ++g_failures;
}

std::string fmt(double v, int digits = 4) {
  char buf[48];
  snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path out_dir(const std::string &leaf) {
  fs::path dir = fs::temp_directory_path() / "rir_acceptance" / leaf;
  fs::remove_all(dir);
  return dir;
}

//===----------------------------------------------------------------------===//

// 1. Analytic frequency: the closed model value at p_g = 0.2,
//    p_bool = 1/90 must land on the reference number (~8.33%).
void criterion_1() {
  begin("analytic while probability");
  double p = rir::while_success_probability({0.2, 1.0 / 90.0});
  bool pass = p >= 0.0828 && p <= 0.0838;
  finish(pass, "1. analytic P(while | chosen) = " + fmt(p, 6) +
                   ", required within [0.0828, 0.0838]");
}

// 2. Model validation: Monte-Carlo simulation of the idealized process
//    within three standard errors, and the pmf sums to one.
void criterion_2() {
  begin("monte-carlo model validation");
  rir::FreqModelParams params{0.2, 1.0 / 90.0};
  double analytic = rir::while_success_probability(params);
  rir::MonteCarloEstimate mc = rir::monte_carlo_while(params, 100000, 7);
  double gap = std::abs(mc.estimate - analytic);
  bool mc_ok = gap <= 3.0 * mc.std_error;

  bool pmf_ok = true;
  for (double p_g : {0.1, 0.2, 0.5}) {
    double total = 0.0;
    for (uint64_t s = 0; s <= 4000; ++s)
      total += rir::length_sum_pmf({p_g, 0.0}, s);
    pmf_ok = pmf_ok && std::abs(total - 1.0) <= 1e-9;
  }
  finish(mc_ok && pmf_ok,
         "2. monte-carlo " + fmt(mc.estimate, 6) + " vs analytic " +
             fmt(analytic, 6) + " (|diff| = " + fmt(gap, 6) + " <= 3*SE = " +
             fmt(3.0 * mc.std_error, 6) + "), pmf normalization " +
             (pmf_ok ? "1 +/- 1e-9" : "BROKEN"));
}

// 3. Empirical echo of the frequency analysis. The measurement
//    configuration emulates the regime the model was built for: a pool
//    where roughly one generated op in ninety yields a boolean, structured
//    nesting is rare, and functions are isolated flat blocks — the model
//    assumes independent same-block op counts, so heavy nesting or a
//    boolean-rich suite would measure the wrong thing. The reference
//    implementation's own observed number is not asserted (different
//    dialect composition); only agreement at matched parameters is.
void criterion_3() {
  begin("empirical vs analytic while frequency (10k programs)");
  rir::GenConfig cfg;
  cfg.seed = 1;
  cfg.p_stop = 0.2;
  cfg.max_region_depth = 12;
  cfg.max_total_ops = 4000;
  cfg.max_ops_per_block = 256;
  cfg.max_functions = 8;
  cfg.op_weights["arith.cmpi"] = 0.05;
  cfg.op_weights["arith.select"] = 0.25;
  cfg.op_weights["scf.if"] = 0.05;
  cfg.op_weights["scf.for"] = 0.05;
  cfg.op_weights["scf.while"] = 0.1;
  cfg.op_weights["func.call"] = 0.0;
  rir::FrequencyReport r = rir::measure_op_frequencies(cfg, 10000, jobs());
  double delta = r.empirical_while - r.analytic_while;
  bool pass = std::abs(delta) <= 0.02;
  finish(pass, "3. scf.while chosen->generated = " + fmt(r.empirical_while) +
                   " vs analytic(p_stop=0.2, p_bool=" +
                   fmt(r.measured_p_bool) + ") = " + fmt(r.analytic_while) +
                   ", delta = " + fmt(delta) + " (band +/- 0.02)");
}

// 4 + 5. Generator validity and round-trip over the same 10,000-module
//    corpus: verifier-clean, parse(print(m)) structurally equal, no
//    exceptions anywhere.
void criteria_4_5() {
  begin("10k-seed generator validity + round-trip");
  std::atomic<uint64_t> next{0};
  std::atomic<int> violations{0}, roundtrip_failures{0}, exceptions{0};
  auto worker = [&] {
    while (true) {
      uint64_t seed = next.fetch_add(1);
      if (seed >= 10000) return;
      try {
        rir::GenConfig cfg;
        cfg.seed = seed;
        rir::ModuleRoot m = rir::generate_module(cfg);
        if (!rir::verify_module(m, rir::default_registry()).empty())
          ++violations;
        rir::ParseResult back =
            rir::parse_module(rir::print_module(m), rir::default_registry());
        const auto *mod = std::get_if<rir::ModuleRoot>(&back);
        if (!mod || !rir::structural_equal(*mod, m)) ++roundtrip_failures;
      } catch (const std::exception &) {
        ++exceptions;
      }
    }
  };
  std::vector<std::thread> threads;
  for (int t = 0; t < jobs(); ++t) threads.emplace_back(worker);
  for (auto &t : threads) t.join();

  finish(violations == 0 && exceptions == 0,
         "4. 10000/10000 verifier-clean modules (" +
             std::to_string(violations.load()) + " violations, " +
             std::to_string(exceptions.load()) + " exceptions)");
  g_t0 = clock_type::now();
  finish(roundtrip_failures == 0,
         "5. round-trip parse(print(m)) == m on 10000/10000 (" +
             std::to_string(roundtrip_failures.load()) + " failures)");
}

// 6. Determinism: byte-identical program text per (seed, config) and
//    byte-identical groups.tsv for identical count-mode campaigns,
//    independent of the job count.
void criterion_6() {
  begin("determinism of programs and campaigns");
  rir::GenConfig cfg;
  cfg.seed = 123456789;
  bool text_ok = rir::print_module(rir::generate_module(cfg)) ==
                 rir::print_module(rir::generate_module(cfg));

  auto campaign = [&](const std::string &leaf, int njobs) {
    rir::CampaignOptions opt;
    opt.config.seed = 6;
    opt.inject.b2_xor_self_misfold = true;
    opt.program_count = 150;
    opt.fuel = 20000;
    opt.jobs = njobs;
    opt.output_dir = out_dir(leaf).string();
    rir::run_campaign(opt);
    return slurp(fs::path(opt.output_dir) / "groups.tsv");
  };
  std::string a = campaign("det_a", 1);
  std::string b = campaign("det_b", 1);
  std::string c = campaign("det_c", jobs());
  bool campaign_ok = !a.empty() && a == b && a == c;
  finish(text_ok && campaign_ok,
         std::string("6. byte-identical program text: ") +
             (text_ok ? "yes" : "NO") +
             "; byte-identical groups.tsv (rerun and jobs=" +
             std::to_string(jobs()) + "): " + (campaign_ok ? "yes" : "NO"));
}

// 7. Optimizer soundness: 1,000 safe-mode programs x 4 vectors, no
//    injection, zero mismatches of any kind. The escalation factor is 40:
//    the conservative DCE keeps loop and call structure, so an optimized
//    module is at most ~33x faster (the block-size cap) than its
//    original, and any genuinely terminating original finishes within 40x
//    the fuel that sufficed for the optimized side.
void criterion_7() {
  begin("optimizer soundness sweep (1000 x 4)");
  std::atomic<uint64_t> next{0};
  std::atomic<int> value_mismatch{0}, trap_mismatch{0}, suspects{0};
  auto worker = [&] {
    while (true) {
      uint64_t index = next.fetch_add(1);
      if (index >= 1000) return;
      rir::GenConfig cfg;
      cfg.seed = rir::derive_seed(7001, index);
      rir::ModuleRoot m = rir::generate_module(cfg);
      auto vectors = rir::make_input_vectors(m, cfg.seed, 4);
      auto verdicts = rir::differential_check(m, {}, vectors, 100000,
                                              /*escalation_factor=*/40);
      for (const rir::VerdictInfo &v : verdicts) {
        if (v.verdict == rir::Verdict::ValueMismatch) ++value_mismatch;
        if (v.verdict == rir::Verdict::TrapMismatch) ++trap_mismatch;
        if (v.verdict == rir::Verdict::TerminationSuspect) ++suspects;
      }
    }
  };
  std::vector<std::thread> threads;
  for (int t = 0; t < jobs(); ++t) threads.emplace_back(worker);
  for (auto &t : threads) t.join();
  bool pass = value_mismatch == 0 && trap_mismatch == 0 && suspects == 0;
  finish(pass, "7. soundness sweep: " + std::to_string(value_mismatch.load()) +
                   " value mismatches, " +
                   std::to_string(trap_mismatch.load()) +
                   " trap mismatches, " + std::to_string(suspects.load()) +
                   " post-escalation termination suspects (all must be 0)");
}

// 8. Injected bugs are found and replay. B1 must produce at least one
//    termination-suspect group, B2 at least one value-mismatch group, and
//    every group's representative must reproduce its verdict class from
//    the recorded seed.
void criterion_8() {
  begin("injected-bug campaigns (2 x 2000 programs)");
  auto run = [&](rir::BugInjection inject, uint64_t master,
                 const std::string &leaf) {
    rir::CampaignOptions opt;
    opt.config.seed = master;
    opt.inject = inject;
    opt.program_count = 2000;
    opt.fuel = 20000;
    opt.jobs = jobs();
    opt.output_dir = out_dir(leaf).string();
    return std::make_pair(rir::run_campaign(opt), opt);
  };

  rir::BugInjection b1, b2;
  b1.b1_dce_drops_infinite_loops = true;
  b2.b2_xor_self_misfold = true;
  auto [rep1, opt1] = run(b1, 81, "b1");
  auto [rep2, opt2] = run(b2, 82, "b2");

  auto has_class = [](const rir::CampaignReport &rep, const char *prefix) {
    for (const rir::BugGroup &g : rep.groups)
      if (g.normalized_message.rfind(prefix, 0) == 0) return true;
    return false;
  };
  bool b1_found = has_class(rep1, "termination_suspect");
  bool b2_found = has_class(rep2, "value_mismatch");

  // Replay every representative from its seed; its verdict class must
  // reappear among the replayed vectors.
  auto replays = [](const rir::CampaignReport &rep,
                    const rir::CampaignOptions &opt) {
    for (const rir::BugGroup &g : rep.groups) {
      std::string cls =
          g.normalized_message.substr(0, g.normalized_message.find(':'));
      bool hit = false;
      for (const rir::VerdictInfo &v : rir::replay_seed(g.first_seed, opt))
        hit |= cls == to_string(v.verdict);
      if (!hit) return false;
    }
    return true;
  };
  bool replay_ok = replays(rep1, opt1) && replays(rep2, opt2);

  finish(b1_found && b2_found && replay_ok,
         "8. B1 campaign: " + std::to_string(rep1.groups.size()) +
             " groups (termination_suspect found: " +
             (b1_found ? "yes" : "NO") + "); B2 campaign: " +
             std::to_string(rep2.groups.size()) +
             " groups (value_mismatch found: " + (b2_found ? "yes" : "NO") +
             "); all representatives replay: " + (replay_ok ? "yes" : "NO"));
}

// 9. Grouping: number-normalization collapses digit-run variants, and the
//    digest algorithm is bit-exact MD5.
void criterion_9() {
  begin("grouping and digest vectors");
  bool md5_ok = rir::md5_hex("") == "d41d8cd98f00b204e9800998ecf8427e";
  bool collapse_ok = true;
  rir::SplitMix64 rng(99);
  for (int i = 0; i < 500; ++i) {
    std::string a = "trap at op[" + std::to_string(rng.below(1000)) +
                    "]: index " + std::to_string(rng.below(1000));
    std::string b = "trap at op[" + std::to_string(rng.below(1000)) +
                    "]: index " + std::to_string(rng.below(1000));
    collapse_ok &= rir::group_digest(rir::normalize_message(a)) ==
                   rir::group_digest(rir::normalize_message(b));
  }
  collapse_ok &= rir::group_digest(rir::normalize_message("x1y")) !=
                 rir::group_digest(rir::normalize_message("x1z"));
  finish(md5_ok && collapse_ok,
         std::string("9. md5(\"\") standard vector: ") +
             (md5_ok ? "yes" : "NO") +
             ", digit-run variants collapse to one group: " +
             (collapse_ok ? "yes" : "NO"));
}

// 10. Soft performance target: ~20 KB programs generate in under 100 ms
//     median and the CLI stays under 64 MB peak RSS. A miss is reported
//     as a warning, not a failure.
void criterion_10() {
  begin("performance on ~20 KB programs (soft)");
  // ~68 bytes of text per op: a 290-op budget saturates near 20 KB.
  rir::GenConfig cfg;
  cfg.p_stop = 0.02;
  cfg.max_total_ops = 290;
  cfg.max_ops_per_block = 48;
  std::vector<double> times_ms;
  size_t considered = 0;
  for (uint64_t seed = 0; seed < 200 && times_ms.size() < 60; ++seed) {
    cfg.seed = seed;
    auto t0 = clock_type::now();
    rir::ModuleRoot m = rir::generate_module(cfg);
    std::string text = rir::print_module(m);
    double ms =
        std::chrono::duration<double, std::milli>(clock_type::now() - t0)
            .count();
    ++considered;
    if (text.size() >= 15000 && text.size() <= 25000) times_ms.push_back(ms);
  }
  std::sort(times_ms.begin(), times_ms.end());
  double median = times_ms.empty() ? -1.0 : times_ms[times_ms.size() / 2];

  // Peak RSS of a fresh CLI process doing the same work.
  long max_rss_kb = -1;
  if (const char *cli = std::getenv("RIR_CLI")) {
    fs::path dir = out_dir("perf");
    fs::create_directories(dir);
    fs::path cfg_file = dir / "perf.cfg";
    std::ofstream(cfg_file) << "p_stop = 0.02\nmax_total_ops = 290\n"
                               "max_ops_per_block = 48\n";
    std::string cmd = std::string(cli) + " generate --seed 3 --config " +
                      cfg_file.string() + " --output " +
                      (dir / "big.rir").string();
    if (std::system(cmd.c_str()) == 0) {
      struct rusage ru{};
      getrusage(RUSAGE_CHILDREN, &ru);
      max_rss_kb = ru.ru_maxrss;
    }
  }

  bool time_ok = median >= 0 && median < 100.0;
  bool rss_ok = max_rss_kb > 0 && max_rss_kb < 64 * 1024;
  std::string detail =
      "10. median generate+print for 15-25 KB programs: " + fmt(median, 2) +
      " ms over " + std::to_string(times_ms.size()) + "/" +
      std::to_string(considered) + " samples (soft < 100 ms: " +
      (time_ok ? "ok" : "WARN") + "); CLI peak RSS " +
      std::to_string(max_rss_kb / 1024) + " MB (soft < 64 MB: " +
      (rss_ok ? "ok" : "WARN") + ")";
  // Soft target: the measured numbers are the deliverable, a miss warns.
  finish(true, detail);
}

}  // namespace

int main() {
  std::cout << "rir acceptance suite (jobs = " << jobs() << ")\n";
  criterion_1();
  criterion_2();
  criterion_3();
  criteria_4_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (g_failures == 0)
    std::cout << "all criteria passed\n";
  else
    std::cout << g_failures << " criteria FAILED\n";
  return g_failures;
}
