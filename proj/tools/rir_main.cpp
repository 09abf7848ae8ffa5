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
// Command-line entry point. Artifacts go to stdout (or --output);
// diagnostics go to stderr. Exit codes: 0 success, 1 usage/config/verify
// errors, 2 when a differential run or campaign found at least one bug
// group.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rir/rir.hpp"

namespace {

struct GlobalFlags {
  std::optional<uint64_t> seed;
  std::string config_path;
  std::string dump_config_path;
  std::string output_path;
  std::optional<int64_t> count;
};

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string &path, const std::string &data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << data;
}

// Precedence: built-in defaults, then the config file, then explicit flags.
rir::GenConfig resolve_config(const GlobalFlags &flags) {
  rir::GenConfig cfg;
  if (!flags.config_path.empty())
    cfg = rir::parse_config(read_file(flags.config_path));
  if (flags.seed) cfg.seed = *flags.seed;
  cfg.validate();
  return cfg;
}

void emit(const GlobalFlags &flags, const std::string &artifact) {
  if (flags.output_path.empty())
    std::cout << artifact;
  else
    write_file(flags.output_path, artifact);
}

rir::ModuleRoot load_module(const std::string &path, bool must_verify) {
  rir::ParseResult parsed =
      rir::parse_module(read_file(path), rir::default_registry());
  if (const auto *err = std::get_if<rir::ParseError>(&parsed))
    throw std::runtime_error(path + ": " + err->to_string());
  rir::ModuleRoot module = std::get<rir::ModuleRoot>(std::move(parsed));
  if (must_verify) {
    auto violations = rir::verify_module(module, rir::default_registry());
    if (!violations.empty())
      throw std::runtime_error(path + ": " + to_string(violations[0].kind) +
                               " at " + violations[0].path + ": " +
                               violations[0].message);
  }
  return module;
}

rir::BugInjection parse_inject(const std::string &spec) {
  rir::BugInjection inject;
  std::istringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item == "b1")
      inject.b1_dce_drops_infinite_loops = true;
    else if (item == "b2")
      inject.b2_xor_self_misfold = true;
    else if (item != "none" && !item.empty())
      throw std::runtime_error("unknown injection '" + item +
                               "' (expected b1, b2 or none)");
  }
  return inject;
}

std::vector<int64_t> parse_args_list(const std::string &spec) {
  std::vector<int64_t> args;
  std::istringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    args.push_back(std::stoll(item));
  }
  return args;
}

std::vector<rir::PassId> parse_passes(const std::string &spec) {
  std::vector<rir::PassId> passes;
  std::istringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item == "constfold")
      passes.push_back(rir::PassId::ConstFold);
    else if (item == "dce")
      passes.push_back(rir::PassId::DCE);
    else if (item == "cse")
      passes.push_back(rir::PassId::CSE);
    else if (!item.empty())
      throw std::runtime_error("unknown pass '" + item +
                               "' (expected constfold, cse or dce)");
  }
  return passes;
}

std::string format_run_outcome(const rir::RunOutcome &outcome) {
  using K = rir::RunOutcome::Kind;
  switch (outcome.kind) {
    case K::Completed: {
      if (outcome.values.empty()) return "Completed: ()";
      std::string s = "Completed: ";
      for (size_t i = 0; i < outcome.values.size(); ++i)
        s += (i ? ", " : "") + std::to_string(outcome.values[i].value);
      return s;
    }
    case K::Trap: return "Trap: " + outcome.message;
    case K::FuelExhausted:
      return "FuelExhausted: " + std::to_string(outcome.ops_executed) +
             " ops executed";
  }
  return "?";
}

std::string format_args(const std::vector<int64_t> &args) {
  std::string s = "(";
  for (size_t i = 0; i < args.size(); ++i)
    s += (i ? ", " : "") + std::to_string(args[i]);
  return s + ")";
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"random program generator and differential tester for the rir IR"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  GlobalFlags flags;
  app.add_option("--seed", flags.seed, "generation seed (overrides config)");
  app.add_option("--config", flags.config_path, "config file to load");
  app.add_option("--dump-config", flags.dump_config_path,
                 "write the fully resolved config to this path and exit");
  app.add_option("--output,-o", flags.output_path,
                 "output file (default: stdout)");
  app.add_option("--count,-n", flags.count, "program count");

  auto *cmd_generate = app.add_subcommand("generate", "generate one program");

  auto *cmd_verify = app.add_subcommand("verify", "parse and verify a program");
  std::string verify_input;
  cmd_verify->add_option("file", verify_input, "program file")->required();

  auto *cmd_run = app.add_subcommand("run", "interpret a program");
  std::string run_input, run_args;
  uint64_t run_fuel = 100000;
  cmd_run->add_option("file", run_input, "program file")->required();
  cmd_run->add_option("--args", run_args, "comma-separated entry arguments");
  cmd_run->add_option("--fuel", run_fuel, "op budget (default 100000)");

  auto *cmd_opt = app.add_subcommand("opt", "optimize a program");
  std::string opt_input, opt_passes, opt_inject = "none";
  cmd_opt->add_option("file", opt_input, "program file")->required();
  cmd_opt->add_option("--passes", opt_passes,
                      "comma list of constfold,cse,dce (default: pipeline "
                      "to fixpoint)");
  cmd_opt->add_option("--inject", opt_inject, "bug injection: b1,b2 or none");

  auto *cmd_diff = app.add_subcommand("diff", "differential-test one program");
  std::string diff_input, diff_inject = "none", diff_args;
  int diff_vectors = 4;
  uint64_t diff_fuel = 100000;
  cmd_diff->add_option("file", diff_input, "program file")->required();
  cmd_diff->add_option("--inject", diff_inject, "bug injection: b1,b2 or none");
  cmd_diff->add_option("--vectors", diff_vectors,
                       "derived input vectors (default 4)");
  cmd_diff->add_option("--args", diff_args,
                       "use exactly this one input vector instead");
  cmd_diff->add_option("--fuel", diff_fuel, "op budget per run");

  auto *cmd_fuzz = app.add_subcommand("fuzz", "run a differential campaign");
  std::string fuzz_inject = "none", fuzz_outdir = "fuzz-out";
  double fuzz_seconds = 0.0;
  int fuzz_inputs = 4, fuzz_jobs = 1;
  uint64_t fuzz_fuel = 100000;
  cmd_fuzz->add_option("--inject", fuzz_inject, "bug injection: b1,b2 or none");
  cmd_fuzz->add_option("--seconds", fuzz_seconds,
                       "wall-clock budget (alternative to -n)");
  cmd_fuzz->add_option("--output-dir", fuzz_outdir,
                       "campaign directory (default fuzz-out)");
  cmd_fuzz->add_option("--inputs-per-program", fuzz_inputs,
                       "input vectors per program (default 4)");
  cmd_fuzz->add_option("--jobs", fuzz_jobs, "parallel workers (default 1)");
  cmd_fuzz->add_option("--fuel", fuzz_fuel, "op budget per run");

  auto *cmd_stats = app.add_subcommand("stats", "frequency model report");
  double stats_pg = 0.2, stats_pbool = 1.0 / 90.0;
  uint64_t stats_trials = 100000;
  int stats_jobs = 1;
  cmd_stats->add_option("--p-g", stats_pg, "geometric stop parameter");
  cmd_stats->add_option("--p-bool", stats_pbool,
                        "per-op boolean production probability");
  cmd_stats->add_option("--trials", stats_trials,
                        "Monte-Carlo trials (default 100000)");
  cmd_stats->add_option("--jobs", stats_jobs,
                        "parallel workers for the empirical sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    // Normalize CLI11's exit codes: 0 for --help, 1 for any usage error
    // (the message names the offending token).
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    rir::GenConfig cfg = resolve_config(flags);

    if (!flags.dump_config_path.empty()) {
      write_file(flags.dump_config_path,
                 rir::serialize_config(cfg, rir::default_registry().names()));
      return 0;
    }

    if (cmd_generate->parsed()) {
      emit(flags, rir::print_module(rir::generate_module(cfg)));
      return 0;
    }

    if (cmd_verify->parsed()) {
      rir::ModuleRoot module = load_module(verify_input, /*must_verify=*/false);
      auto violations = rir::verify_module(module, rir::default_registry());
      for (const rir::Violation &v : violations)
        std::cout << to_string(v.kind) << " at " << v.path << ": " << v.message
                  << "\n";
      return violations.empty() ? 0 : 1;
    }

    if (cmd_run->parsed()) {
      rir::ModuleRoot module = load_module(run_input, /*must_verify=*/true);
      rir::RunOutcome outcome =
          rir::interpret(module, parse_args_list(run_args), run_fuel);
      std::cout << format_run_outcome(outcome) << "\n";
      return 0;
    }

    if (cmd_opt->parsed()) {
      rir::ModuleRoot module = load_module(opt_input, /*must_verify=*/true);
      rir::BugInjection inject = parse_inject(opt_inject);
      if (opt_passes.empty()) {
        emit(flags, rir::print_module(rir::run_pipeline(module, inject).module));
      } else {
        for (rir::PassId p : parse_passes(opt_passes))
          module = rir::run_pass(module, p, inject);
        emit(flags, rir::print_module(module));
      }
      return 0;
    }

    if (cmd_diff->parsed()) {
      rir::ModuleRoot module = load_module(diff_input, /*must_verify=*/true);
      rir::BugInjection inject = parse_inject(diff_inject);
      std::vector<std::vector<int64_t>> vectors;
      if (!diff_args.empty())
        vectors.push_back(parse_args_list(diff_args));
      else
        vectors = rir::make_input_vectors(module, cfg.seed, diff_vectors);
      auto verdicts =
          rir::differential_check(module, inject, vectors, diff_fuel);
      bool any_bug = false;
      for (size_t i = 0; i < verdicts.size(); ++i) {
        std::cout << "vector " << i << " " << format_args(vectors[i]) << ": "
                  << to_string(verdicts[i].verdict);
        if (verdicts[i].verdict != rir::Verdict::Agree) {
          std::cout << " [" << verdicts[i].message << "]";
          any_bug = true;
        }
        std::cout << "\n";
      }
      return any_bug ? 2 : 0;
    }

    if (cmd_fuzz->parsed()) {
      rir::CampaignOptions opt;
      opt.config = cfg;
      opt.inject = parse_inject(fuzz_inject);
      if (flags.count) opt.program_count = (uint64_t)*flags.count;
      opt.wall_seconds = fuzz_seconds;
      opt.inputs_per_program = fuzz_inputs;
      opt.fuel = fuzz_fuel;
      opt.output_dir = fuzz_outdir;
      opt.jobs = fuzz_jobs;
      rir::CampaignReport report = rir::run_campaign(opt);
      std::cout << "programs: " << report.programs_generated
                << "  bug groups: " << report.groups.size()
                << "  (report in " << fuzz_outdir << ")\n";
      return report.groups.empty() ? 0 : 2;
    }

    if (cmd_stats->parsed()) {
      std::ostringstream out;
      rir::FreqModelParams params{stats_pg, stats_pbool};
      double analytic = rir::while_success_probability(params);
      char line[160];
      snprintf(line, sizeof line,
               "analytic: P(while generated | chosen) = %.6f  (p_g = %g, "
               "p_bool = %g)\n",
               analytic, stats_pg, stats_pbool);
      out << line;
      rir::MonteCarloEstimate mc =
          rir::monte_carlo_while(params, stats_trials, cfg.seed);
      snprintf(line, sizeof line,
               "monte_carlo: %.6f +/- %.6f (std error, %llu trials)\n",
               mc.estimate, mc.std_error, (unsigned long long)mc.trials);
      out << line;
      if (flags.count && *flags.count > 0) {
        rir::FrequencyReport fr = rir::measure_op_frequencies(
            cfg, (uint64_t)*flags.count, stats_jobs);
        out << rir::frequency_table_tsv(fr);
        snprintf(line, sizeof line,
                 "empirical: scf.while fraction = %.6f over %llu programs\n",
                 fr.empirical_while, (unsigned long long)fr.programs);
        out << line;
        snprintf(line, sizeof line,
                 "matched model: measured p_bool = %.6f -> analytic = %.6f "
                 "(delta = %+.4f)\n",
                 fr.measured_p_bool, fr.analytic_while,
                 fr.empirical_while - fr.analytic_while);
        out << line;
      }
      emit(flags, out.str());
      return 0;
    }

    std::cerr << app.help() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
