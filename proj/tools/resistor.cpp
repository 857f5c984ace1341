// Copyright 2026 The Resistor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "resistor/harness.hpp"

namespace {

using namespace resistor;

struct RunArgs {
  std::string mode = "det";
  int T = 16;
  int k = 1;
  std::string method = "psg";
  std::uint64_t seed = 0;
  double fail_prob = 0.2;
  std::size_t mc_samples = 100000;
  double rescale_L = 0.0;
  int audit_pairs = 32;
};

void add_run_options(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("--mode", a.mode, "det or rand")->check(CLI::IsMember({"det", "rand"}));
  cmd->add_option("--T", a.T, "query budget")->check(CLI::PositiveNumber);
  cmd->add_option("--k", a.k, "derivative order")->check(CLI::PositiveNumber);
  cmd->add_option("--method", a.method)->check(CLI::IsMember({"psg", "agd", "cubic"}));
  cmd->add_option("--seed", a.seed);
  cmd->add_option("--fail-prob", a.fail_prob, "randomized mode failure probability");
  cmd->add_option("--mc-samples", a.mc_samples, "Monte-Carlo samples per value");
  cmd->add_option("--rescale-L", a.rescale_L, "report the function rescaled to this smoothness");
  cmd->add_option("--audit-pairs", a.audit_pairs, "pairs per audited order");
}

RunConfig to_config(const RunArgs& a) {
  RunConfig c;
  c.mode = mode_from_string(a.mode);
  c.T = a.T;
  c.k = a.k;
  c.method = method_from_string(a.method);
  c.seed = a.seed;
  c.fail_prob = a.fail_prob;
  c.mc_samples = a.mc_samples;
  if (a.rescale_L > 0.0) c.rescale_L = a.rescale_L;
  c.audit_pairs = a.audit_pairs;
  return c;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
}

const char* verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

int cmd_run(const RunArgs& a, const std::string& out, const std::string& format,
            const std::string& transcript_path, const std::string& instance_path,
            bool dump_vectors) {
  const Experiment ex = run_experiment_full(to_config(a));
  const ReportFormat fmt = format_from_string(format);
  if (out.empty()) {
    std::cout << emit_report(ex.report, fmt);
  } else {
    write_report(ex.report, fmt, out);
  }
  if (!transcript_path.empty()) write_text(transcript_path, to_jsonl(ex.transcript, dump_vectors));
  if (!instance_path.empty()) write_text(instance_path, to_json(ex.instance).dump() + "\n");
  const RunSummary& s = ex.report.summary;
  std::cerr << "summary: " << verdict(s.pass) << " min_gap=" << s.min_gap
            << " floor_held=" << s.floor_held << " audits_ok=" << s.audits_ok
            << " min_value_ok=" << ex.report.min_value.pass;
  if (s.event_e_held) std::cerr << " event_e_held=" << *s.event_e_held;
  std::cerr << '\n';
  return s.pass ? 0 : 1;
}

int cmd_verify(RunArgs a, const std::string& suite) {
  a.mode = "det";
  const bool all = suite == "all";
  if (suite != "lipschitz") a.audit_pairs = all ? a.audit_pairs : 0;
  const Experiment ex = run_experiment_full(to_config(a));
  bool pass = true;
  if (all || suite == "lipschitz") {
    for (const auto& audit : ex.report.lipschitz_audit) {
      std::cout << "lipschitz order " << audit.order << ": " << verdict(audit.pass)
                << " max_ratio=" << audit.max_ratio << " bound=" << audit.bound
                << " slack=" << audit.slack << '\n';
      pass = pass && audit.pass;
    }
  }
  if (all || suite == "invariance") {
    const MCBudget mc{std::max<std::size_t>(1000, a.mc_samples / 10), a.seed};
    const InvarianceResult inv = verify_invariance(ex.instance, 32, mc);
    std::cout << "invariance: " << verdict(inv.pass) << " points=" << inv.points
              << " exact_pairs=" << inv.exact_pairs << " max_exact_diff=" << inv.max_exact_diff
              << " max_sigma_ratio=" << inv.max_sigma_ratio << '\n';
    pass = pass && inv.pass;
  }
  if (all || suite == "locality") {
    const LocalityResult loc = verify_locality(ex);
    std::cout << "locality: " << verdict(loc.pass) << " queries=" << loc.queries
              << " regime_mismatches=" << loc.regime_mismatches
              << " consistency_ok=" << loc.consistency_ok
              << " max_later_inner=" << loc.max_later_inner << '\n';
    pass = pass && loc.pass;
  }
  return pass ? 0 : 1;
}

int cmd_sweep(const RunArgs& a, int n_seeds) {
  const SweepSummary s = run_sweep(to_config(a), n_seeds);
  for (std::size_t i = 0; i < s.per_run.size(); ++i) {
    const RunSummary& r = s.per_run[i];
    std::cout << "seed " << a.seed + i << ": min_gap=" << r.min_gap
              << " floor_held=" << r.floor_held;
    if (r.event_e_held) std::cout << " event_e_held=" << *r.event_e_held;
    if (r.first_violation) std::cout << " first_violation=" << *r.first_violation;
    std::cout << '\n';
  }
  std::cout << "sweep: " << verdict(s.pass) << " runs=" << s.runs
            << " event_held=" << s.event_held << " required_fraction=" << s.required_fraction
            << " floor_ok_when_held=" << s.floor_ok_when_held << '\n';
  return s.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adversarial lower-bound oracle for k-th order convex optimization"};
  app.require_subcommand(1);

  RunArgs run_args;
  std::string out, format = "csv", transcript, instance;
  bool dump_vectors = false;
  auto* run = app.add_subcommand("run", "run one optimizer against the oracle");
  add_run_options(run, run_args);
  run->add_option("--out", out, "report path (stdout when absent)");
  run->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--transcript", transcript, "write the query transcript as JSON lines");
  run->add_option("--instance", instance, "write the final instance as JSON");
  run->add_flag("--dump-vectors", dump_vectors, "include query and gradient vectors");

  RunArgs verify_args;
  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "check smoothness, invariance and locality");
  verify->add_option("--suite", suite)
      ->check(CLI::IsMember({"lipschitz", "invariance", "locality", "all"}));
  verify->add_option("--T", verify_args.T)->check(CLI::PositiveNumber);
  verify->add_option("--k", verify_args.k)->check(CLI::PositiveNumber);
  verify->add_option("--seed", verify_args.seed);
  verify->add_option("--mc-samples", verify_args.mc_samples);
  verify->add_option("--audit-pairs", verify_args.audit_pairs);

  RunArgs sweep_args;
  sweep_args.mode = "rand";
  sweep_args.T = 4;
  int seeds = 20;
  auto* sweep = app.add_subcommand("sweep", "repeat a run over consecutive seeds");
  add_run_options(sweep, sweep_args);
  sweep->add_option("--seeds", seeds, "number of seeds")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(run_args, out, format, transcript, instance, dump_vectors);
    if (*verify) return cmd_verify(verify_args, suite);
    return cmd_sweep(sweep_args, seeds);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
