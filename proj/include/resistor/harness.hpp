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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "resistor/evaluator.hpp"
#include "resistor/instance.hpp"
#include "resistor/optimizers.hpp"
#include "resistor/oracles.hpp"

namespace resistor {

struct RunConfig {
  Mode mode = Mode::Deterministic;
  int T = 16;
  int k = 1;
  Method method = Method::ProjectedSubgradient;
  std::uint64_t seed = 0;
  double fail_prob = 0.2;               // randomized mode
  std::size_t mc_samples = 100000;
  std::optional<double> rescale_L;      // report h = s f with s from rescale_to_smoothness
  std::optional<std::size_t> dimension; // deterministic mode, must exceed T
  int audit_pairs = 32;                 // per audited order; 0 skips the audit
  std::optional<OptimizerConfig> optimizer;  // defaults from default_config()
};

struct ReportRow {
  int iter = 0;
  double certified_gap = 0.0;
  double floor = 0.0;
  Regime regime = Regime::ExactAffine;
  double event_e_margin = 0.0;
  double value = 0.0;
  double grad_norm = 0.0;

  bool operator==(const ReportRow&) const = default;
};

struct LipschitzAudit {
  int order = 0;
  int pairs = 0;
  double max_ratio = 0.0;
  double bound = 0.0;
  // MC slack of the pair that came closest to the bound.
  double slack = 0.0;
  bool pass = true;

  bool operator==(const LipschitzAudit&) const = default;
};

struct MinValueCheck {
  double estimate = 0.0;
  double std_error = 0.0;
  double bound = 0.0;  // -1/sqrt r + gamma + k delta, unnormalized
  bool pass = true;

  bool operator==(const MinValueCheck&) const = default;
};

struct RunSummary {
  bool pass = true;
  bool floor_held = true;
  double min_gap = 0.0;
  bool consistency_ok = true;          // deterministic mode replay
  std::optional<bool> event_e_held;    // randomized mode
  std::optional<int> first_violation;
  bool audits_ok = true;

  bool operator==(const RunSummary&) const = default;
};

struct RunReport {
  Mode mode = Mode::Deterministic;
  int T = 0;
  int k = 0;
  Method method = Method::ProjectedSubgradient;
  std::uint64_t seed = 0;
  double scale = 1.0;
  std::vector<ReportRow> rows;
  std::vector<LipschitzAudit> lipschitz_audit;
  MinValueCheck min_value;
  RunSummary summary;

  bool operator==(const RunReport&) const = default;
};

struct Experiment {
  RunReport report;
  Transcript transcript;
  HardInstance instance;
  ConsistencyReport consistency;
};

InstanceParams params_for(const RunConfig& config);

Experiment run_experiment_full(const RunConfig& config);
RunReport run_experiment(const RunConfig& config);

// Orders 0 and 1 use value and gradient estimates; order 2 compares the
// difference-quotient Hessians. Bound (r/delta)^order. Orders above 2, or
// above k, throw std::invalid_argument.
LipschitzAudit verify_lipschitz(const HardInstance& instance, int order, int n_pairs,
                                const MCBudget& budget);

struct InvarianceResult {
  bool pass = true;
  int points = 0;
  int exact_pairs = 0;
  double max_exact_diff = 0.0;
  // max |f(x) - f(x+y)| / combined stderr over Monte-Carlo pairs
  double max_sigma_ratio = 0.0;
};

// Compares answers at x and x + y with y orthogonal to the pieces: exact
// answers must agree to 1e-12, Monte-Carlo ones within 6 combined stderr.
InvarianceResult verify_invariance(const HardInstance& instance, int n_points,
                                   const MCBudget& budget);

struct LocalityResult {
  bool pass = true;
  int queries = 0;
  int regime_mismatches = 0;
  bool consistency_ok = true;
  double max_later_inner = 0.0;
};

// Recomputes every recorded regime from the instance truncated to the
// pieces that existed at query time and checks the replay report.
LocalityResult verify_locality(const Experiment& experiment);

struct SweepSummary {
  int runs = 0;
  int event_held = 0;
  int floor_ok_when_held = 0;
  double required_fraction = 0.0;
  bool pass = true;
  std::vector<RunSummary> per_run;
};

// Seeds config.seed, config.seed + 1, ... Randomized batches pass when the
// fraction of runs with the event held is at least
// (1 - p) - 3 sqrt(p (1 - p) / N) and every such run kept the floor.
SweepSummary run_sweep(const RunConfig& config, int n_seeds);

// Point near the intersection of pieces i and j (1-based) where the two
// tie at height k delta and every other piece sits at zero.
Vector tie_point(const HardInstance& instance, int i, int j);

enum class ReportFormat { Csv, Json };
ReportFormat format_from_string(const std::string& text);

std::string emit_report(const RunReport& report, ReportFormat format);
void write_report(const RunReport& report, ReportFormat format, const std::string& path);
nlohmann::json to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::json& j);

}  // namespace resistor
