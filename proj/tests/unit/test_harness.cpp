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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "resistor/harness.hpp"

using namespace resistor;

namespace {

RunConfig det_config(int T, int k, Method method, std::uint64_t seed = 0) {
  RunConfig c;
  c.T = T;
  c.k = k;
  c.method = method;
  c.seed = seed;
  c.mc_samples = 20000;
  c.audit_pairs = 8;
  return c;
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char ch : text) n += ch == '\n';
  return n;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("deterministic run keeps the floor") {
    RunConfig c = det_config(16, 1, Method::ProjectedSubgradient);
    c.mc_samples = 100000;
    const RunReport r = run_experiment(c);
    REQUIRE(r.rows.size() == 16);
    for (const auto& row : r.rows) {
      CHECK(row.certified_gap >= 0.125);
      CHECK(row.floor == 0.125);
    }
    CHECK(r.summary.pass);
    CHECK(r.summary.floor_held);
    CHECK(r.summary.consistency_ok);
    CHECK(r.min_value.pass);
    CHECK(r.lipschitz_audit.size() == 2);
  }

  TEST_CASE("rescaled run") {
    RunConfig c = det_config(4, 1, Method::ProjectedSubgradient);
    const RunReport plain = run_experiment(c);
    c.rescale_L = 1.0;
    const RunReport scaled = run_experiment(c);
    CHECK(scaled.scale == doctest::Approx(0.003125).epsilon(1e-15));
    for (const auto& row : scaled.rows) {
      CHECK(row.floor == doctest::Approx(0.00078125).epsilon(1e-15));
    }
    REQUIRE(scaled.lipschitz_audit.size() == 2);
    CHECK(scaled.lipschitz_audit[1].bound == plain.lipschitz_audit[1].bound * scaled.scale);
    CHECK(scaled.lipschitz_audit[1].max_ratio ==
          plain.lipschitz_audit[1].max_ratio * scaled.scale);
    CHECK(scaled.rows[0].certified_gap == plain.rows[0].certified_gap * scaled.scale);
  }

  TEST_CASE("reports replay byte for byte") {
    const RunConfig c = det_config(9, 2, Method::AcceleratedGradient, 12);
    const std::string a = emit_report(run_experiment(c), ReportFormat::Json);
    const std::string b = emit_report(run_experiment(c), ReportFormat::Json);
    CHECK(a == b);
  }

  TEST_CASE("csv and json emission") {
    RunReport empty;
    CHECK(emit_report(empty, ReportFormat::Csv) ==
          "iter,certified_gap,floor,regime,event_e_margin,value,grad_norm\n");

    const RunReport r = run_experiment(det_config(16, 1, Method::ProjectedSubgradient));
    const std::string csv = emit_report(r, ReportFormat::Csv);
    CHECK(count_lines(csv) == 17);
    CHECK(csv.back() == '\n');

    const std::string json = emit_report(r, ReportFormat::Json);
    CHECK(json.back() == '\n');
    CHECK(report_from_json(nlohmann::json::parse(json)) == r);

    const std::string path =
        (std::filesystem::temp_directory_path() / "resistor_report_test.csv").string();
    write_report(r, ReportFormat::Csv, path);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == csv);
    in.close();
    std::filesystem::remove(path);
    CHECK_THROWS(write_report(r, ReportFormat::Csv, "/nonexistent/dir/report.csv"));
    CHECK(format_from_string("json") == ReportFormat::Json);
    CHECK_THROWS(format_from_string("xml"));
  }

  TEST_CASE("lipschitz audits") {
    const Experiment ex = run_experiment_full(det_config(9, 2, Method::ProjectedSubgradient, 4));
    const MCBudget mc{5000, 4};
    const LipschitzAudit a0 = verify_lipschitz(ex.instance, 0, 16, mc);
    CHECK(a0.bound == 1.0);
    CHECK(a0.pass);
    CHECK(a0.max_ratio <= 1.0 + a0.slack + 1e-12);

    const LipschitzAudit a1 = verify_lipschitz(ex.instance, 1, 16, mc);
    CHECK(a1.bound == doctest::Approx(4374.0));
    CHECK(a1.bound <= 20.0 * std::pow(9.0, 2.5));
    CHECK(a1.max_ratio <= a1.bound);
    CHECK(a1.pass);

    const LipschitzAudit a2 = verify_lipschitz(ex.instance, 2, 8, mc);
    CHECK(a2.pass);

    CHECK_THROWS_AS(verify_lipschitz(ex.instance, 3, 4, mc), std::invalid_argument);
    const Experiment k1 = run_experiment_full(det_config(4, 1, Method::ProjectedSubgradient));
    CHECK_THROWS_AS(verify_lipschitz(k1.instance, 2, 4, mc), std::invalid_argument);
  }

  TEST_CASE("one-piece gradients are constant") {
    const InstanceParams p = params_deterministic(4, 2);
    Vector a = Vector::Zero(5);
    a[1] = 1.0;
    const HardInstance one(p, {a});
    const LipschitzAudit audit = verify_lipschitz(one, 1, 16, {2000, 1});
    CHECK(audit.max_ratio < 1e-12);
  }

  TEST_CASE("invariance") {
    const Experiment ex = run_experiment_full(det_config(9, 2, Method::ProjectedSubgradient, 5));
    const InvarianceResult inv = verify_invariance(ex.instance, 16, {10000, 5});
    CHECK(inv.pass);
    CHECK(inv.exact_pairs > 0);
    CHECK(inv.exact_pairs < 16);
    CHECK(inv.max_exact_diff <= 1e-12);

    InstanceParams tight = params_deterministic(4, 1);
    tight.d = 4;
    std::vector<Vector> dirs;
    for (int i = 0; i < 4; ++i) dirs.push_back(Eigen::VectorXd::Unit(4, i));
    CHECK_THROWS_AS(verify_invariance(HardInstance(tight, dirs), 4, {100, 1}),
                    std::invalid_argument);
  }

  TEST_CASE("locality") {
    const Experiment ex =
        run_experiment_full(det_config(16, 1, Method::AcceleratedGradient, 3));
    const LocalityResult loc = verify_locality(ex);
    CHECK(loc.pass);
    CHECK(loc.queries == 16);
    CHECK(loc.regime_mismatches == 0);
  }

  TEST_CASE("tie point") {
    const Experiment ex = run_experiment_full(det_config(4, 1, Method::ProjectedSubgradient));
    const auto& p = ex.instance.params();
    const PieceValues pv = piece_values(view_of(ex.instance), tie_point(ex.instance, 2, 4));
    CHECK(pv.values[1] == doctest::Approx(p.k * p.delta));
    CHECK(pv.values[3] == doctest::Approx(p.k * p.delta));
    CHECK(std::abs(pv.values[0]) < 1e-12);
    CHECK(std::abs(pv.values[2]) < 1e-12);
    CHECK_THROWS(tie_point(ex.instance, 1, 1));
    CHECK_THROWS(tie_point(ex.instance, 0, 2));
  }

  TEST_CASE("params_for and invalid configs") {
    RunConfig c = det_config(4, 1, Method::ProjectedSubgradient);
    CHECK(params_for(c).d == 5);
    c.dimension = 9;
    CHECK(params_for(c).d == 9);
    c.mode = Mode::Randomized;
    CHECK(params_for(c).d == randomized_dimension(4, 0.2));
    RunConfig bad = det_config(2, 1, Method::ProjectedSubgradient);
    CHECK_THROWS(run_experiment(bad));
    RunConfig cubic = det_config(4, 1, Method::CubicNewton);
    CHECK_THROWS(run_experiment(cubic));
  }

  TEST_CASE("deterministic sweep") {
    const SweepSummary s = run_sweep(det_config(4, 1, Method::ProjectedSubgradient), 3);
    CHECK(s.runs == 3);
    CHECK(s.event_held == 3);
    CHECK(s.pass);
    CHECK(s.required_fraction == 1.0);
  }
}
