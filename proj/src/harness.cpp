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

#include "resistor/harness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace resistor {
namespace {

// Mixes (seed, salt) into an independent 64-bit seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Vector random_ball_point(std::size_t d, double radius, Stream& rng) {
  Vector x(static_cast<Eigen::Index>(d));
  sample_ball_into(x, rng);
  return radius * x;
}

Vector random_direction_in(const OrthonormalBasis& basis, Stream& rng) {
  return basis.lift(sample_sphere(static_cast<int>(basis.size()), rng));
}

struct AuditPair {
  Vector x;
  Vector y;
  double distance = 0.0;
};

// Pairs alternate between uniform points and points next to a two-piece tie,
// separated by 10 to 40 delta along a direction inside the pieces' span.
AuditPair audit_pair(const HardInstance& instance, int index, Stream& rng) {
  const auto& params = instance.params();
  const int r = static_cast<int>(instance.size());
  Vector x;
  if (index % 2 == 1 && r >= 2) {
    const int i = 1 + static_cast<int>(rng.uniform() * r) % r;
    int j = 1 + static_cast<int>(rng.uniform() * (r - 1)) % (r - 1);
    if (j >= i) ++j;
    x = tie_point(instance, i, j) +
        params.delta * instance.basis().lift(sample_ball(r, rng));
  } else {
    x = random_ball_point(params.d, 0.9, rng);
  }
  const double tau = params.delta * (10.0 + 30.0 * rng.uniform());
  Vector y = x + tau * random_direction_in(instance.basis(), rng);
  const double largest = std::max(x.norm(), y.norm());
  if (largest > 0.999) {
    x *= 0.999 / largest;
    y *= 0.999 / largest;
  }
  const double distance = (x - y).norm();
  return {std::move(x), std::move(y), distance};
}

// Order-2 tensor of a response in the coordinates of `basis`.
Eigen::MatrixXd hessian_in(const OracleResponse& response, const OrthonormalBasis& basis) {
  const auto r = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(r, r);
  const DerivativeTensor& t = response.higher.front();
  if (t.is_zero() || !response.frame) return out;
  const auto m = static_cast<Eigen::Index>(response.frame->size());
  Eigen::MatrixXd q(r, m);
  for (Eigen::Index c = 0; c < m; ++c) {
    q.col(c) = basis.coords((*response.frame)[static_cast<std::size_t>(c)]);
  }
  const Eigen::Map<const Eigen::MatrixXd> h(t.coords.data(), m, m);
  return q * h * q.transpose();
}

}  // namespace

Vector tie_point(const HardInstance& instance, int i, int j) {
  const int r = static_cast<int>(instance.size());
  if (i < 1 || j < 1 || i > r || j > r || i == j) {
    throw std::invalid_argument("tie_point: need two distinct pieces");
  }
  const auto& p = instance.params();
  Eigen::VectorXd coords(r);
  for (int l = 0; l < r; ++l) coords[l] = -instance.shifts()[static_cast<std::size_t>(l)];
  coords[i - 1] += p.k * p.delta;
  coords[j - 1] += p.k * p.delta;
  return instance.basis().lift(coords);
}

InstanceParams params_for(const RunConfig& config) {
  if (config.mode == Mode::Deterministic) {
    return params_deterministic(config.T, config.k, config.dimension);
  }
  return params_randomized(config.T, config.k, config.fail_prob);
}

LipschitzAudit verify_lipschitz(const HardInstance& instance, int order, int n_pairs,
                                const MCBudget& budget) {
  const auto& params = instance.params();
  if (order < 0 || order > 2) {
    throw std::invalid_argument("verify_lipschitz: order " + std::to_string(order) +
                                " is unsupported (0, 1 or 2 only)");
  }
  if (order > params.k) {
    throw std::invalid_argument("verify_lipschitz: order must not exceed k");
  }
  if (instance.size() == 0) throw std::invalid_argument("verify_lipschitz: empty instance");
  const double denom = params.norm_denom;
  const double r = static_cast<double>(view_of(instance).smoothing_dim());
  LipschitzAudit audit;
  audit.order = order;
  audit.pairs = n_pairs;
  audit.bound = std::pow(r / params.delta, order);
  Stream rng(budget.seed, StreamPurpose::kAudit, static_cast<std::uint32_t>(order));
  double closest = -std::numeric_limits<double>::infinity();
  for (int q = 0; q < n_pairs; ++q) {
    const AuditPair pair = audit_pair(instance, q, rng);
    const auto ix = static_cast<std::uint32_t>(2 * q + 1);
    const int need = std::max(order, 1);
    const OracleResponse fx = oracle_answer(instance, pair.x, budget, ix, need);
    const OracleResponse fy = oracle_answer(instance, pair.y, budget, ix + 1, need);
    double diff = 0.0;
    double noise = 0.0;
    if (order == 0) {
      diff = std::abs(fx.value - fy.value) * denom;
      noise = 3.0 * std::hypot(fx.value_stderr, fy.value_stderr) * denom;
    } else if (order == 1) {
      diff = (fx.gradient - fy.gradient).norm() * denom;
      noise = 3.0 * std::hypot(fx.gradient_error, fy.gradient_error) * denom;
    } else {
      diff = (hessian_in(fx, instance.basis()) - hessian_in(fy, instance.basis())).norm() * denom;
      noise = (fx.higher.front().error_bound + fy.higher.front().error_bound) * denom;
    }
    const double ratio = diff / pair.distance;
    const double slack = noise / pair.distance;
    audit.max_ratio = std::max(audit.max_ratio, ratio);
    if (ratio - slack > closest) {
      closest = ratio - slack;
      audit.slack = slack;
    }
    if (ratio > audit.bound + slack) audit.pass = false;
  }
  return audit;
}

InvarianceResult verify_invariance(const HardInstance& instance, int n_points,
                                   const MCBudget& budget) {
  const auto& params = instance.params();
  if (params.d <= instance.size()) {
    throw std::invalid_argument("verify_invariance: needs d > r");
  }
  InvarianceResult result;
  result.points = n_points;
  const int r = static_cast<int>(instance.size());
  Stream rng(budget.seed, StreamPurpose::kAudit, 100);
  for (int q = 0; q < n_points; ++q) {
    Vector x;
    if (q % 2 == 1 && r >= 2) {
      x = tie_point(instance, 1 + q % r, 1 + (q + 1) % r);
      x += params.delta * instance.basis().lift(sample_ball(r, rng));
    } else {
      x = random_ball_point(params.d, 0.5, rng);
    }
    if (x.norm() > 0.5) x *= 0.5 / x.norm();
    Vector g(static_cast<Eigen::Index>(params.d));
    for (Eigen::Index e = 0; e < g.size(); ++e) g[e] = rng.normal();
    Vector y = perp_component(g, instance.basis());
    if (y.norm() > 0.0) y *= 0.5 * rng.uniform() / y.norm();
    const auto ix = static_cast<std::uint32_t>(2 * q + 1);
    const OracleResponse a = oracle_answer(instance, x, budget, ix, 1);
    const OracleResponse b = oracle_answer(instance, x + y, budget, ix + 1, 1);
    const double diff = std::abs(a.value - b.value);
    if (a.regime == Regime::ExactAffine && b.regime == Regime::ExactAffine) {
      ++result.exact_pairs;
      const double gdiff = (a.gradient - b.gradient).norm();
      result.max_exact_diff = std::max({result.max_exact_diff, diff, gdiff});
      if (diff > 1e-12 || gdiff > 1e-12) result.pass = false;
    } else {
      const double sigma = std::hypot(a.value_stderr, b.value_stderr);
      const double ratio = sigma > 0.0 ? diff / sigma : (diff == 0.0 ? 0.0 : INFINITY);
      result.max_sigma_ratio = std::max(result.max_sigma_ratio, ratio);
      if (diff > 6.0 * sigma) result.pass = false;
    }
  }
  return result;
}

LocalityResult verify_locality(const Experiment& experiment) {
  LocalityResult out;
  const HardInstance& final_instance = experiment.instance;
  out.queries = static_cast<int>(experiment.transcript.size());
  for (const auto& entry : experiment.transcript.entries) {
    const bool adaptive = experiment.transcript.mode == Mode::Deterministic;
    const std::size_t pieces = adaptive ? static_cast<std::size_t>(entry.index)
                                        : final_instance.size();
    const HardInstance at_query = final_instance.truncated(pieces);
    const bool affine = locally_affine_index(view_of(at_query), entry.query).has_value();
    const Regime expected = affine ? Regime::ExactAffine : Regime::MonteCarlo;
    if (expected != entry.flags.regime) ++out.regime_mismatches;
  }
  out.consistency_ok = experiment.consistency.all_equal;
  out.max_later_inner = experiment.consistency.max_later_inner;
  out.pass = out.regime_mismatches == 0 && out.consistency_ok && out.max_later_inner <= 1e-12;
  return out;
}

Experiment run_experiment_full(const RunConfig& config) {
  const InstanceParams params = params_for(config);
  if (const auto violations = validate(params); !violations.empty()) {
    throw std::invalid_argument("run_experiment: " + violations.front());
  }
  const MCBudget mc{config.mc_samples, config.seed};
  OptimizerConfig opt = config.optimizer.value_or(default_config(config.method, params));
  opt.method = config.method;
  if (!config.optimizer) opt.budget = params.T;
  if (opt.budget > params.T) throw std::invalid_argument("run_experiment: budget exceeds T");

  Experiment ex{RunReport{}, Transcript{}, HardInstance(params), ConsistencyReport{}};
  std::optional<EventECheck> event;
  if (params.mode == Mode::Deterministic) {
    AdaptiveOracle oracle(params, config.seed, mc);
    run_optimizer(oracle, opt);
    FinalizeResult fin = oracle.finalize();
    ex.instance = std::move(fin.instance);
    ex.consistency = std::move(fin.report);
    ex.transcript = oracle.transcript();
  } else {
    RandomizedOracle oracle(params, config.seed, mc);
    run_optimizer(oracle, opt);
    ex.instance = oracle.instance();
    ex.transcript = oracle.transcript();
    event = event_e_check(ex.transcript, params);
  }

  RunReport& report = ex.report;
  report.mode = params.mode;
  report.T = params.T;
  report.k = params.k;
  report.method = config.method;
  report.seed = config.seed;
  report.scale = config.rescale_L ? rescale_to_smoothness(*config.rescale_L, params.k, params.T)
                                  : 1.0;
  const double s = report.scale;
  const bool complete = ex.instance.complete();
  const double pieces = static_cast<double>(ex.instance.size());
  const double floor = s / (2.0 * std::sqrt(complete ? params.T : pieces));

  RunSummary& summary = report.summary;
  summary.min_gap = std::numeric_limits<double>::infinity();
  for (const auto& entry : ex.transcript.entries) {
    const double cert = complete ? suboptimality_certificate(ex.instance, entry.query)
                                 : partial_suboptimality_certificate(ex.instance, entry.query);
    ReportRow row;
    row.iter = entry.index;
    row.certified_gap = s * cert;
    row.floor = floor;
    row.regime = entry.flags.regime;
    row.event_e_margin = entry.flags.event_e_margin;
    row.value = s * entry.response.value;
    row.grad_norm = s * entry.response.gradient.norm();
    summary.min_gap = std::min(summary.min_gap, row.certified_gap);
    if (!(row.certified_gap >= row.floor)) summary.floor_held = false;
    report.rows.push_back(row);
  }
  if (report.rows.empty()) summary.min_gap = 0.0;

  const PessimalPoint hat = pessimal_point(ex.instance);
  const ValueEstimate at_hat = smoothed_value_mc(view_of(ex.instance), hat.x, mc, 0);
  report.min_value.estimate = at_hat.value;
  report.min_value.std_error = at_hat.std_error;
  report.min_value.bound = hat.upper_bound * params.norm_denom;
  report.min_value.pass =
      report.min_value.estimate <= report.min_value.bound + 3.0 * report.min_value.std_error;

  if (config.audit_pairs > 0) {
    const MCBudget audit_mc{std::max<std::size_t>(1000, config.mc_samples / 10),
                            derive_seed(config.seed, 1)};
    for (int order = 0; order <= std::min(params.k, 2); ++order) {
      LipschitzAudit audit = verify_lipschitz(ex.instance, order, config.audit_pairs, audit_mc);
      audit.max_ratio *= s;
      audit.bound *= s;
      audit.slack *= s;
      summary.audits_ok = summary.audits_ok && audit.pass;
      report.lipschitz_audit.push_back(audit);
    }
  }

  if (params.mode == Mode::Deterministic) {
    summary.consistency_ok = ex.consistency.all_equal;
    summary.pass = summary.floor_held && summary.consistency_ok;
  } else {
    summary.event_e_held = event->held;
    summary.first_violation = event->first_violation;
    summary.pass = !event->held || summary.floor_held;
  }
  summary.pass = summary.pass && summary.audits_ok && report.min_value.pass;
  return ex;
}

RunReport run_experiment(const RunConfig& config) { return run_experiment_full(config).report; }

SweepSummary run_sweep(const RunConfig& config, int n_seeds) {
  if (n_seeds < 1) throw std::invalid_argument("run_sweep: need at least one seed");
  SweepSummary out;
  bool all_pass = true;
  for (int i = 0; i < n_seeds; ++i) {
    RunConfig c = config;
    c.seed = config.seed + static_cast<std::uint64_t>(i);
    const RunReport report = run_experiment(c);
    ++out.runs;
    const bool held = report.summary.event_e_held.value_or(true);
    if (held) {
      ++out.event_held;
      if (report.summary.floor_held) ++out.floor_ok_when_held;
    }
    all_pass = all_pass && report.summary.audits_ok && report.summary.consistency_ok &&
               report.min_value.pass;
    out.per_run.push_back(report.summary);
  }
  const double n = static_cast<double>(n_seeds);
  if (config.mode == Mode::Randomized) {
    const double p = config.fail_prob;
    out.required_fraction = (1.0 - p) - 3.0 * std::sqrt(p * (1.0 - p) / n);
  } else {
    out.required_fraction = 1.0;
  }
  out.pass = all_pass && out.event_held >= out.required_fraction * n &&
             out.floor_ok_when_held == out.event_held;
  return out;
}

}  // namespace resistor
