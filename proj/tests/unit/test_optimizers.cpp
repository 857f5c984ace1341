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

#include "doctest.h"

#include "resistor/optimizers.hpp"

using namespace resistor;

namespace {

Vector unit(std::size_t d, std::size_t i) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d));
  v[static_cast<Eigen::Index>(i)] = 1.0;
  return v;
}

// f(x) = (x - c)' diag(w) (x - c) / 2, answered exactly.
class QuadraticOracle : public Oracle {
 public:
  QuadraticOracle(Vector center, Vector weights, int budget)
      : Oracle(Mode::Deterministic, budget), c_(std::move(center)), w_(std::move(weights)) {}
  std::size_t dimension() const override { return static_cast<std::size_t>(c_.size()); }
  int order() const override { return 1; }

 protected:
  Answer answer(const Vector& x, int) override {
    Answer a;
    const Vector diff = x - c_;
    a.response.gradient = w_.cwiseProduct(diff);
    a.response.value = 0.5 * diff.dot(a.response.gradient);
    return a;
  }

 private:
  Vector c_, w_;
};

// Fixed-step gradient descent run far past convergence.
Vector brute_force_minimizer(const Vector& c, const Vector& w) {
  Vector x = Vector::Zero(c.size());
  for (int t = 0; t < 20000; ++t) x = project_ball(x - w.cwiseProduct(x - c));
  return x;
}

}  // namespace

TEST_SUITE("optimizers") {
  TEST_CASE("project_ball") {
    const Vector half = 0.5 * unit(3, 1);
    CHECK(project_ball(half) == half);
    const Vector p = project_ball(2.0 * unit(3, 2));
    CHECK(p.norm() == doctest::Approx(1.0));
    CHECK(p[2] == doctest::Approx(1.0));
    CHECK(project_ball(Vector::Zero(3)) == Vector::Zero(3));
  }

  TEST_CASE("subgradient on one piece walks against it") {
    const InstanceParams params = params_deterministic(16, 1);
    InstanceOracle oracle(HardInstance(params, {unit(params.d, 0)}), {1000, 0}, 16);
    OptimizerConfig c = default_config(Method::ProjectedSubgradient, params);
    c.step = 0.1;
    const Transcript t = run_projected_subgradient(oracle, c);
    double last = 1.0;
    for (const auto& e : t.entries) {
      CHECK(e.query[0] <= last);
      CHECK(std::abs(e.query.norm() - std::abs(e.query[0])) < 1e-15);
      last = e.query[0];
    }
    CHECK(last < -0.5);
  }

  TEST_CASE("subgradient against the adaptive oracle keeps the floor") {
    const InstanceParams p = params_deterministic(16, 1);
    AdaptiveOracle oracle(p, 8, {1000, 8});
    const Transcript t = run_optimizer(oracle, default_config(Method::ProjectedSubgradient, p));
    const FinalizeResult fin = oracle.finalize();
    for (const auto& e : t.entries) {
      CHECK(suboptimality_certificate(fin.instance, e.query) >= 0.125);
    }
    AdaptiveOracle again(p, 8, {1000, 8});
    const Transcript u = run_optimizer(again, default_config(Method::ProjectedSubgradient, p));
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(t.entries[i].query == u.entries[i].query);
  }

  TEST_CASE("accelerated gradient on a quadratic") {
    Vector c(3), w(3);
    c << 0.3, -0.2, 0.4;
    w << 1.0, 0.5, 0.25;
    QuadraticOracle oracle(c, w, 200);
    OptimizerConfig cfg;
    cfg.method = Method::AcceleratedGradient;
    cfg.budget = 200;
    cfg.step = 1.0;
    cfg.step_rule = StepRule::Constant;
    const Transcript t = run_accelerated_gradient(oracle, cfg);
    const Vector target = brute_force_minimizer(c, w);
    CHECK((target - c).norm() < 1e-12);
    CHECK((t.entries.back().query - target).norm() < 1e-6);
  }

  TEST_CASE("accelerated gradient against the adaptive oracle keeps the floor") {
    const InstanceParams p = params_deterministic(16, 1);
    AdaptiveOracle oracle(p, 2, {2000, 2});
    const Transcript t = run_optimizer(oracle, default_config(Method::AcceleratedGradient, p));
    const FinalizeResult fin = oracle.finalize();
    CHECK(fin.report.all_equal);
    for (const auto& e : t.entries) {
      CHECK(suboptimality_certificate(fin.instance, e.query) >= 0.125);
    }
  }

  TEST_CASE("zero momentum is projected gradient descent") {
    const InstanceParams p = params_deterministic(9, 1);
    OptimizerConfig agd = default_config(Method::AcceleratedGradient, p);
    agd.momentum = 0.0;
    agd.step = 0.05;
    OptimizerConfig psg = default_config(Method::ProjectedSubgradient, p);
    psg.step = 0.05;
    psg.step_rule = StepRule::Constant;
    AdaptiveOracle a(p, 4, {1000, 4});
    AdaptiveOracle b(p, 4, {1000, 4});
    const Transcript ta = run_optimizer(a, agd);
    const Transcript tb = run_optimizer(b, psg);
    for (std::size_t i = 0; i < ta.size(); ++i) {
      CHECK(ta.entries[i].query == tb.entries[i].query);
    }
  }

  TEST_CASE("cubic step without curvature") {
    OracleResponse r;
    r.gradient = Vector::Zero(4);
    r.gradient << 0.3, 0.0, -0.4, 0.0;
    for (double M : {1.0, 50.0, 1e6}) {
      const Vector s = cubic_step(r, M, 200);
      // Minimizing g.s + (M/6)|s|^3 along -g gives |s| = sqrt(2|g|/M).
      const Vector expect = -std::sqrt(2.0 * 0.5 / M) * r.gradient / 0.5;
      CHECK((s - expect).norm() <= 1e-9 * expect.norm());
    }
    CHECK(cubic_step(r, 1e12, 200).norm() < 2e-6);
    r.gradient.setZero();
    CHECK(cubic_step(r, 1.0, 10).norm() == 0.0);
  }

  TEST_CASE("cubic step with curvature solves the model") {
    OracleResponse r;
    r.gradient = Vector::Zero(2);
    r.gradient << 1.0, -0.5;
    r.frame = std::make_shared<const OrthonormalBasis>(2, std::vector<Vector>{unit(2, 0),
                                                                              unit(2, 1)});
    r.higher.push_back({2, {2.0, 0.5, 0.5, 1.0}, 0.0});
    const double M = 3.0;
    const Vector s = cubic_step(r, M, 5000);
    const Vector grad = r.gradient + r.hessian_times(s) + 0.5 * M * s.norm() * s;
    CHECK(grad.norm() < 1e-8);
  }

  TEST_CASE("cubic Newton against the adaptive oracle keeps the floor") {
    const InstanceParams p = params_deterministic(9, 2);
    AdaptiveOracle oracle(p, 1, {2000, 1});
    const Transcript t = run_optimizer(oracle, default_config(Method::CubicNewton, p));
    const FinalizeResult fin = oracle.finalize();
    for (const auto& e : t.entries) {
      CHECK(suboptimality_certificate(fin.instance, e.query) >= 1.0 / 6.0);
    }
    AdaptiveOracle first_order(params_deterministic(9, 1), 1, {1000, 1});
    CHECK_THROWS_AS(run_cubic_newton(first_order, default_config(Method::CubicNewton, p)),
                    std::invalid_argument);
  }

  TEST_CASE("configuration checks") {
    OptimizerConfig c;
    c.budget = 0;
    CHECK_THROWS(check_config(c));
    c.budget = 1;
    c.step = -1;
    CHECK_THROWS(check_config(c));
    CHECK(method_from_string("agd") == Method::AcceleratedGradient);
    CHECK(std::string(to_string(Method::CubicNewton)) == "cubic");
    CHECK_THROWS(method_from_string("newton"));
  }
}
