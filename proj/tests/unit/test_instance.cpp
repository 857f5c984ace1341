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

#include "resistor/evaluator.hpp"
#include "resistor/instance.hpp"

using namespace resistor;

namespace {

Vector unit(std::size_t d, std::size_t i) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d));
  v[static_cast<Eigen::Index>(i)] = 1.0;
  return v;
}

HardInstance axis_instance(const InstanceParams& p, int r) {
  std::vector<Vector> dirs;
  for (int i = 0; i < r; ++i) dirs.push_back(unit(p.d, static_cast<std::size_t>(i)));
  return HardInstance(p, dirs);
}

}  // namespace

TEST_SUITE("instance") {
  TEST_CASE("deterministic schedule") {
    const InstanceParams p = params_deterministic(9, 2);
    CHECK(p.gamma == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
    CHECK(p.delta == doctest::Approx(1.0 / 486.0).epsilon(1e-14));
    CHECK(p.m == 9);
    CHECK(p.d == 10);
    CHECK(2 * p.k * p.delta <= p.gamma / p.m);
    CHECK(p.norm_denom == doctest::Approx(1.0 + (8.0 / 9.0) / 9.0));
    CHECK(validate(p).empty());

    const InstanceParams q = params_deterministic(4, 1);
    CHECK(q.gamma == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(q.delta == doctest::Approx(1.0 / 72.0).epsilon(1e-14));
    CHECK(q.norm_denom == doctest::Approx(1.125));

    CHECK(params_deterministic(4, 1, 12).d == 12);
    CHECK_THROWS_AS(params_deterministic(4, 1, 4), std::invalid_argument);
    CHECK_THROWS_AS(params_deterministic(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(params_deterministic(4, 0), std::invalid_argument);
  }

  TEST_CASE("deterministic schedule needs the closed-form floor to hold") {
    CHECK_THROWS_AS(params_deterministic(2, 1), std::invalid_argument);
    for (int T = 3; T <= 30; ++T) {
      for (int k = 1; k <= 3; ++k) {
        const InstanceParams p = params_deterministic(T, k);
        CHECK(validate(p).empty());
        CHECK(worst_case_certificate(p) >= 0.5 / std::sqrt(T));
      }
    }
  }

  TEST_CASE("randomized schedule") {
    const InstanceParams p = params_randomized(4, 1, 0.2);
    CHECK(p.gamma == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(p.delta == doctest::Approx(1.0 / 160.0).epsilon(1e-14));
    CHECK(p.norm_denom == 1.0);
    CHECK(p.event_threshold() == doctest::Approx(1.0 / 160.0));
    CHECK(validate(p).empty());

    CHECK(params_randomized(8, 2, 0.5).delta == doctest::Approx(0.001105).epsilon(1e-3));
  }

  TEST_CASE("randomized dimension is the smallest d meeting the concentration inequality") {
    auto holds = [](int T, double p, std::size_t d) {
      const double t = 1.0 / (20.0 * std::pow(T, 1.5));
      return T * std::exp(-t * t * static_cast<double>(d - T) / 2.0) <= p / T;
    };
    const std::size_t d = randomized_dimension(4, 0.2);
    CHECK(d == 224364);
    CHECK(holds(4, 0.2, d));
    CHECK_FALSE(holds(4, 0.2, d - 1));
    for (int T : {2, 3, 5}) {
      for (double p : {0.05, 0.5}) {
        const std::size_t n = randomized_dimension(T, p);
        CHECK(holds(T, p, n));
        CHECK_FALSE(holds(T, p, n - 1));
      }
    }
    CHECK_THROWS(randomized_dimension(4, 0.0));
    CHECK_THROWS(randomized_dimension(4, 1.0));
  }

  TEST_CASE("shift_of") {
    InstanceParams p;
    p.T = 9;
    p.m = 9;
    p.gamma = 1.0 / 9.0;
    CHECK(shift_of(p, 1) == doctest::Approx(8.0 / 81.0));
    CHECK(shift_of(p, 9) == 0.0);
    p.T = 2;
    p.m = 2;
    p.gamma = 0.1;
    CHECK(shift_of(p, 1) == doctest::Approx(0.05));
    CHECK_THROWS_AS(shift_of(p, 0), std::out_of_range);
    CHECK_THROWS_AS(shift_of(p, 3), std::out_of_range);
  }

  TEST_CASE("validate reports each violated inequality") {
    InstanceParams p;
    p.T = 9;
    p.k = 2;
    p.m = 9;
    p.d = 10;
    p.gamma = 1.0 / 9.0;
    p.delta = 0.01;
    const auto v = validate(p);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == "2kδ ≤ γ/m violated: 0.04 > 0.0123457");

    InstanceParams q = params_deterministic(4, 1);
    q.d = 3;
    const auto w = validate(q);
    REQUIRE(w.size() == 1);
    CHECK(w[0] == "d > T violated");

    InstanceParams r = params_randomized(4, 1, 0.2);
    r.d = 1000;
    CHECK(validate(r).size() == 1);
  }

  TEST_CASE("append_piece") {
    const InstanceParams p = params_deterministic(4, 1);
    HardInstance a(p);
    Stream rng(1, StreamPurpose::kDegeneratePiece, 1);
    CHECK(a.append_piece(Vector::Zero(5), rng) == PieceOrigin::Degenerate);
    CHECK(std::abs(a.pieces()[0].a.norm() - 1.0) < 1e-12);
    CHECK(a.pieces()[0].shift == doctest::Approx(0.75 / 6.0));

    HardInstance b(p);
    CHECK(b.append_piece(unit(5, 0), rng) == PieceOrigin::Extended);
    CHECK(b.pieces()[0].a == unit(5, 0));
    Vector x = (unit(5, 0) + unit(5, 1)) / std::sqrt(2.0);
    CHECK(b.append_piece(x, rng) == PieceOrigin::Extended);
    CHECK((b.pieces()[1].a - unit(5, 1)).norm() < 1e-12);
    CHECK(b.pieces()[1].index == 2);

    CHECK(b.append_piece(Vector::Zero(5), rng) == PieceOrigin::Degenerate);
    CHECK(b.append_piece(unit(5, 3), rng) == PieceOrigin::Extended);
    CHECK(b.complete());
    CHECK(b.basis().orthonormality_error() < 1e-10);
    CHECK_THROWS_AS(b.append_piece(unit(5, 4), rng), std::length_error);
    CHECK_THROWS_AS(HardInstance(p).append_piece(2.0 * unit(5, 0), rng), std::invalid_argument);
  }

  TEST_CASE("pessimal point") {
    const InstanceParams p = params_deterministic(4, 1);
    const HardInstance inst = axis_instance(p, 4);
    const PessimalPoint hat = pessimal_point(inst);
    CHECK(std::abs(hat.x.norm() - 1.0) < 1e-12);
    CHECK(piece_values(view_of(inst), hat.x).linear_max == doctest::Approx(-0.5));
    CHECK(hat.upper_bound == doctest::Approx((-0.5 + 1.0 / 6.0 + 1.0 / 72.0) / 1.125));

    const HardInstance one = axis_instance(p, 1);
    const PessimalPoint h1 = pessimal_point(one);
    CHECK(h1.x == -unit(5, 0));
    CHECK(h1.upper_bound * p.norm_denom == doctest::Approx(-1.0 + p.gamma + p.delta));
    CHECK_THROWS(pessimal_point(HardInstance(p)));
  }

  TEST_CASE("truncated keeps the leading pieces") {
    const InstanceParams p = params_deterministic(4, 1);
    const HardInstance inst = axis_instance(p, 4);
    const HardInstance two = inst.truncated(2);
    CHECK(two.size() == 2);
    CHECK(two.pieces()[1].a == inst.pieces()[1].a);
    CHECK_THROWS_AS(inst.truncated(5), std::out_of_range);
  }

  TEST_CASE("json round trip") {
    Stream rng(3, StreamPurpose::kDegeneratePiece);
    HardInstance inst(params_deterministic(4, 2, 7));
    inst.append_piece(Vector::Zero(7), rng);
    inst.append_piece(unit(7, 2) * 0.5, rng);
    const HardInstance back = instance_from_json(nlohmann::json::parse(to_json(inst).dump()));
    CHECK(back.size() == 2);
    CHECK(back.params().T == 4);
    CHECK(back.params().delta == inst.params().delta);
    for (std::size_t i = 0; i < 2; ++i) CHECK(back.pieces()[i].a == inst.pieces()[i].a);

    nlohmann::json broken = to_json(inst);
    broken["pieces"][0]["shift"] = 0.3;
    CHECK_THROWS(instance_from_json(broken));
  }

  TEST_CASE("feasibility") {
    CHECK_NOTHROW(require_feasible(unit(3, 0) * (1.0 + 5e-10), "t"));
    CHECK_THROWS_AS(require_feasible(unit(3, 0) * (1.0 + 1e-8), "t"), std::invalid_argument);
  }
}
