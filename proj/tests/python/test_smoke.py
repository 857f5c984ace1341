# Copyright 2026 The Resistor Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import math

import numpy as np
import pytest

import resistor


def test_schedule_values():
    p = resistor.params_deterministic(9, 2)
    assert p.gamma == pytest.approx(1 / 9)
    assert p.delta == pytest.approx(1 / 486)
    assert p.d == 10
    assert resistor.validate(p) == []
    assert resistor.randomized_dimension(4, 0.2) == 224364


def test_adaptive_oracle_roundtrip():
    p = resistor.params_deterministic(4, 1)
    oracle = resistor.AdaptiveOracle(p, seed=3, budget=resistor.MCBudget(2000, 3))
    x = np.zeros(p.d)
    for _ in range(p.T):
        r = oracle.query(x)
        assert r.regime == resistor.Regime.ExactAffine
        x = x - 0.3 * r.gradient
        x /= max(1.0, np.linalg.norm(x))
    instance, report = oracle.finalize()
    assert report["all_equal"]
    assert len(instance) == 4
    dirs = np.array(instance.directions)
    assert np.allclose(dirs @ dirs.T, np.eye(4), atol=1e-10)
    lines = oracle.transcript_jsonl().splitlines()
    assert [json.loads(s)["i"] for s in lines] == [1, 2, 3, 4]
    back = resistor.HardInstance.from_json(instance.to_json())
    assert np.array_equal(np.array(back.directions), dirs)
    with pytest.raises(ValueError):
        resistor.AdaptiveOracle(resistor.params_randomized(4, 1, 0.2))


def test_tie_answer_has_hessian():
    p = resistor.params_deterministic(4, 2)
    dirs = [np.eye(p.d)[i] for i in range(4)]
    inst = resistor.HardInstance(p, dirs)
    shifts = inst.shifts
    x = np.zeros(p.d)
    x[0] = 0.2 - shifts[0]
    x[1] = 0.2 - shifts[1]
    r = inst.answer(x, resistor.MCBudget(5000, 1), 1)
    assert r.regime == resistor.Regime.MonteCarlo
    h = r.higher[0]
    assert h.shape == (2, 2)
    assert np.allclose(h, h.T)


def test_run_experiment_and_report():
    report = resistor.run_experiment(T=9, k=2, method="cubic", mc_samples=5000, audit_pairs=4)
    assert report.passed
    assert min(report.certified_gaps) >= 1 / 6
    csv = resistor.emit_report(report, "csv")
    assert csv.splitlines()[0] == "iter,certified_gap,floor,regime,event_e_margin,value,grad_norm"
    assert len(csv.splitlines()) == 10
    assert json.loads(report.to_json())["summary"]["pass"]


def test_rescaled_floor():
    assert resistor.rescale_to_smoothness(1.0, 1, 4) == pytest.approx(0.003125)
    report = resistor.run_experiment(T=4, k=1, rescale_L=1.0, mc_samples=2000, audit_pairs=2)
    assert report.floor == pytest.approx(0.00078125, rel=1e-14)
    assert math.isclose(report.scale, 0.003125)
