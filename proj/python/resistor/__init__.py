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

"""Adversarial lower-bound oracle for k-th order convex optimization."""

from ._core import (
    AdaptiveOracle,
    HardInstance,
    InstanceParams,
    MCBudget,
    Method,
    Mode,
    OracleResponse,
    RandomizedOracle,
    Regime,
    RunReport,
    emit_report,
    params_deterministic,
    params_randomized,
    randomized_dimension,
    randomized_instance,
    rescale_to_smoothness,
    run_experiment,
    suboptimality_certificate,
    validate,
    worst_case_certificate,
)

__all__ = [
    "AdaptiveOracle",
    "HardInstance",
    "InstanceParams",
    "MCBudget",
    "Method",
    "Mode",
    "OracleResponse",
    "RandomizedOracle",
    "Regime",
    "RunReport",
    "emit_report",
    "params_deterministic",
    "params_randomized",
    "randomized_dimension",
    "randomized_instance",
    "rescale_to_smoothness",
    "run_experiment",
    "suboptimality_certificate",
    "validate",
    "worst_case_certificate",
]
