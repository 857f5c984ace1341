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
#include <string>

#include "resistor/geometry.hpp"
#include "resistor/oracles.hpp"

namespace resistor {

enum class Method { ProjectedSubgradient, AcceleratedGradient, CubicNewton };

const char* to_string(Method method);
Method method_from_string(const std::string& text);

enum class StepRule { InverseSqrt, Constant };

struct OptimizerConfig {
  Method method = Method::ProjectedSubgradient;
  int budget = 1;
  // Subgradient: eta_t = step / sqrt(t) (or step when Constant).
  // Accelerated: eta = step.
  double step = 1.0;
  StepRule step_rule = StepRule::InverseSqrt;
  // Scales the Nesterov coefficient (t-1)/(t+2); 0 gives plain projected
  // gradient descent.
  double momentum = 1.0;
  // Cubic regularization weight M and inner gradient iterations.
  double cubic_M = 1.0;
  int inner_steps = 200;
  std::uint64_t seed = 0;
};

// Throws std::invalid_argument for a non-positive budget or step parameter.
void check_config(const OptimizerConfig& config);

// Conservative defaults against an instance with these params: step 1 for
// subgradient, 1/L with L = T/delta for accelerated, M = (T/delta)^2 for cubic.
OptimizerConfig default_config(Method method, const InstanceParams& params);

Vector project_ball(const Vector& x);

// Each runner starts at the origin, issues config.budget queries and returns
// the oracle's transcript.
Transcript run_projected_subgradient(Oracle& oracle, const OptimizerConfig& config);
Transcript run_accelerated_gradient(Oracle& oracle, const OptimizerConfig& config);
Transcript run_cubic_newton(Oracle& oracle, const OptimizerConfig& config);
Transcript run_optimizer(Oracle& oracle, const OptimizerConfig& config);

// Approximate minimizer of g.s + 1/2 s.Hs + (M/6)|s|^3 by gradient descent
// from s = 0, with H given by the response's order-2 tensor.
Vector cubic_step(const OracleResponse& response, double M, int inner_steps);

}  // namespace resistor
