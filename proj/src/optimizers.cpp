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

#include "resistor/optimizers.hpp"

#include <cmath>
#include <stdexcept>

namespace resistor {

const char* to_string(Method method) {
  switch (method) {
    case Method::ProjectedSubgradient: return "psg";
    case Method::AcceleratedGradient: return "agd";
    case Method::CubicNewton: return "cubic";
  }
  return "?";
}

Method method_from_string(const std::string& text) {
  if (text == "psg") return Method::ProjectedSubgradient;
  if (text == "agd") return Method::AcceleratedGradient;
  if (text == "cubic") return Method::CubicNewton;
  throw std::invalid_argument("unknown method '" + text + "'");
}

void check_config(const OptimizerConfig& c) {
  if (c.budget < 1) throw std::invalid_argument("optimizer: budget must be >= 1");
  if (!(c.step > 0.0)) throw std::invalid_argument("optimizer: step must be positive");
  if (!(c.momentum >= 0.0)) throw std::invalid_argument("optimizer: momentum must be >= 0");
  if (!(c.cubic_M > 0.0)) throw std::invalid_argument("optimizer: cubic_M must be positive");
  if (c.inner_steps < 1) throw std::invalid_argument("optimizer: inner_steps must be >= 1");
}

OptimizerConfig default_config(Method method, const InstanceParams& params) {
  OptimizerConfig c;
  c.method = method;
  c.budget = params.T;
  const double lipschitz = static_cast<double>(params.T) / params.delta;
  if (method == Method::AcceleratedGradient) {
    c.step = 1.0 / lipschitz;
    c.step_rule = StepRule::Constant;
  }
  if (method == Method::CubicNewton) c.cubic_M = lipschitz * lipschitz;
  return c;
}

Vector project_ball(const Vector& x) {
  const double norm = x.norm();
  if (norm <= 1.0) return x;
  return x / norm;
}

Transcript run_projected_subgradient(Oracle& oracle, const OptimizerConfig& config) {
  check_config(config);
  Vector x = Vector::Zero(static_cast<Eigen::Index>(oracle.dimension()));
  for (int t = 1; t <= config.budget; ++t) {
    const OracleResponse r = oracle.query(x);
    const double eta = config.step_rule == StepRule::InverseSqrt
                           ? config.step / std::sqrt(static_cast<double>(t))
                           : config.step;
    x = project_ball(x - eta * r.gradient);
  }
  return oracle.transcript();
}

Transcript run_accelerated_gradient(Oracle& oracle, const OptimizerConfig& config) {
  check_config(config);
  const auto d = static_cast<Eigen::Index>(oracle.dimension());
  Vector x_prev = Vector::Zero(d);
  Vector y = Vector::Zero(d);
  for (int t = 1; t <= config.budget; ++t) {
    const OracleResponse r = oracle.query(y);
    const Vector x = project_ball(y - config.step * r.gradient);
    const double beta = config.momentum * (t - 1.0) / (t + 2.0);
    y = project_ball(x + beta * (x - x_prev));
    x_prev = x;
  }
  return oracle.transcript();
}

Vector cubic_step(const OracleResponse& response, double M, int inner_steps) {
  const Vector& g = response.gradient;
  const double g_norm = g.norm();
  Vector s = Vector::Zero(g.size());
  if (g_norm == 0.0) return s;
  double h_norm = 0.0;
  if (!response.higher.empty() && !response.higher.front().is_zero()) {
    for (double c : response.higher.front().coords) h_norm += c * c;
    h_norm = std::sqrt(h_norm);
  }
  // Every minimizer satisfies (M/2)|s|^2 <= |g| + |H||s|.
  const double radius = (h_norm + std::sqrt(h_norm * h_norm + 2.0 * M * g_norm)) / M;
  const double eta = 1.0 / (h_norm + M * radius);
  for (int it = 0; it < inner_steps; ++it) {
    const Vector grad = g + response.hessian_times(s) + 0.5 * M * s.norm() * s;
    s -= eta * grad;
  }
  return s;
}

Transcript run_cubic_newton(Oracle& oracle, const OptimizerConfig& config) {
  check_config(config);
  if (oracle.order() < 2) {
    throw std::invalid_argument("cubic Newton needs an oracle of order >= 2");
  }
  Vector x = Vector::Zero(static_cast<Eigen::Index>(oracle.dimension()));
  for (int t = 1; t <= config.budget; ++t) {
    const OracleResponse r = oracle.query(x);
    x = project_ball(x + cubic_step(r, config.cubic_M, config.inner_steps));
  }
  return oracle.transcript();
}

Transcript run_optimizer(Oracle& oracle, const OptimizerConfig& config) {
  switch (config.method) {
    case Method::ProjectedSubgradient: return run_projected_subgradient(oracle, config);
    case Method::AcceleratedGradient: return run_accelerated_gradient(oracle, config);
    case Method::CubicNewton: return run_cubic_newton(oracle, config);
  }
  throw std::invalid_argument("run_optimizer: unknown method");
}

}  // namespace resistor
