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

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "resistor/geometry.hpp"
#include "resistor/rng.hpp"

namespace resistor {

enum class Mode { Deterministic, Randomized };

const char* to_string(Mode mode);
Mode mode_from_string(const std::string& text);

// Numbers that define one hard function. Invariants are checked by validate();
// the two schedule constructors below always satisfy them.
struct InstanceParams {
  int T = 0;       // query budget
  int k = 0;       // derivative order (number of smoothing passes)
  int m = 0;       // shift denominator
  std::size_t d = 0;
  double gamma = 0.0;
  double delta = 0.0;
  Mode mode = Mode::Deterministic;
  double fail_prob = 0.0;   // Randomized only
  double norm_denom = 1.0;  // all oracle outputs are divided by this

  // Threshold of the small-correlation event for randomized instances.
  double event_threshold() const;
};

// gamma = 1/(3 sqrt T), delta = gamma/(3kT), m = T, d = T+1 unless a larger
// d is requested, norm_denom = 1 + (1-1/m) gamma.
InstanceParams params_deterministic(int T, int k,
                                    std::optional<std::size_t> d = std::nullopt);

// gamma = 1/(3 sqrt T), delta = 1/(20 k T^1.5), m = T, norm_denom = 1 and
// d = randomized_dimension(T, fail_prob).
InstanceParams params_randomized(int T, int k, double fail_prob);

// Smallest d with T exp(-(1/(20 T^1.5))^2 (d-T)/2) <= fail_prob/T, i.e.
// d = T + ceil(800 T^3 ln(T^2/fail_prob)).
std::size_t randomized_dimension(int T, double fail_prob);

// (1 - i/m) gamma for 1 <= i <= m.
double shift_of(const InstanceParams& params, int i);

// One message per violated inequality; empty when the parameters are valid.
std::vector<std::string> validate(const InstanceParams& params);

// Closed-form lower bound on the normalized gap of any construction point:
// (1/sqrt T - gamma - 2k delta - e)/norm_denom with e the event threshold in
// randomized mode and 0 otherwise.
double worst_case_certificate(const InstanceParams& params);

struct AffinePiece {
  Vector a;
  double shift = 0.0;
  int index = 0;  // 1-based
};

enum class PieceOrigin { Extended, Degenerate };

// The max of shifted affine pieces that is smoothed k times inside span{a_i}.
class HardInstance {
 public:
  explicit HardInstance(InstanceParams params);
  // Takes ownership of prebuilt unit vectors a_1..a_r; shifts come from the
  // params. Throws if the vectors are not orthonormal or r > T.
  HardInstance(InstanceParams params, std::vector<Vector> directions);

  const InstanceParams& params() const { return params_; }
  const std::vector<AffinePiece>& pieces() const { return pieces_; }
  const OrthonormalBasis& basis() const { return basis_; }
  const std::vector<double>& shifts() const { return shifts_; }
  std::size_t size() const { return pieces_.size(); }
  bool complete() const { return static_cast<int>(pieces_.size()) == params_.T; }

  // Adds the piece built from query x: the normalized component of x
  // orthogonal to the current pieces, or a seeded random orthogonal unit
  // vector when that component vanishes.
  PieceOrigin append_piece(const Vector& x, Stream& rng);

  // The first `count` pieces, same parameters.
  HardInstance truncated(std::size_t count) const;

 private:
  void push(Vector a);

  InstanceParams params_;
  OrthonormalBasis basis_;
  std::vector<AffinePiece> pieces_;
  std::vector<double> shifts_;
};

struct PessimalPoint {
  Vector x;
  // (-1/sqrt r + gamma + k delta)/norm_denom, an upper bound on the
  // normalized minimum.
  double upper_bound = 0.0;
};

// x_hat = -sum_i a_i / sqrt r.
PessimalPoint pessimal_point(const HardInstance& instance);

// Queries must lie in the unit ball up to this slack.
inline constexpr double kFeasibilitySlack = 1e-9;
void require_feasible(const Vector& x, const char* what);

nlohmann::json to_json(const InstanceParams& params);
InstanceParams params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const HardInstance& instance);
HardInstance instance_from_json(const nlohmann::json& j);

}  // namespace resistor
