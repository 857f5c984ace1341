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

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"

#include "resistor/geometry.hpp"
#include "resistor/instance.hpp"
#include "resistor/rng.hpp"

namespace resistor {

// Non-owning view of g(x) = max_i (c_i . Mx + shift_i), smoothed `passes`
// times with radius delta inside the span of the frame M. A null slope
// matrix means c_i = e_i, which is how hard instances are stored.
//
// The smoothing ball lives in a space of dimension smoothing_dim() >= rank:
// the frame spans its first rank() coordinates. An instance still being
// built is smoothed over the T-dimensional span it will end with, so answers
// given early agree with the finished function.
struct MaxAffineView {
  const OrthonormalBasis* frame = nullptr;
  std::span<const double> shifts;
  const Eigen::MatrixXd* slopes = nullptr;  // pieces x rank
  double delta = 0.0;
  int passes = 0;
  int sample_dim = 0;  // 0 means rank()

  int rank() const { return static_cast<int>(frame->size()); }
  int smoothing_dim() const { return std::max(sample_dim, rank()); }
  std::size_t pieces() const { return shifts.size(); }
  // Unsmoothed max in frame coordinates.
  double eval(const Eigen::Ref<const Eigen::VectorXd>& p) const;
};

MaxAffineView view_of(const HardInstance& instance);

// Owning counterpart of MaxAffineView for functions outside the hard family
// (the |.| fixture, for instance). Slope rows must have norm <= 1.
class MaxAffineFunction {
 public:
  MaxAffineFunction(OrthonormalBasis frame, Eigen::MatrixXd slopes,
                    std::vector<double> shifts, double delta, int passes);

  MaxAffineView view() const;
  const OrthonormalBasis& frame() const { return frame_; }

 private:
  OrthonormalBasis frame_;
  Eigen::MatrixXd slopes_;
  std::vector<double> shifts_;
  double delta_;
  int passes_;
};

struct MCBudget {
  std::size_t n_samples = 100000;  // values; gradients use n antithetic pairs
  std::uint64_t seed = 0;
};

struct PieceValues {
  std::vector<double> values;  // c_i . Mx + shift_i
  double shifted_max = 0.0;    // f-tilde(x)
  double linear_max = 0.0;     // f(x), shifts dropped
  int argmax = 0;              // 1-based, first maximizer
  Eigen::VectorXd coords;      // Mx
};

PieceValues piece_values(const MaxAffineView& fn, const Vector& x);

// Some(i) iff piece i strictly beats every other piece by more than
// 2 * passes * delta at x.
std::optional<int> locally_affine_index(const MaxAffineView& fn, const Vector& x);

struct ValueEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

// Mean of g(x + delta (v_1 + ... + v_k)) over i.i.d. ball samples; one
// expectation stands in for k nested smoothing passes.
ValueEstimate smoothed_value_mc(const MaxAffineView& fn, const Vector& x,
                                const MCBudget& budget, std::uint32_t stream_index = 0);

struct GradientEstimate {
  Vector gradient;              // ambient, inside span(frame)
  Eigen::VectorXd coords;       // frame coordinates
  Eigen::VectorXd coord_stderr;
  double error_bound = 0.0;     // Euclidean norm of coord_stderr
};

// Sphere formula (n/delta) E[g_{k-1}(y + delta u) u], n = smoothing_dim(),
// on the outer pass with antithetic pairs; the inner k-1 passes are one
// summed ball sample. For identity slopes, coordinates of pieces more than
// 2 k delta below the max are exactly zero and are not estimated.
GradientEstimate smoothed_gradient_mc(const MaxAffineView& fn, const Vector& x,
                                      const MCBudget& budget,
                                      std::uint32_t stream_index = 0);

enum class Regime { ExactAffine, MonteCarlo };
const char* to_string(Regime regime);

// Derivative of order >= 2 in the coordinates of OracleResponse::frame,
// row-major. Empty coords encode the zero tensor.
struct DerivativeTensor {
  int order = 2;
  std::vector<double> coords;
  double error_bound = 0.0;

  bool is_zero() const { return coords.empty(); }
  bool operator==(const DerivativeTensor&) const = default;
};

struct OracleResponse {
  double value = 0.0;
  Vector gradient;
  std::vector<DerivativeTensor> higher;  // orders 2..k
  Regime regime = Regime::ExactAffine;
  int affine_index = 0;                  // 1-based in ExactAffine, else 0
  double value_stderr = 0.0;
  double gradient_error = 0.0;
  // Pieces that can attain the max within the smoothing support; the higher
  // tensors vanish along every other direction. Set only when some tensor
  // is nonzero.
  std::shared_ptr<const OrthonormalBasis> frame;

  // Contracts the order-2 tensor with s in ambient coordinates (H s).
  Vector hessian_times(const Vector& s) const;
  // Bitwise comparison of everything an optimizer can observe.
  bool same_answer(const OracleResponse& other) const;
};

// Step of the central differences that produce orders >= 2, relative to delta.
inline constexpr double kHigherOrderStepRatio = 0.1;

// Full k-th order answer, divided by norm_denom. ExactAffine when
// locally_affine_index finds a piece: the smoothing of an affine function is
// the function itself, so value, gradient and zero higher tensors are exact.
// max_order < k drops the tensors above that order (audits that only
// compare values or gradients).
OracleResponse oracle_answer(const HardInstance& instance, const Vector& x,
                             const MCBudget& budget, std::uint32_t query_index,
                             int max_order = -1);

// s = L / ((10k)^k T^{2.5k}); scaling every output by s gives k-th order
// smoothness at most L.
double rescale_to_smoothness(double L_target, int k, int T);

// Closed-form lower bound on the normalized gap f(x) - min f over the ball:
// [f-tilde(x) + 1/sqrt T - gamma - 2k delta] / norm_denom. Needs r = T.
double suboptimality_certificate(const HardInstance& instance, const Vector& x);
// Same bound with r pieces in place of T, for runs stopped early.
double partial_suboptimality_certificate(const HardInstance& instance, const Vector& x);

nlohmann::json to_json(const OracleResponse& response, bool include_vectors = false);

}  // namespace resistor
