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

#include "resistor/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace resistor {
namespace {

void require_view(const MaxAffineView& fn) {
  if (fn.frame == nullptr) throw std::invalid_argument("MaxAffineView: missing frame");
  if (fn.pieces() == 0) throw std::invalid_argument("MaxAffineView: no pieces");
  if (fn.slopes == nullptr && fn.pieces() != fn.frame->size()) {
    throw std::invalid_argument("MaxAffineView: identity slopes need one piece per frame vector");
  }
}

// The function near x in the coordinates that matter there. With identity
// slopes only pieces within 2 passes delta of the max can win inside the
// smoothing support; the rest are dropped together with their coordinates.
struct LocalModel {
  const MaxAffineView* fn = nullptr;
  int dim = 0;                  // smoothing dimension
  std::vector<int> coord;       // smoothing coordinate of each kept coordinate
  Eigen::VectorXd p;            // kept coordinates of x
  std::vector<double> shifts;   // identity slopes: shift of each kept piece

  int size() const { return static_cast<int>(coord.size()); }

  double eval(const Eigen::VectorXd& q) const {
    if (fn->slopes != nullptr) return fn->eval(q);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < shifts.size(); ++l) {
      best = std::max(best, q[static_cast<Eigen::Index>(l)] + shifts[l]);
    }
    return best;
  }

  void gather(const Eigen::VectorXd& full, Eigen::Ref<Eigen::VectorXd> out) const {
    for (int l = 0; l < size(); ++l) out[l] = full[coord[static_cast<std::size_t>(l)]];
  }
};

LocalModel local_model(const MaxAffineView& fn, const Vector& x) {
  LocalModel m;
  m.fn = &fn;
  m.dim = fn.smoothing_dim();
  const Eigen::VectorXd coords = fn.frame->coords(x);
  if (fn.slopes != nullptr) {
    for (int l = 0; l < fn.rank(); ++l) m.coord.push_back(l);
    m.p = coords;
    return m;
  }
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < fn.pieces(); ++i) {
    best = std::max(best, coords[static_cast<Eigen::Index>(i)] + fn.shifts[i]);
  }
  const double reach = 2.0 * fn.passes * fn.delta;
  for (std::size_t i = 0; i < fn.pieces(); ++i) {
    if (best - (coords[static_cast<Eigen::Index>(i)] + fn.shifts[i]) <= reach) {
      m.coord.push_back(static_cast<int>(i));
      m.shifts.push_back(fn.shifts[i]);
    }
  }
  m.p.resize(m.size());
  m.gather(coords, m.p);
  return m;
}

// Sum of `count` i.i.d. uniform ball samples in R^dim, restricted to the
// model's coordinates. The marginal is exchangeable, so which coordinates
// are kept does not matter, only how many.
void add_ball_samples(const LocalModel& m, Eigen::Ref<Eigen::VectorXd> out, int count,
                      Eigen::VectorXd& part, Stream& rng) {
  out.setZero();
  for (int j = 0; j < count; ++j) {
    sample_ball_marginal_into(part, m.dim, rng);
    out += part;
  }
}

struct GradientBank {
  Eigen::MatrixXd sphere;  // outer pass directions
  Eigen::MatrixXd inner;   // sum of passes-1 ball samples
};

GradientBank make_gradient_bank(const LocalModel& m, std::size_t n, Stream& rng) {
  const int r = m.size();
  GradientBank bank{Eigen::MatrixXd(r, static_cast<Eigen::Index>(n)),
                    Eigen::MatrixXd(r, static_cast<Eigen::Index>(n))};
  Eigen::VectorXd part(r);
  for (Eigen::Index s = 0; s < static_cast<Eigen::Index>(n); ++s) {
    sample_sphere_marginal_into(bank.sphere.col(s), m.dim, rng);
    add_ball_samples(m, bank.inner.col(s), m.fn->passes - 1, part, rng);
  }
  return bank;
}

struct CoordGradient {
  Eigen::VectorXd mean;
  Eigen::VectorXd std_error;
};

// Antithetic sphere estimator at kept coordinates p over a fixed bank.
CoordGradient estimate_gradient(const LocalModel& m, const Eigen::VectorXd& p,
                                const GradientBank& bank, bool with_error = true) {
  const int r = m.size();
  const double delta = m.fn->delta;
  const Eigen::Index n = bank.sphere.cols();
  const double scale = static_cast<double>(m.dim) / delta;
  Eigen::VectorXd half_diff(n);
  Eigen::VectorXd plus(r), minus(r);
  for (Eigen::Index s = 0; s < n; ++s) {
    const auto u = bank.sphere.col(s);
    const auto w = bank.inner.col(s);
    plus = p + delta * (w + u);
    minus = p + delta * (w - u);
    half_diff[s] = 0.5 * (m.eval(plus) - m.eval(minus));
  }
  CoordGradient out{scale * (bank.sphere * half_diff) / static_cast<double>(n),
                    Eigen::VectorXd::Zero(r)};
  if (with_error && n > 1) {
    for (int l = 0; l < r; ++l) {
      const Eigen::ArrayXd terms =
          scale * bank.sphere.row(l).transpose().array() * half_diff.array();
      const double var = (terms - out.mean[l]).square().sum() / static_cast<double>(n - 1);
      out.std_error[l] = std::sqrt(var / static_cast<double>(n));
    }
  }
  return out;
}

// Order-`order` derivative tensor from nested central differences of the
// bank gradient; the last index is the newest differentiation direction.
std::vector<double> difference_tensor(const LocalModel& m, const Eigen::VectorXd& p,
                                      const GradientBank& bank, int order, double h) {
  if (order == 1) {
    const Eigen::VectorXd g = estimate_gradient(m, p, bank, false).mean;
    return {g.data(), g.data() + g.size()};
  }
  const int r = m.size();
  std::vector<double> out;
  std::vector<std::vector<double>> slices;
  slices.reserve(static_cast<std::size_t>(r));
  Eigen::VectorXd shifted = p;
  for (int l = 0; l < r; ++l) {
    shifted[l] = p[l] + h;
    const auto up = difference_tensor(m, shifted, bank, order - 1, h);
    shifted[l] = p[l] - h;
    const auto down = difference_tensor(m, shifted, bank, order - 1, h);
    shifted[l] = p[l];
    std::vector<double> slice(up.size());
    for (std::size_t e = 0; e < up.size(); ++e) slice[e] = (up[e] - down[e]) / (2.0 * h);
    slices.push_back(std::move(slice));
  }
  const std::size_t lower = slices.front().size();
  out.resize(lower * static_cast<std::size_t>(r));
  for (std::size_t e = 0; e < lower; ++e) {
    for (int l = 0; l < r; ++l) out[e * r + l] = slices[l][e];
  }
  return out;
}

// Averages entries over index permutations.
void symmetrize(std::vector<double>& tensor, int r, int order) {
  std::map<std::vector<int>, std::pair<double, int>> classes;
  std::vector<int> idx(static_cast<std::size_t>(order));
  auto decode = [&](std::size_t flat) {
    for (int t = order - 1; t >= 0; --t) {
      idx[t] = static_cast<int>(flat % r);
      flat /= r;
    }
    std::vector<int> key = idx;
    std::sort(key.begin(), key.end());
    return key;
  };
  for (std::size_t flat = 0; flat < tensor.size(); ++flat) {
    auto& acc = classes[decode(flat)];
    acc.first += tensor[flat];
    acc.second += 1;
  }
  for (std::size_t flat = 0; flat < tensor.size(); ++flat) {
    const auto& acc = classes[decode(flat)];
    tensor[flat] = acc.first / acc.second;
  }
}

Vector lift_kept(const MaxAffineView& fn, const LocalModel& m, const Eigen::VectorXd& c) {
  Vector x = Vector::Zero(static_cast<Eigen::Index>(fn.frame->dim()));
  for (int l = 0; l < m.size(); ++l) {
    x += c[l] * (*fn.frame)[static_cast<std::size_t>(m.coord[static_cast<std::size_t>(l)])];
  }
  return x;
}

bool vectors_identical(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

}  // namespace

double MaxAffineView::eval(const Eigen::Ref<const Eigen::VectorXd>& p) const {
  double best = -std::numeric_limits<double>::infinity();
  if (slopes == nullptr) {
    for (std::size_t i = 0; i < shifts.size(); ++i) {
      best = std::max(best, p[static_cast<Eigen::Index>(i)] + shifts[i]);
    }
  } else {
    for (std::size_t i = 0; i < shifts.size(); ++i) {
      best = std::max(best, slopes->row(static_cast<Eigen::Index>(i)).dot(p) + shifts[i]);
    }
  }
  return best;
}

MaxAffineView view_of(const HardInstance& instance) {
  const auto& p = instance.params();
  return MaxAffineView{&instance.basis(), instance.shifts(), nullptr, p.delta, p.k, p.T};
}

MaxAffineFunction::MaxAffineFunction(OrthonormalBasis frame, Eigen::MatrixXd slopes,
                                     std::vector<double> shifts, double delta, int passes)
    : frame_(std::move(frame)),
      slopes_(std::move(slopes)),
      shifts_(std::move(shifts)),
      delta_(delta),
      passes_(passes) {
  if (static_cast<std::size_t>(slopes_.rows()) != shifts_.size() ||
      static_cast<std::size_t>(slopes_.cols()) != frame_.size()) {
    throw std::invalid_argument("MaxAffineFunction: slope matrix shape mismatch");
  }
  for (Eigen::Index i = 0; i < slopes_.rows(); ++i) {
    if (slopes_.row(i).norm() > 1.0 + 1e-12) {
      throw std::invalid_argument("MaxAffineFunction: slopes must have norm <= 1");
    }
  }
  if (!(delta_ > 0.0) || passes_ < 1) {
    throw std::invalid_argument("MaxAffineFunction: need delta > 0 and passes >= 1");
  }
}

MaxAffineView MaxAffineFunction::view() const {
  return MaxAffineView{&frame_, shifts_, &slopes_, delta_, passes_, 0};
}

PieceValues piece_values(const MaxAffineView& fn, const Vector& x) {
  require_view(fn);
  PieceValues out;
  out.coords = fn.frame->coords(x);
  out.values.resize(fn.pieces());
  out.shifted_max = -std::numeric_limits<double>::infinity();
  out.linear_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < fn.pieces(); ++i) {
    const double linear = fn.slopes == nullptr
                              ? out.coords[static_cast<Eigen::Index>(i)]
                              : fn.slopes->row(static_cast<Eigen::Index>(i)).dot(out.coords);
    out.values[i] = linear + fn.shifts[i];
    out.linear_max = std::max(out.linear_max, linear);
    if (out.values[i] > out.shifted_max) {
      out.shifted_max = out.values[i];
      out.argmax = static_cast<int>(i) + 1;
    }
  }
  return out;
}

std::optional<int> locally_affine_index(const MaxAffineView& fn, const Vector& x) {
  const PieceValues pv = piece_values(fn, x);
  const double need = 2.0 * fn.passes * fn.delta;
  const double best = pv.shifted_max;
  for (std::size_t i = 0; i < pv.values.size(); ++i) {
    if (static_cast<int>(i) + 1 == pv.argmax) continue;
    if (!(best - pv.values[i] > need)) return std::nullopt;
  }
  return pv.argmax;
}

ValueEstimate smoothed_value_mc(const MaxAffineView& fn, const Vector& x,
                                const MCBudget& budget, std::uint32_t stream_index) {
  require_view(fn);
  if (budget.n_samples < 1) throw std::invalid_argument("MCBudget: n_samples must be >= 1");
  const LocalModel m = local_model(fn, x);
  Stream rng(budget.seed, StreamPurpose::kValue, stream_index);
  const auto n = static_cast<Eigen::Index>(budget.n_samples);
  Eigen::VectorXd samples(n);
  Eigen::VectorXd z(m.size()), part(m.size()), point(m.size());
  for (Eigen::Index s = 0; s < n; ++s) {
    add_ball_samples(m, z, fn.passes, part, rng);
    point = m.p + fn.delta * z;
    samples[s] = m.eval(point);
  }
  ValueEstimate out;
  out.value = samples.mean();
  if (n > 1) {
    const double var = (samples.array() - out.value).square().sum() / static_cast<double>(n - 1);
    out.std_error = std::sqrt(var / static_cast<double>(n));
  }
  return out;
}

GradientEstimate smoothed_gradient_mc(const MaxAffineView& fn, const Vector& x,
                                      const MCBudget& budget, std::uint32_t stream_index) {
  require_view(fn);
  if (fn.passes < 1) throw std::invalid_argument("smoothed_gradient_mc: needs k >= 1");
  if (budget.n_samples < 1) throw std::invalid_argument("MCBudget: n_samples must be >= 1");
  const LocalModel m = local_model(fn, x);
  Stream rng(budget.seed, StreamPurpose::kGradient, stream_index);
  const GradientBank bank = make_gradient_bank(m, budget.n_samples, rng);
  const CoordGradient g = estimate_gradient(m, m.p, bank);
  GradientEstimate out;
  out.gradient = lift_kept(fn, m, g.mean);
  out.coords = Eigen::VectorXd::Zero(fn.rank());
  out.coord_stderr = Eigen::VectorXd::Zero(fn.rank());
  for (int l = 0; l < m.size(); ++l) {
    out.coords[m.coord[static_cast<std::size_t>(l)]] = g.mean[l];
    out.coord_stderr[m.coord[static_cast<std::size_t>(l)]] = g.std_error[l];
  }
  out.error_bound = g.std_error.norm();
  return out;
}

const char* to_string(Regime regime) {
  return regime == Regime::ExactAffine ? "exact_affine" : "monte_carlo";
}

Vector OracleResponse::hessian_times(const Vector& s) const {
  if (higher.empty() || higher.front().is_zero() || !frame) {
    return Vector::Zero(s.size());
  }
  const auto r = static_cast<Eigen::Index>(frame->size());
  const Eigen::Map<const Eigen::MatrixXd> h(higher.front().coords.data(), r, r);
  return frame->lift(h * frame->coords(s));
}

bool OracleResponse::same_answer(const OracleResponse& other) const {
  return value == other.value && regime == other.regime &&
         affine_index == other.affine_index && vectors_identical(gradient, other.gradient) &&
         higher == other.higher;
}

OracleResponse oracle_answer(const HardInstance& instance, const Vector& x,
                             const MCBudget& budget, std::uint32_t query_index,
                             int max_order) {
  const InstanceParams& params = instance.params();
  require_feasible(x, "oracle_answer");
  if (instance.size() == 0) throw std::invalid_argument("oracle_answer: empty instance");
  const MaxAffineView fn = view_of(instance);
  const double denom = params.norm_denom;
  const int top = max_order < 0 ? params.k : std::min(max_order, params.k);

  OracleResponse out;
  if (const auto index = locally_affine_index(fn, x)) {
    const AffinePiece& piece = instance.pieces()[static_cast<std::size_t>(*index - 1)];
    out.regime = Regime::ExactAffine;
    out.affine_index = *index;
    out.value = (piece.a.dot(x) + piece.shift) / denom;
    out.gradient = piece.a / denom;
    for (int order = 2; order <= top; ++order) out.higher.push_back({order, {}, 0.0});
    return out;
  }

  out.regime = Regime::MonteCarlo;
  const ValueEstimate v = smoothed_value_mc(fn, x, budget, query_index);
  out.value = v.value / denom;
  out.value_stderr = v.std_error / denom;

  const LocalModel m = local_model(fn, x);
  Stream rng(budget.seed, StreamPurpose::kGradient, query_index);
  const GradientBank bank = make_gradient_bank(m, budget.n_samples, rng);
  const CoordGradient g = estimate_gradient(m, m.p, bank);
  out.gradient = lift_kept(fn, m, g.mean) / denom;
  out.gradient_error = g.std_error.norm() / denom;

  if (top >= 2) {
    const int r = m.size();
    const double h = kHigherOrderStepRatio * params.delta;
    const double curvature = static_cast<double>(m.dim) / params.delta;
    double lower_error = g.std_error.norm();
    for (int order = 2; order <= top; ++order) {
      std::vector<double> tensor = difference_tensor(m, m.p, bank, order, h);
      symmetrize(tensor, r, order);
      for (double& c : tensor) c /= denom;
      const double truncation = h * h * std::pow(curvature, order + 1) / 6.0;
      const double error = 2.0 * lower_error / h + truncation;
      lower_error = error;
      out.higher.push_back({order, std::move(tensor), error / denom});
    }
    std::vector<Vector> kept;
    for (int c : m.coord) kept.push_back(instance.basis()[static_cast<std::size_t>(c)]);
    out.frame = std::make_shared<const OrthonormalBasis>(params.d, std::move(kept));
  }
  return out;
}

double rescale_to_smoothness(double L_target, int k, int T) {
  if (!(L_target > 0.0)) throw std::invalid_argument("rescale_to_smoothness: L must be positive");
  if (k < 1 || T < 1) throw std::invalid_argument("rescale_to_smoothness: need k, T >= 1");
  return L_target / (std::pow(10.0 * k, k) * std::pow(static_cast<double>(T), 2.5 * k));
}

double partial_suboptimality_certificate(const HardInstance& instance, const Vector& x) {
  if (instance.size() == 0) throw std::invalid_argument("certificate: empty instance");
  const auto& p = instance.params();
  const double f_tilde = piece_values(view_of(instance), x).shifted_max;
  const double r = static_cast<double>(instance.size());
  return (f_tilde + 1.0 / std::sqrt(r) - p.gamma - 2.0 * p.k * p.delta) / p.norm_denom;
}

double suboptimality_certificate(const HardInstance& instance, const Vector& x) {
  if (!instance.complete()) {
    throw std::invalid_argument("suboptimality_certificate: instance has " +
                                std::to_string(instance.size()) + " of " +
                                std::to_string(instance.params().T) + " pieces");
  }
  return partial_suboptimality_certificate(instance, x);
}

nlohmann::json to_json(const OracleResponse& response, bool include_vectors) {
  nlohmann::json higher = nlohmann::json::array();
  for (const auto& t : response.higher) {
    nlohmann::json entry{{"order", t.order}, {"zero", t.is_zero()}, {"error_bound", t.error_bound}};
    if (include_vectors && !t.is_zero()) entry["coords"] = t.coords;
    higher.push_back(std::move(entry));
  }
  nlohmann::json j{{"value", response.value},
                   {"grad_norm", response.gradient.norm()},
                   {"regime", to_string(response.regime)},
                   {"affine_index", response.affine_index},
                   {"value_stderr", response.value_stderr},
                   {"gradient_error", response.gradient_error},
                   {"higher", std::move(higher)}};
  if (include_vectors) {
    j["gradient"] = std::vector<double>(response.gradient.data(),
                                        response.gradient.data() + response.gradient.size());
  }
  return j;
}

}  // namespace resistor
