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

#include "resistor/instance.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace resistor {
namespace {

std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void require_floor_schedule(const InstanceParams& p, const char* who) {
  const double floor = 1.0 / (2.0 * std::sqrt(static_cast<double>(p.T)));
  if (!(worst_case_certificate(p) >= floor)) {
    throw std::invalid_argument(std::string(who) + ": T=" + std::to_string(p.T) +
                                " is too small for the 1/(2 sqrt T) floor");
  }
}

}  // namespace

const char* to_string(Mode mode) {
  return mode == Mode::Deterministic ? "deterministic" : "randomized";
}

Mode mode_from_string(const std::string& text) {
  if (text == "deterministic" || text == "det") return Mode::Deterministic;
  if (text == "randomized" || text == "rand") return Mode::Randomized;
  throw std::invalid_argument("unknown mode '" + text + "'");
}

double InstanceParams::event_threshold() const {
  return 1.0 / (20.0 * std::pow(static_cast<double>(T), 1.5));
}

InstanceParams params_deterministic(int T, int k, std::optional<std::size_t> d) {
  if (k < 1) throw std::invalid_argument("params_deterministic: k must be >= 1");
  if (T < 1) throw std::invalid_argument("params_deterministic: T must be >= 1");
  InstanceParams p;
  p.T = T;
  p.k = k;
  p.m = T;
  p.d = static_cast<std::size_t>(T) + 1;
  if (d) {
    if (*d <= static_cast<std::size_t>(T)) {
      throw std::invalid_argument("params_deterministic: need d > T");
    }
    p.d = *d;
  }
  p.gamma = 1.0 / (3.0 * std::sqrt(static_cast<double>(T)));
  p.delta = p.gamma / (3.0 * k * T);
  p.mode = Mode::Deterministic;
  p.norm_denom = 1.0 + (1.0 - 1.0 / p.m) * p.gamma;
  require_floor_schedule(p, "params_deterministic");
  return p;
}

std::size_t randomized_dimension(int T, double fail_prob) {
  if (T < 1) throw std::invalid_argument("randomized_dimension: T must be >= 1");
  if (!(fail_prob > 0.0 && fail_prob < 1.0)) {
    throw std::invalid_argument("randomized_dimension: fail_prob must be in (0,1)");
  }
  const double t = static_cast<double>(T);
  const double extra = 800.0 * t * t * t * std::log(t * t / fail_prob);
  return static_cast<std::size_t>(T) +
         static_cast<std::size_t>(std::ceil(std::max(extra, 0.0)));
}

InstanceParams params_randomized(int T, int k, double fail_prob) {
  if (k < 1) throw std::invalid_argument("params_randomized: k must be >= 1");
  InstanceParams p;
  p.T = T;
  p.k = k;
  p.m = T;
  p.d = randomized_dimension(T, fail_prob);
  p.gamma = 1.0 / (3.0 * std::sqrt(static_cast<double>(T)));
  p.delta = 1.0 / (20.0 * k * std::pow(static_cast<double>(T), 1.5));
  p.mode = Mode::Randomized;
  p.fail_prob = fail_prob;
  p.norm_denom = 1.0;
  require_floor_schedule(p, "params_randomized");
  return p;
}

double shift_of(const InstanceParams& params, int i) {
  if (i < 1 || i > params.m) {
    throw std::out_of_range("shift_of: index " + std::to_string(i) +
                            " outside [1, " + std::to_string(params.m) + "]");
  }
  return (1.0 - static_cast<double>(i) / params.m) * params.gamma;
}

double worst_case_certificate(const InstanceParams& p) {
  const double leak = p.mode == Mode::Randomized ? p.event_threshold() : 0.0;
  return (1.0 / std::sqrt(static_cast<double>(p.T)) - p.gamma -
          2.0 * p.k * p.delta - leak) /
         p.norm_denom;
}

std::vector<std::string> validate(const InstanceParams& p) {
  std::vector<std::string> out;
  if (p.T < 1) out.push_back("T >= 1 violated");
  if (p.k < 1) out.push_back("k >= 1 violated");
  if (p.m < p.T) out.push_back("T <= m violated");
  if (!(p.gamma > 0.0)) out.push_back("gamma > 0 violated");
  if (!(p.delta > 0.0)) out.push_back("delta > 0 violated");
  if (!(p.norm_denom >= 1.0)) out.push_back("norm_denom >= 1 violated");
  if (!out.empty()) return out;

  const double lhs = 2.0 * p.k * p.delta;
  const double rhs = p.gamma / p.m;
  if (!(lhs <= rhs)) {
    out.push_back("2kδ ≤ γ/m violated: " + fmt_num(lhs) + " > " +
                  fmt_num(rhs));
  }
  if (p.mode == Mode::Deterministic) {
    if (!(p.d > static_cast<std::size_t>(p.T))) out.push_back("d > T violated");
  } else {
    if (!(p.fail_prob > 0.0 && p.fail_prob < 1.0)) {
      out.push_back("0 < fail_prob < 1 violated");
    } else {
      const std::size_t need = randomized_dimension(p.T, p.fail_prob);
      if (p.d < need) {
        out.push_back("d ≥ " + std::to_string(need) + " violated: d = " +
                      std::to_string(p.d));
      }
    }
    const double margin = lhs + 1.0 / (10.0 * std::pow(static_cast<double>(p.T), 1.5));
    const double target = p.gamma / p.T;
    if (!(margin < target)) {
      out.push_back("2kδ + 1/(10T^1.5) < γ/T violated: " + fmt_num(margin) +
                    " >= " + fmt_num(target));
    }
  }
  return out;
}

void require_feasible(const Vector& x, const char* what) {
  const double norm = x.norm();
  if (!std::isfinite(norm) || norm > 1.0 + kFeasibilitySlack) {
    throw std::invalid_argument(std::string(what) + ": query outside the unit ball (norm " +
                                fmt_num(norm) + ")");
  }
}

HardInstance::HardInstance(InstanceParams params)
    : params_(params), basis_(params.d) {
  if (params_.d == 0) throw std::invalid_argument("HardInstance: d must be positive");
}

HardInstance::HardInstance(InstanceParams params, std::vector<Vector> directions)
    : HardInstance(params) {
  if (directions.size() > static_cast<std::size_t>(params_.T)) {
    throw std::invalid_argument("HardInstance: more pieces than T");
  }
  for (Vector& a : directions) {
    if (static_cast<std::size_t>(a.size()) != params_.d) {
      throw std::invalid_argument("HardInstance: piece dimension mismatch");
    }
    if (!basis_.empty()) {
      for (const Vector& u : basis_.vectors()) {
        if (std::abs(u.dot(a)) > 1e-9) {
          throw std::invalid_argument("HardInstance: pieces are not orthonormal");
        }
      }
    }
    push(std::move(a));
  }
}

void HardInstance::push(Vector a) {
  const int index = static_cast<int>(pieces_.size()) + 1;
  const double shift = shift_of(params_, index);
  basis_.append(a);
  pieces_.push_back(AffinePiece{std::move(a), shift, index});
  shifts_.push_back(shift);
}

PieceOrigin HardInstance::append_piece(const Vector& x, Stream& rng) {
  if (static_cast<int>(pieces_.size()) >= params_.T) {
    throw std::length_error("append_piece: query budget exhausted");
  }
  if (static_cast<std::size_t>(x.size()) != params_.d) {
    throw std::invalid_argument("append_piece: dimension mismatch");
  }
  require_feasible(x, "append_piece");
  ExtendResult ext = orthonormal_extend(basis_, x);
  if (ext.extended()) {
    push(std::move(*ext.unit));
    return PieceOrigin::Extended;
  }
  push(arbitrary_perp_unit(basis_, rng));
  return PieceOrigin::Degenerate;
}

HardInstance HardInstance::truncated(std::size_t count) const {
  if (count > pieces_.size()) throw std::out_of_range("truncated: count exceeds size");
  std::vector<Vector> dirs;
  dirs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) dirs.push_back(pieces_[i].a);
  return HardInstance(params_, std::move(dirs));
}

PessimalPoint pessimal_point(const HardInstance& instance) {
  const std::size_t r = instance.size();
  if (r == 0) throw std::invalid_argument("pessimal_point: instance has no pieces");
  const auto& p = instance.params();
  const double root = std::sqrt(static_cast<double>(r));
  Vector x = Vector::Zero(static_cast<Eigen::Index>(p.d));
  for (const AffinePiece& piece : instance.pieces()) x -= piece.a;
  x /= root;
  const double bound = (-1.0 / root + p.gamma + p.k * p.delta) / p.norm_denom;
  return {std::move(x), bound};
}

nlohmann::json to_json(const InstanceParams& p) {
  return nlohmann::json{{"T", p.T},
                        {"k", p.k},
                        {"m", p.m},
                        {"d", p.d},
                        {"gamma", p.gamma},
                        {"delta", p.delta},
                        {"mode", to_string(p.mode)},
                        {"fail_prob", p.fail_prob},
                        {"norm_denom", p.norm_denom}};
}

InstanceParams params_from_json(const nlohmann::json& j) {
  InstanceParams p;
  p.T = j.at("T").get<int>();
  p.k = j.at("k").get<int>();
  p.m = j.at("m").get<int>();
  p.d = j.at("d").get<std::size_t>();
  p.gamma = j.at("gamma").get<double>();
  p.delta = j.at("delta").get<double>();
  p.mode = mode_from_string(j.at("mode").get<std::string>());
  p.fail_prob = j.value("fail_prob", 0.0);
  p.norm_denom = j.at("norm_denom").get<double>();
  return p;
}

nlohmann::json to_json(const HardInstance& instance) {
  nlohmann::json pieces = nlohmann::json::array();
  for (const AffinePiece& piece : instance.pieces()) {
    pieces.push_back({{"index", piece.index},
                      {"shift", piece.shift},
                      {"a", std::vector<double>(piece.a.data(),
                                                piece.a.data() + piece.a.size())}});
  }
  return {{"params", to_json(instance.params())}, {"pieces", std::move(pieces)}};
}

HardInstance instance_from_json(const nlohmann::json& j) {
  const InstanceParams params = params_from_json(j.at("params"));
  std::vector<Vector> dirs;
  int expected = 1;
  for (const auto& piece : j.at("pieces")) {
    if (piece.at("index").get<int>() != expected++) {
      throw std::invalid_argument("instance_from_json: pieces out of order");
    }
    const auto coords = piece.at("a").get<std::vector<double>>();
    dirs.push_back(Eigen::Map<const Vector>(coords.data(),
                                            static_cast<Eigen::Index>(coords.size())));
  }
  HardInstance instance(params, std::move(dirs));
  for (std::size_t i = 0; i < instance.size(); ++i) {
    const double stored = j.at("pieces")[i].at("shift").get<double>();
    if (stored != instance.pieces()[i].shift) {
      throw std::invalid_argument("instance_from_json: stored shift disagrees with params");
    }
  }
  return instance;
}

}  // namespace resistor
