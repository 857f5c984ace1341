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

#include "resistor/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace resistor {
namespace {

void require_dim(const Vector& x, std::size_t dim, const char* what) {
  if (static_cast<std::size_t>(x.size()) != dim) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(x.size()) + " vs " +
                                std::to_string(dim) + ")");
  }
}

void project_out(Vector& v, const OrthonormalBasis& basis) {
  for (const Vector& u : basis.vectors()) v -= u.dot(v) * u;
}

}  // namespace

OrthonormalBasis::OrthonormalBasis(std::size_t dim, std::vector<Vector> vectors,
                                   double tol)
    : dim_(dim), tol_(tol), vectors_(std::move(vectors)) {
  if (vectors_.size() > dim_) {
    throw std::invalid_argument("OrthonormalBasis: more vectors than dimensions");
  }
  for (const Vector& v : vectors_) require_dim(v, dim_, "OrthonormalBasis");
  const double err = orthonormality_error();
  if (!(err <= tol_)) {
    throw std::invalid_argument("OrthonormalBasis: Gram matrix deviates from "
                                "identity by " + std::to_string(err));
  }
}

Eigen::VectorXd OrthonormalBasis::coords(const Vector& x) const {
  require_dim(x, dim_, "OrthonormalBasis::coords");
  Eigen::VectorXd p(static_cast<Eigen::Index>(vectors_.size()));
  for (std::size_t i = 0; i < vectors_.size(); ++i) p[i] = vectors_[i].dot(x);
  return p;
}

Vector OrthonormalBasis::lift(const Eigen::VectorXd& coords) const {
  if (static_cast<std::size_t>(coords.size()) != vectors_.size()) {
    throw std::invalid_argument("OrthonormalBasis::lift: coordinate count mismatch");
  }
  Vector x = Vector::Zero(static_cast<Eigen::Index>(dim_));
  for (std::size_t i = 0; i < vectors_.size(); ++i) x += coords[i] * vectors_[i];
  return x;
}

double OrthonormalBasis::orthonormality_error() const {
  double err = 0.0;
  for (std::size_t i = 0; i < vectors_.size(); ++i) {
    for (std::size_t j = i; j < vectors_.size(); ++j) {
      const double target = (i == j) ? 1.0 : 0.0;
      err = std::max(err, std::abs(vectors_[i].dot(vectors_[j]) - target));
    }
  }
  return err;
}

void OrthonormalBasis::append(Vector unit) {
  require_dim(unit, dim_, "OrthonormalBasis::append");
  if (vectors_.size() >= dim_) {
    throw std::invalid_argument("OrthonormalBasis::append: basis already spans the space");
  }
  if (std::abs(unit.norm() - 1.0) > tol_) {
    throw std::invalid_argument("OrthonormalBasis::append: vector is not unit length");
  }
  vectors_.push_back(std::move(unit));
}

Vector perp_component(const Vector& x, const OrthonormalBasis& basis) {
  require_dim(x, basis.dim(), "perp_component");
  Vector v = x;
  // Twice is enough.
  project_out(v, basis);
  project_out(v, basis);
  return v;
}

ExtendResult orthonormal_extend(const OrthonormalBasis& basis, const Vector& x,
                                double degeneracy_tol) {
  if (!(degeneracy_tol > 0.0)) {
    throw std::invalid_argument("orthonormal_extend: degeneracy_tol must be positive");
  }
  Vector perp = perp_component(x, basis);
  const double norm = perp.norm();
  ExtendResult result{basis, std::nullopt, norm};
  if (norm > degeneracy_tol && basis.size() < basis.dim()) {
    perp /= norm;
    result.basis.append(perp);
    result.unit = std::move(perp);
  }
  return result;
}

Vector arbitrary_perp_unit(const OrthonormalBasis& basis, Stream& rng) {
  if (basis.size() >= basis.dim()) {
    throw std::invalid_argument("arbitrary_perp_unit: basis spans the full space");
  }
  const auto d = static_cast<Eigen::Index>(basis.dim());
  // A Gaussian lands in span(basis) with probability zero; the loop only
  // guards against a numerically tiny remainder.
  for (;;) {
    Vector g(d);
    for (Eigen::Index i = 0; i < d; ++i) g[i] = rng.normal();
    Vector perp = perp_component(g, basis);
    const double norm = perp.norm();
    if (norm > 1e-6 * std::max(1.0, g.norm())) return perp / norm;
  }
}

void sample_sphere_into(Eigen::Ref<Eigen::VectorXd> out, Stream& rng) {
  for (;;) {
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = rng.normal();
    const double norm = out.norm();
    if (norm > 0.0) {
      out /= norm;
      return;
    }
  }
}

Eigen::VectorXd sample_sphere(int r, Stream& rng) {
  if (r < 1) throw std::invalid_argument("sample_sphere: r must be >= 1");
  Eigen::VectorXd v(r);
  sample_sphere_into(v, rng);
  return v;
}

void sample_ball_into(Eigen::Ref<Eigen::VectorXd> out, Stream& rng) {
  sample_sphere_into(out, rng);
  const double radius =
      std::pow(rng.uniform(), 1.0 / static_cast<double>(out.size()));
  out *= radius;
}

namespace {

// Marsaglia-Tsang; kept in-house so draws do not depend on <random>.
double sample_gamma(double shape, Stream& rng) {
  if (shape < 1.0) {
    return sample_gamma(shape + 1.0, rng) * std::pow(rng.uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double z = rng.normal();
    const double v = std::pow(1.0 + c * z, 3);
    if (v <= 0.0) continue;
    const double u = rng.uniform();
    if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v)) return d * v;
  }
}

}  // namespace

void sample_sphere_marginal_into(Eigen::Ref<Eigen::VectorXd> out, int n, Stream& rng) {
  const auto r = static_cast<int>(out.size());
  if (n < r) throw std::invalid_argument("sample_sphere_marginal: n must be >= r");
  for (;;) {
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = rng.normal();
    // squared norm of the n - r unseen Gaussians
    const double rest = n > r ? 2.0 * sample_gamma(0.5 * (n - r), rng) : 0.0;
    const double norm = std::sqrt(out.squaredNorm() + rest);
    if (norm > 0.0) {
      out /= norm;
      return;
    }
  }
}

void sample_ball_marginal_into(Eigen::Ref<Eigen::VectorXd> out, int n, Stream& rng) {
  sample_sphere_marginal_into(out, n, rng);
  out *= std::pow(rng.uniform(), 1.0 / static_cast<double>(n));
}

Eigen::VectorXd sample_ball(int r, Stream& rng) {
  if (r < 1) throw std::invalid_argument("sample_ball: r must be >= 1");
  Eigen::VectorXd v(r);
  sample_ball_into(v, rng);
  return v;
}

OrthonormalBasis random_orthonormal_basis(std::size_t d, std::size_t count,
                                          Stream& rng) {
  if (d < count) {
    throw std::invalid_argument("random_orthonormal_basis: need d >= T");
  }
  OrthonormalBasis basis(d);
  while (basis.size() < count) basis.append(arbitrary_perp_unit(basis, rng));
  return basis;
}

}  // namespace resistor
