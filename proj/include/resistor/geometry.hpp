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

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <vector>

#include "resistor/rng.hpp"

namespace resistor {

using Vector = Eigen::VectorXd;

inline constexpr double kOrthonormalTol = 1e-10;
inline constexpr double kDegeneracyTol = 1e-10;

// Ordered orthonormal vectors in R^d. Rows of the coordinate map M, so that
// coords(x) = M x and lift(p) = M^T p.
class OrthonormalBasis {
 public:
  explicit OrthonormalBasis(std::size_t dim, double tol = kOrthonormalTol)
      : dim_(dim), tol_(tol) {}

  // Checks the orthonormality invariant; throws std::invalid_argument.
  OrthonormalBasis(std::size_t dim, std::vector<Vector> vectors,
                   double tol = kOrthonormalTol);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  bool empty() const { return vectors_.empty(); }
  double tol() const { return tol_; }
  const Vector& operator[](std::size_t i) const { return vectors_[i]; }
  const std::vector<Vector>& vectors() const { return vectors_; }

  Eigen::VectorXd coords(const Vector& x) const;
  Vector lift(const Eigen::VectorXd& coords) const;

  // Largest deviation of the Gram matrix from the identity.
  double orthonormality_error() const;

  // Appends a vector the caller has already orthonormalized against this
  // basis; only the unit-norm condition is rechecked.
  void append(Vector unit);

 private:
  std::size_t dim_;
  double tol_;
  std::vector<Vector> vectors_;
};

// x minus its projection on span(basis), projected twice.
Vector perp_component(const Vector& x, const OrthonormalBasis& basis);

struct ExtendResult {
  OrthonormalBasis basis;
  // The appended unit vector; empty when x was degenerate.
  std::optional<Vector> unit;
  double perp_norm = 0.0;

  bool extended() const { return unit.has_value(); }
};

ExtendResult orthonormal_extend(const OrthonormalBasis& basis, const Vector& x,
                                double degeneracy_tol = kDegeneracyTol);

// Unit vector orthogonal to span(basis), drawn from a Gaussian.
Vector arbitrary_perp_unit(const OrthonormalBasis& basis, Stream& rng);

// Uniform in the r-dimensional unit ball: Gaussian direction, radius U^{1/r}.
Eigen::VectorXd sample_ball(int r, Stream& rng);
void sample_ball_into(Eigen::Ref<Eigen::VectorXd> out, Stream& rng);

// Uniform on the r-dimensional unit sphere.
Eigen::VectorXd sample_sphere(int r, Stream& rng);
void sample_sphere_into(Eigen::Ref<Eigen::VectorXd> out, Stream& rng);

// First out.size() coordinates of a uniform point on the sphere (ball) in
// R^n, without drawing the other n - out.size().
void sample_sphere_marginal_into(Eigen::Ref<Eigen::VectorXd> out, int n, Stream& rng);
void sample_ball_marginal_into(Eigen::Ref<Eigen::VectorXd> out, int n, Stream& rng);

// T orthonormal vectors in R^d by Gram-Schmidt on i.i.d. Gaussians.
OrthonormalBasis random_orthonormal_basis(std::size_t d, std::size_t count,
                                          Stream& rng);

}  // namespace resistor
