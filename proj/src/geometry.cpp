// Copyright 2026 The manifold-dp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "manifold_dp/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "manifold_dp/sphere.hpp"
#include "manifold_dp/spdm.hpp"

namespace manifold_dp {

namespace {

// Minimum eigenvalue accepted as positive definite. Inputs at or below the
// floor are rejected rather than regularized: off-manifold outputs are a
// measured outcome, never silently repaired.
constexpr double kEigenvalueFloor = 1e-12;

}  // namespace

ManifoldDescriptor ManifoldDescriptor::sphere(int dim) {
  if (dim < 1) {
    throw std::invalid_argument("sphere dimension must be >= 1");
  }
  return ManifoldDescriptor(ManifoldKind::Sphere, dim, 1.0, std::numbers::pi);
}

ManifoldDescriptor ManifoldDescriptor::spdm(int order) {
  if (order < 2) {
    throw std::invalid_argument("spdm matrix order must be >= 2");
  }
  return ManifoldDescriptor(ManifoldKind::Spdm, order * (order + 1) / 2, 0.0,
                            std::numeric_limits<double>::infinity());
}

int ManifoldDescriptor::matrix_order() const {
  if (kind_ != ManifoldKind::Spdm) {
    throw std::logic_error("matrix_order is only defined for spdm manifolds");
  }
  // dim = k(k+1)/2
  return static_cast<int>(std::lround((std::sqrt(8.0 * dim_ + 1.0) - 1.0) / 2.0));
}

int ManifoldDescriptor::ambient_size() const {
  switch (kind_) {
    case ManifoldKind::Sphere:
      return dim_ + 1;
    case ManifoldKind::Spdm: {
      const int k = matrix_order();
      return k * k;
    }
  }
  throw std::logic_error("unknown manifold kind");
}

double ManifoldDescriptor::star_radius() const {
  const double curvature_cap = kappa_upper_ > 0.0
                                   ? (std::numbers::pi / 2.0) / std::sqrt(kappa_upper_)
                                   : std::numeric_limits<double>::infinity();
  return 0.5 * std::min(injectivity_radius_, curvature_cap);
}

Point::Point(ManifoldDescriptor manifold, Eigen::VectorXd coords)
    : manifold_(manifold), coords_(std::move(coords)) {
  if (coords_.size() != manifold_.ambient_size()) {
    throw std::invalid_argument("point coordinate length does not match the manifold");
  }
  switch (manifold_.kind()) {
    case ManifoldKind::Sphere: {
      const double norm = coords_.norm();
      if (std::abs(norm - 1.0) > kRepairTol || norm == 0.0) {
        throw std::invalid_argument("sphere point is not a unit vector");
      }
      coords_ /= norm;
      break;
    }
    case ManifoldKind::Spdm: {
      const int k = manifold_.matrix_order();
      Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
          coords_.data(), k, k);
      if ((m - m.transpose()).norm() > kRepairTol) {
        throw std::invalid_argument("spdm point is not symmetric");
      }
      Eigen::MatrixXd sym = 0.5 * (m + m.transpose().eval());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
      if (eig.eigenvalues().minCoeff() <= kEigenvalueFloor) {
        throw std::invalid_argument("spdm point is not positive definite");
      }
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
          coords_[i * k + j] = sym(i, j);
        }
      }
      break;
    }
  }
}

Point Point::sphere(const Eigen::VectorXd& unit_vector) {
  return Point(ManifoldDescriptor::sphere(static_cast<int>(unit_vector.size()) - 1), unit_vector);
}

Point Point::spdm(const Eigen::MatrixXd& spd_matrix) {
  if (spd_matrix.rows() != spd_matrix.cols()) {
    throw std::invalid_argument("spdm point must be a square matrix");
  }
  const int k = static_cast<int>(spd_matrix.rows());
  Eigen::VectorXd flat(k * k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      flat[i * k + j] = spd_matrix(i, j);
    }
  }
  return Point(ManifoldDescriptor::spdm(k), flat);
}

Eigen::MatrixXd Point::matrix() const {
  if (manifold_.kind() != ManifoldKind::Spdm) {
    throw std::logic_error("matrix() is only defined for spdm points");
  }
  const int k = manifold_.matrix_order();
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      coords_.data(), k, k);
}

TangentVector::TangentVector(Point footpoint, Eigen::VectorXd coords)
    : footpoint_(std::move(footpoint)), coords_(std::move(coords)) {
  if (coords_.size() != footpoint_.manifold().ambient_size()) {
    throw std::invalid_argument("tangent coordinate length does not match the manifold");
  }
  switch (footpoint_.manifold().kind()) {
    case ManifoldKind::Sphere: {
      const double along = coords_.dot(footpoint_.coords());
      if (std::abs(along) > kRepairTol) {
        throw std::invalid_argument("vector is not tangent to the sphere at its footpoint");
      }
      coords_ -= along * footpoint_.coords();
      break;
    }
    case ManifoldKind::Spdm: {
      const int k = footpoint_.manifold().matrix_order();
      Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
          coords_.data(), k, k);
      if ((m - m.transpose()).norm() > kRepairTol) {
        throw std::invalid_argument("spdm tangent vector is not symmetric");
      }
      Eigen::MatrixXd sym = 0.5 * (m + m.transpose().eval());
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
          coords_[i * k + j] = sym(i, j);
        }
      }
      break;
    }
  }
}

TangentVector TangentVector::spdm(const Point& footpoint, const Eigen::MatrixXd& sym) {
  const int k = static_cast<int>(sym.rows());
  Eigen::VectorXd flat(k * k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      flat[i * k + j] = sym(i, j);
    }
  }
  return TangentVector(footpoint, flat);
}

Eigen::MatrixXd TangentVector::matrix() const {
  if (footpoint_.manifold().kind() != ManifoldKind::Spdm) {
    throw std::logic_error("matrix() is only defined for spdm tangent vectors");
  }
  const int k = footpoint_.manifold().matrix_order();
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      coords_.data(), k, k);
}

TangentVector TangentVector::scaled(double factor) const {
  return TangentVector(footpoint_, coords_ * factor);
}

BallSpec::BallSpec(Point center, double radius) : center_(std::move(center)), radius_(radius) {
  if (!(radius_ > 0.0)) {
    throw std::invalid_argument("ball radius must be positive");
  }
  if (radius_ > center_.manifold().star_radius()) {
    throw std::invalid_argument("ball radius exceeds the admissible star radius");
  }
}

namespace {

void require_same_footpoint(const TangentVector& v, const TangentVector& w) {
  if (v.footpoint().manifold() != w.footpoint().manifold() ||
      (v.footpoint().coords() - w.footpoint().coords()).lpNorm<Eigen::Infinity>() >
          kInvariantTol) {
    throw FootpointMismatchError("tangent vectors have different footpoints");
  }
}

void require_same_manifold(const Point& p, const Point& q) {
  if (p.manifold() != q.manifold()) {
    throw std::invalid_argument("points live on different manifolds");
  }
}

}  // namespace

double metric_inner(const TangentVector& v, const TangentVector& w) {
  require_same_footpoint(v, w);
  switch (v.footpoint().manifold().kind()) {
    case ManifoldKind::Sphere:
      return v.coords().dot(w.coords());
    case ManifoldKind::Spdm: {
      const Eigen::MatrixXd p = v.footpoint().matrix();
      const auto llt = p.llt();
      const Eigen::MatrixXd pu = llt.solve(v.matrix());
      const Eigen::MatrixXd pw = llt.solve(w.matrix());
      return (pu * pw).trace();
    }
  }
  throw std::logic_error("unknown manifold kind");
}

double tangent_norm(const TangentVector& v) {
  return std::sqrt(std::max(0.0, metric_inner(v, v)));
}

double distance(const Point& p, const Point& q) {
  require_same_manifold(p, q);
  switch (p.manifold().kind()) {
    case ManifoldKind::Sphere:
      return sphere_distance(p, q);
    case ManifoldKind::Spdm:
      return spdm_distance(p, q);
  }
  throw std::logic_error("unknown manifold kind");
}

Point exp_map(const TangentVector& v) {
  switch (v.footpoint().manifold().kind()) {
    case ManifoldKind::Sphere:
      return sphere_exp(v.footpoint(), v);
    case ManifoldKind::Spdm:
      return spdm_exp(v.footpoint(), v);
  }
  throw std::logic_error("unknown manifold kind");
}

TangentVector log_map(const Point& p, const Point& q) {
  require_same_manifold(p, q);
  switch (p.manifold().kind()) {
    case ManifoldKind::Sphere:
      return sphere_log(p, q);
    case ManifoldKind::Spdm:
      return spdm_log(p, q);
  }
  throw std::logic_error("unknown manifold kind");
}

Point geodesic_point(const Point& p, const Point& q, double t) {
  if (t < 0.0 || t > 1.0) {
    throw std::domain_error("geodesic parameter must lie in [0, 1]");
  }
  return exp_map(log_map(p, q).scaled(t));
}

bool in_ball(const BallSpec& ball, const Point& p) {
  return distance(ball.center(), p) < ball.radius();
}

}  // namespace manifold_dp
