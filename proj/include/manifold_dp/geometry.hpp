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

#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace manifold_dp {

// Tolerances shared by the validating constructors: inputs within kRepairTol
// of a valid representation are repaired (renormalized / symmetrized /
// projected); anything farther off is rejected. After repair the stored
// coordinates satisfy the invariants to kInvariantTol.
inline constexpr double kInvariantTol = 1e-10;
inline constexpr double kRepairTol = 1e-8;

class GeometryError : public std::runtime_error {
 public:
  explicit GeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

// Two tangent vectors with different footpoints were combined.
class FootpointMismatchError : public GeometryError {
 public:
  explicit FootpointMismatchError(const std::string& msg) : GeometryError(msg) {}
};

// Inverse exponential map requested at or beyond the cut locus.
class LogUndefinedError : public GeometryError {
 public:
  explicit LogUndefinedError(const std::string& msg) : GeometryError(msg) {}
};

enum class ManifoldKind { Sphere, Spdm };

// Identifies a concrete manifold together with the curvature data the
// mechanism needs: intrinsic dimension, an upper bound on the sectional
// curvatures, and the injectivity radius.
class ManifoldDescriptor {
 public:
  // Unit sphere S^d embedded in R^(d+1); constant curvature 1.
  static ManifoldDescriptor sphere(int dim);
  // Symmetric positive definite order-k matrices with the affine-invariant
  // metric. All sectional curvatures are nonpositive, so the curvature upper
  // bound is 0 and the injectivity radius is infinite.
  static ManifoldDescriptor spdm(int order);

  ManifoldKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double kappa_upper() const { return kappa_upper_; }
  double injectivity_radius() const { return injectivity_radius_; }

  // Matrix order k; only meaningful for Spdm.
  int matrix_order() const;
  // Length of the stored coordinate array: d+1 for the sphere, k*k for Spdm.
  int ambient_size() const;
  // Largest admissible data-ball radius, (1/2) min(inj, (pi/2) kappa^{-1/2}).
  // Finite only for positively curved manifolds.
  double star_radius() const;

  friend bool operator==(const ManifoldDescriptor&, const ManifoldDescriptor&) = default;

 private:
  ManifoldDescriptor(ManifoldKind kind, int dim, double kappa, double inj)
      : kind_(kind), dim_(dim), kappa_upper_(kappa), injectivity_radius_(inj) {}

  ManifoldKind kind_;
  int dim_;
  double kappa_upper_;
  double injectivity_radius_;
};

// A location on a manifold. Sphere points are unit vectors in R^(d+1); Spdm
// points are positive definite matrices stored row-major. Construction
// validates (and, within kRepairTol, repairs) the representation.
class Point {
 public:
  Point(ManifoldDescriptor manifold, Eigen::VectorXd coords);

  // Convenience factories that infer the descriptor from the input shape.
  static Point sphere(const Eigen::VectorXd& unit_vector);
  static Point spdm(const Eigen::MatrixXd& spd_matrix);

  const ManifoldDescriptor& manifold() const { return manifold_; }
  const Eigen::VectorXd& coords() const { return coords_; }

  // The k x k matrix view of an Spdm point.
  Eigen::MatrixXd matrix() const;

 private:
  ManifoldDescriptor manifold_;
  Eigen::VectorXd coords_;
};

// An element of the tangent space at `footpoint`: orthogonal to the footpoint
// for the sphere, a symmetric matrix for Spdm.
class TangentVector {
 public:
  TangentVector(Point footpoint, Eigen::VectorXd coords);

  static TangentVector spdm(const Point& footpoint, const Eigen::MatrixXd& sym);

  const Point& footpoint() const { return footpoint_; }
  const Eigen::VectorXd& coords() const { return coords_; }
  Eigen::MatrixXd matrix() const;

  TangentVector scaled(double factor) const;

 private:
  Point footpoint_;
  Eigen::VectorXd coords_;
};

// The data certificate: all data lie in the open geodesic ball of the given
// radius around `center`, with radius at most the descriptor's star radius.
// (The radius may equal star_radius() exactly: the closest double sits
// strictly below the real bound.)
class BallSpec {
 public:
  BallSpec(Point center, double radius);

  const Point& center() const { return center_; }
  double radius() const { return radius_; }

 private:
  Point center_;
  double radius_;
};

// Riemannian inner product of two tangent vectors with a common footpoint.
// Sphere: ambient dot product. Spdm: Tr(p^-1 u p^-1 v).
double metric_inner(const TangentVector& v, const TangentVector& w);

// sqrt(metric_inner(v, v)).
double tangent_norm(const TangentVector& v);

// Geodesic distance; dispatches to the concrete geometry.
double distance(const Point& p, const Point& q);

// Exponential map at v.footpoint().
Point exp_map(const TangentVector& v);

// Inverse exponential map of q at p. Throws LogUndefinedError at the cut
// locus (sphere: antipodal points).
TangentVector log_map(const Point& p, const Point& q);

// Point at parameter t in [0,1] along the geodesic from p to q.
Point geodesic_point(const Point& p, const Point& q, double t);

// True iff distance(ball.center, p) < ball.radius.
bool in_ball(const BallSpec& ball, const Point& p);

}  // namespace manifold_dp
