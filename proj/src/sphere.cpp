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

#include "manifold_dp/sphere.hpp"

#include <cmath>
#include <numbers>

namespace manifold_dp {

namespace {

void require_sphere(const ManifoldDescriptor& m) {
  if (m.kind() != ManifoldKind::Sphere) {
    throw std::invalid_argument("operation requires a sphere manifold");
  }
}

double clamped_cos_angle(const Point& p, const Point& q) {
  return std::clamp(p.coords().dot(q.coords()), -1.0, 1.0);
}

}  // namespace

Point sphere_exp(const Point& p, const TangentVector& v) {
  require_sphere(p.manifold());
  if ((v.footpoint().coords() - p.coords()).lpNorm<Eigen::Infinity>() > kInvariantTol) {
    throw FootpointMismatchError("tangent vector is not based at the given point");
  }
  const double theta = v.coords().norm();
  if (theta == 0.0) {
    return p;
  }
  Eigen::VectorXd out =
      std::cos(theta) * p.coords() + (std::sin(theta) / theta) * v.coords();
  return Point(p.manifold(), std::move(out));
}

TangentVector sphere_log(const Point& p, const Point& q) {
  require_sphere(p.manifold());
  const double c = clamped_cos_angle(p, q);
  if (1.0 + c <= 1e-12) {
    throw LogUndefinedError("inverse exponential map is undefined at the antipode");
  }
  const double theta = std::acos(c);
  // theta/sin(theta) via its series near zero; the direct quotient is 0/0 at
  // q == p, which the gradient evaluates routinely.
  double factor;
  if (theta < 1e-6) {
    const double t2 = theta * theta;
    factor = 1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0;
  } else {
    factor = theta / std::sin(theta);
  }
  Eigen::VectorXd out = factor * (q.coords() - c * p.coords());
  return TangentVector(p, std::move(out));
}

double sphere_distance(const Point& p, const Point& q) {
  return std::acos(clamped_cos_angle(p, q));
}

Point sample_polar_cap(const ManifoldDescriptor& manifold, double r, std::mt19937_64& rng) {
  require_sphere(manifold);
  if (manifold.dim() != 2) {
    throw std::invalid_argument("polar-cap sampling is only implemented for d = 2");
  }
  if (!(r > 0.0) || r > std::numbers::pi) {
    throw std::domain_error("cap radius must lie in (0, pi]");
  }
  std::uniform_real_distribution<double> theta_dist(0.0, r);
  std::uniform_real_distribution<double> phi_dist(0.0, 2.0 * std::numbers::pi);
  const double theta = theta_dist(rng);
  const double phi = phi_dist(rng);
  Eigen::VectorXd coords(3);
  coords << std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta);
  return Point(manifold, std::move(coords));
}

double chord_radius(double r) {
  if (r < 0.0 || r > std::numbers::pi) {
    throw std::domain_error("cap radius must lie in [0, pi]");
  }
  return 2.0 * std::sin(r / 2.0);
}

TangentVector draw_tangent_proposal(const Point& x, double sigma, std::mt19937_64& rng) {
  require_sphere(x.manifold());
  if (!(sigma > 0.0)) {
    throw std::domain_error("proposal length must be positive");
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int ambient = x.manifold().ambient_size();
  while (true) {
    Eigen::VectorXd z(ambient);
    for (int i = 0; i < ambient; ++i) {
      z[i] = gauss(rng);
    }
    const double norm = z.norm();
    if (norm == 0.0) {
      continue;
    }
    z *= sigma / norm;
    Eigen::VectorXd v = z - z.dot(x.coords()) * x.coords();
    if (v.norm() == 0.0) {
      continue;  // drawn parallel to x
    }
    return TangentVector(x, std::move(v));
  }
}

}  // namespace manifold_dp
