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

#include <random>

#include "manifold_dp/geometry.hpp"

namespace manifold_dp {

// Closed-form geometry of the unit sphere S^d as a subset of R^(d+1).

// exp_p(v) = cos(|v|) p + sin(|v|) v/|v|; defined on all of T_p S^d.
Point sphere_exp(const Point& p, const TangentVector& v);

// exp_p^{-1}(q) = theta/sin(theta) (q - cos(theta) p), theta = arccos<p,q>.
// q == p yields the zero vector; antipodal q throws LogUndefinedError.
TangentVector sphere_log(const Point& p, const Point& q);

// Arc distance arccos(<p,q>) in [0, pi]. The inner product is clamped to
// [-1, 1] before arccos.
double sphere_distance(const Point& p, const Point& q);

// Draws a point of S^2 with polar angle theta uniform on [0, r) and azimuth
// uniform on [0, 2*pi), measured from the north pole. The distribution
// concentrates toward the pole; it is deliberately not area-uniform.
// Only d = 2 is supported.
Point sample_polar_cap(const ManifoldDescriptor& manifold, double r, std::mt19937_64& rng);

// Euclidean radius 2 sin(r/2) of the smallest ambient ball containing the
// geodesic cap of radius r; requires 0 <= r <= pi.
double chord_radius(double r);

// Symmetric random-walk proposal: a standard Gaussian vector in R^(d+1) is
// scaled to length sigma and projected onto T_x S^d, so |result| <= sigma.
// A draw parallel to x (probability zero) is redrawn.
TangentVector draw_tangent_proposal(const Point& x, double sigma, std::mt19937_64& rng);

}  // namespace manifold_dp
