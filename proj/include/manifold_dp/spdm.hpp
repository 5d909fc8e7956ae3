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
#include <random>

#include "manifold_dp/geometry.hpp"

namespace manifold_dp {

// Rejection sampling gave up; signals a misconfigured target region.
class SamplerStuckError : public std::runtime_error {
 public:
  explicit SamplerStuckError(const std::string& msg) : std::runtime_error(msg) {}
};

// Eigendecomposition of a symmetric matrix: A = Q diag(lambda) Q^T with
// eigenvalues ascending and Q orthogonal.
struct SymEigen {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

SymEigen sym_eigen(const Eigen::MatrixXd& a);

// Q f(diag) Q^T for a scalar function applied to the eigenvalues. All matrix
// functions here (Exp, Log, square roots) go through this path, never through
// series, so symmetry is preserved exactly.
Eigen::MatrixXd sym_matrix_function(const Eigen::MatrixXd& a, double (*f)(double));

// Geometry of P(k) under the affine-invariant metric <u,v>_p = Tr(p^-1 u p^-1 v).

// exp_p(v) = p^{1/2} Exp(p^{-1/2} v p^{-1/2}) p^{1/2}.
Point spdm_exp(const Point& p, const TangentVector& v);

// exp_q^{-1}(p) = q^{1/2} Log(q^{-1/2} p q^{-1/2}) q^{1/2}.
TangentVector spdm_log(const Point& q, const Point& p);

// rho(q, p) = |Log(q^{-1/2} p q^{-1/2})|_F = sqrt(sum_i log^2 lambda_i(q^-1 p)).
double spdm_distance(const Point& q, const Point& p);

// Half-vectorization: stacks the lower triangle column-wise (unweighted), the
// R^{k(k+1)/2} embedding used by the Euclidean baseline. Note the induced
// Euclidean distance counts off-diagonal entries once, so it is a metric on
// symmetric matrices but differs from the Frobenius distance.
Eigen::VectorXd vech(const Eigen::MatrixXd& sym);
Eigen::MatrixXd unvech(const Eigen::VectorXd& x);

// Frobenius radius e^r - 1 of the smallest ambient ball around the identity
// containing the geodesic ball B_r(I); requires r >= 0.
double ambient_radius(double r);

// One draw from the Wishart W(I_k / k, df), generated as the sum of df outer
// products of N(0, I_k / k) vectors. Requires integer df >= k so the draw is
// almost surely positive definite.
Point wishart_sample(int k, int df, std::mt19937_64& rng);

// Rejection-sampling statistics, accumulated across calls when passed in.
struct BallSampleStats {
  long long proposed = 0;
  long long accepted = 0;
  double acceptance_rate() const {
    return proposed > 0 ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0;
  }
};

// Wishart draw conditioned on the geodesic ball: resamples until
// rho(X, I_k) < ball.radius. The ball must be centered at the identity.
// Throws SamplerStuckError after 10^6 consecutive rejections.
Point sample_ball_wishart(const BallSpec& ball, int k, int df, std::mt19937_64& rng,
                          BallSampleStats* stats = nullptr);

// Symmetric random-walk proposal at x: a GOE-style symmetric Gaussian matrix
// is mapped into T_x P(k) by congruence with x^{1/2}, making the direction
// isotropic for <.,.>_x, then scaled to metric length sigma.
TangentVector spdm_tangent_proposal(const Point& x, double sigma, std::mt19937_64& rng);

}  // namespace manifold_dp
