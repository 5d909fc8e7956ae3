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

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>

#include "manifold_dp/frechet.hpp"
#include "manifold_dp/geometry.hpp"

namespace manifold_dp {

// The data ball is too large for the curvature bound to apply.
class AssumptionViolationError : public std::domain_error {
 public:
  explicit AssumptionViolationError(const std::string& msg) : std::domain_error(msg) {}
};

// The Markov chain stopped accepting moves.
class MixingFailureError : public std::runtime_error {
 public:
  explicit MixingFailureError(const std::string& msg) : std::runtime_error(msg) {}
};

// sigma = delta/epsilon is valid when the normalizing constant is
// footpoint-independent, which holds on the homogeneous spaces implemented
// here; sigma = 2*delta/epsilon is the general rule.
enum class ScaleRule { Homogeneous, General };

// Where the sensitivity numerator comes from: the curvature-corrected
// closed form, or the boundary-grid scan (sphere only).
enum class SensitivitySource { Theoretical, Empirical };

struct MechanismConfig {
  double epsilon = 1.0;
  ScaleRule scale_rule = ScaleRule::Homogeneous;
  SensitivitySource sensitivity_source = SensitivitySource::Theoretical;
  int empirical_grid_n = 720;
  bool condition_on_ball = false;
  int burn_in = 10000;
  int thinning = 100;

  // Per-geometry defaults: the sphere uses the empirical tangent bound (the
  // closed form is loose under positive curvature); Spdm uses the theoretical
  // bound, which is tight there.
  static MechanismConfig defaults_for(ManifoldKind kind);
};

// Curvature correction h(r, kappa) = 2r sqrt(kappa) cot(2r sqrt(kappa)) for
// kappa > 0 and 1 for kappa <= 0; lies in (0, 1]. Requires
// 2r sqrt(kappa) < pi/2 (the representable boundary value is accepted since
// it rounds below the real pi/2).
double curvature_factor(double r, double kappa);

// Global sensitivity bound 2r(2-h)/(n h) for the Fréchet mean of n points in
// a radius-r ball.
double sensitivity(int n, double r, double kappa);

// Uniform bound 2r(2-h) on |exp_m^{-1}(x) - exp_m^{-1}(y)| over the ball.
double tangent_bound_theoretical(double r, double kappa);

// Grid estimate of max_{i,j} |exp_{x_1}^{-1}(x_i) - exp_{x_1}^{-1}(x_j)| over
// the boundary of the ball, with the footpoint fixed at one grid point (the
// ball is rotationally symmetric, so one footpoint suffices). Sphere d=2 only;
// grid_n >= 8.
double tangent_bound_empirical(const BallSpec& ball, int grid_n);

// One draw from the spherically symmetric density exp(-|y - center|_2 / sigma)
// on R^d: radius Gamma(d, 1) times sigma, direction a normalized Gaussian.
// sigma = 0 returns the center exactly.
Eigen::VectorXd sample_euclidean_laplace(const Eigen::VectorXd& center, double sigma,
                                         std::mt19937_64& rng);

// Metropolis-Hastings chain targeting the intrinsic Laplace density
// exp(-rho(eta, x)/sigma) with respect to the volume measure. The chain
// starts at eta; the first draw is taken after burn_in steps and subsequent
// draws are separated by `thinning` steps. With condition_on_ball set,
// thinned draws outside the ball are discarded and the chain keeps running,
// which realizes the distribution conditioned on the ball.
class RiemannianLaplaceSampler {
 public:
  RiemannianLaplaceSampler(Point eta, double sigma, MechanismConfig cfg,
                           std::optional<BallSpec> ball = std::nullopt);

  Point next(std::mt19937_64& rng);

  double acceptance_rate() const;
  std::uint64_t total_steps() const { return steps_; }

 private:
  void advance(int n_steps, std::mt19937_64& rng);

  Point eta_;
  Point current_;
  double sigma_;
  double current_dist_ = 0.0;
  MechanismConfig cfg_;
  std::optional<BallSpec> ball_;
  bool warmed_up_ = false;
  std::uint64_t steps_ = 0;
  std::uint64_t accepts_ = 0;
  std::uint64_t window_steps_ = 0;
  std::uint64_t window_accepts_ = 0;
};

// Single draw from the intrinsic Laplace with footpoint eta and rate sigma on
// eta's manifold.
Point sample_riemannian_laplace(const Point& eta, double sigma, const MechanismConfig& cfg,
                                std::optional<BallSpec> ball, std::mt19937_64& rng);

// Calibration record attached to each private release.
struct MechanismAudit {
  int n = 0;
  double r = 0.0;
  double kappa = 0.0;
  double h = 0.0;
  double delta = 0.0;
  double epsilon = 0.0;
  double sigma = 0.0;
  SensitivitySource sensitivity_source = SensitivitySource::Theoretical;
  bool conditioned = false;
};

struct PrivatizeResult {
  Point point;
  MechanismAudit audit;
};

// Full pipeline: Fréchet mean, sensitivity per the configured source, noise
// rate per the scale rule, one intrinsic Laplace draw footed at the mean.
PrivatizeResult privatize_frechet_mean(const Dataset& data, const MechanismConfig& cfg,
                                       std::mt19937_64& rng);

// Ambient embedding used by the Euclidean baseline: sphere points as their
// R^(d+1) coordinates, Spdm points as vech of the matrix.
Eigen::VectorXd ambient_embedding(const Point& p);

struct BaselineResult {
  Eigen::VectorXd ambient;   // perturbed embedded mean
  bool on_manifold = false;  // does the output decode to a valid Point
  double delta = 0.0;        // ambient sensitivity 2 r_E / n
  double sigma = 0.0;
};

// Euclidean baseline: perturbs the embedded mean with the Euclidean Laplace,
// calibrated by the matched ambient radius (chord radius for the sphere,
// e^r - 1 for Spdm; the ambient space is flat, so h = 1).
BaselineResult privatize_euclidean_baseline(const Dataset& data, const MechanismConfig& cfg,
                                            std::mt19937_64& rng);

// Monte Carlo estimate of E |P x - center|^2 where x is a Euclidean Laplace
// draw in R^D and P projects onto the first d coordinates; the analytic value
// is sigma^2 d (D+1). Requires 1 <= d <= D.
double project_subspace_noise(int dim_d, int dim_big, double sigma, long long n_draws,
                              std::mt19937_64& rng);

}  // namespace manifold_dp
