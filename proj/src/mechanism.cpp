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

#include "manifold_dp/mechanism.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>
#include <vector>

#include "manifold_dp/sphere.hpp"
#include "manifold_dp/spdm.hpp"

namespace manifold_dp {

namespace {

constexpr std::uint64_t kAcceptanceWindow = 10000;
constexpr long long kMaxConditionedRejections = 100000;

}  // namespace

MechanismConfig MechanismConfig::defaults_for(ManifoldKind kind) {
  MechanismConfig cfg;
  cfg.sensitivity_source = kind == ManifoldKind::Sphere ? SensitivitySource::Empirical
                                                        : SensitivitySource::Theoretical;
  return cfg;
}

double curvature_factor(double r, double kappa) {
  if (r < 0.0) {
    throw std::domain_error("ball radius must be nonnegative");
  }
  if (kappa <= 0.0) {
    return 1.0;
  }
  const double x = 2.0 * r * std::sqrt(kappa);
  if (x == 0.0) {
    return 1.0;
  }
  const double t = std::tan(x);
  // The admissible range is x < pi/2. The closest double to pi/2 is itself
  // strictly below pi/2 (tan stays positive there), so it is accepted.
  if (x > std::numbers::pi / 2.0 || t <= 0.0) {
    throw AssumptionViolationError("2 r sqrt(kappa) must be below pi/2");
  }
  return x / t;
}

double sensitivity(int n, double r, double kappa) {
  if (n < 1) {
    throw std::invalid_argument("sample size must be >= 1");
  }
  const double h = curvature_factor(r, kappa);
  return 2.0 * r * (2.0 - h) / (n * h);
}

double tangent_bound_theoretical(double r, double kappa) {
  return 2.0 * r * (2.0 - curvature_factor(r, kappa));
}

double tangent_bound_empirical(const BallSpec& ball, int grid_n) {
  const ManifoldDescriptor& m = ball.center().manifold();
  if (m.kind() != ManifoldKind::Sphere || m.dim() != 2) {
    throw std::invalid_argument("the empirical tangent bound is only implemented for S^2");
  }
  if (grid_n < 8) {
    throw std::invalid_argument("boundary grid must have at least 8 points");
  }

  // Orthonormal frame at the center.
  const Eigen::Vector3d c = ball.center().coords();
  int smallest = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(c[i]) < std::abs(c[smallest])) {
      smallest = i;
    }
  }
  Eigen::Vector3d e1 = Eigen::Vector3d::Unit(smallest);
  e1 = (e1 - e1.dot(c) * c).normalized();
  const Eigen::Vector3d e2 = c.cross(e1);

  const double r = ball.radius();
  std::vector<Eigen::VectorXd> logs;
  logs.reserve(grid_n);
  Point footpoint = ball.center();  // replaced by the first boundary point below
  for (int i = 0; i < grid_n; ++i) {
    const double phi = 2.0 * std::numbers::pi * i / grid_n;
    Eigen::VectorXd dir = r * (std::cos(phi) * e1 + std::sin(phi) * e2);
    const Point boundary = sphere_exp(ball.center(), TangentVector(ball.center(), dir));
    if (i == 0) {
      footpoint = boundary;
    }
    logs.push_back(sphere_log(footpoint, boundary).coords());
  }

  double max_sq = 0.0;
  for (int i = 0; i < grid_n; ++i) {
    for (int j = i + 1; j < grid_n; ++j) {
      max_sq = std::max(max_sq, (logs[i] - logs[j]).squaredNorm());
    }
  }
  return std::sqrt(max_sq);
}

Eigen::VectorXd sample_euclidean_laplace(const Eigen::VectorXd& center, double sigma,
                                         std::mt19937_64& rng) {
  const int dim = static_cast<int>(center.size());
  if (dim < 1) {
    throw std::invalid_argument("dimension must be >= 1");
  }
  if (sigma < 0.0) {
    throw std::domain_error("scale must be nonnegative");
  }
  if (sigma == 0.0) {
    return center;
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd direction(dim);
  double norm = 0.0;
  do {
    for (int i = 0; i < dim; ++i) {
      direction[i] = gauss(rng);
    }
    norm = direction.norm();
  } while (norm == 0.0);
  std::gamma_distribution<double> radius(static_cast<double>(dim), 1.0);
  return center + (radius(rng) * sigma / norm) * direction;
}

RiemannianLaplaceSampler::RiemannianLaplaceSampler(Point eta, double sigma, MechanismConfig cfg,
                                                   std::optional<BallSpec> ball)
    : eta_(eta), current_(std::move(eta)), sigma_(sigma), cfg_(cfg), ball_(std::move(ball)) {
  if (!(sigma_ > 0.0)) {
    throw std::domain_error("laplace rate must be positive");
  }
  if (cfg_.burn_in < 0 || cfg_.thinning < 1) {
    throw std::invalid_argument("burn_in must be >= 0 and thinning >= 1");
  }
  if (cfg_.condition_on_ball && !ball_.has_value()) {
    throw std::invalid_argument("ball conditioning requires a ball");
  }
}

void RiemannianLaplaceSampler::advance(int n_steps, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const bool is_sphere = eta_.manifold().kind() == ManifoldKind::Sphere;
  for (int i = 0; i < n_steps; ++i) {
    const TangentVector v = is_sphere ? draw_tangent_proposal(current_, sigma_, rng)
                                      : spdm_tangent_proposal(current_, sigma_, rng);
    const Point candidate = exp_map(v);
    const double candidate_dist = distance(eta_, candidate);
    ++steps_;
    ++window_steps_;
    if (unif(rng) < std::exp((current_dist_ - candidate_dist) / sigma_)) {
      current_ = candidate;
      current_dist_ = candidate_dist;
      ++accepts_;
      ++window_accepts_;
    }
    if (window_steps_ >= kAcceptanceWindow) {
      if (window_accepts_ == 0) {
        std::ostringstream msg;
        msg << "chain acceptance rate below 1e-4 over a " << kAcceptanceWindow
            << "-step window (sigma=" << sigma_ << ", total steps=" << steps_
            << ", overall acceptance=" << acceptance_rate() << ")";
        throw MixingFailureError(msg.str());
      }
      window_steps_ = 0;
      window_accepts_ = 0;
    }
  }
}

Point RiemannianLaplaceSampler::next(std::mt19937_64& rng) {
  if (!warmed_up_) {
    advance(cfg_.burn_in, rng);
    warmed_up_ = true;
  } else {
    advance(cfg_.thinning, rng);
  }
  if (cfg_.condition_on_ball) {
    long long rejected = 0;
    while (!in_ball(*ball_, current_)) {
      if (++rejected > kMaxConditionedRejections) {
        throw MixingFailureError("conditioned sampler kept landing outside the ball");
      }
      advance(cfg_.thinning, rng);
    }
  }
  return current_;
}

double RiemannianLaplaceSampler::acceptance_rate() const {
  return steps_ > 0 ? static_cast<double>(accepts_) / static_cast<double>(steps_) : 0.0;
}

Point sample_riemannian_laplace(const Point& eta, double sigma, const MechanismConfig& cfg,
                                std::optional<BallSpec> ball, std::mt19937_64& rng) {
  RiemannianLaplaceSampler sampler(eta, sigma, cfg, std::move(ball));
  return sampler.next(rng);
}

namespace {

double scaled_sigma(const MechanismConfig& cfg, double delta) {
  const double numerator = cfg.scale_rule == ScaleRule::Homogeneous ? delta : 2.0 * delta;
  return numerator / cfg.epsilon;
}

}  // namespace

PrivatizeResult privatize_frechet_mean(const Dataset& data, const MechanismConfig& cfg,
                                       std::mt19937_64& rng) {
  if (!(cfg.epsilon > 0.0)) {
    throw std::invalid_argument("epsilon must be positive");
  }
  const MeanResult mean = frechet_mean(data);
  const double r = data.ball().radius();
  const double kappa = data.manifold().kappa_upper();
  const int n = data.size();
  const double h = curvature_factor(r, kappa);

  double delta = 0.0;
  switch (cfg.sensitivity_source) {
    case SensitivitySource::Theoretical:
      delta = sensitivity(n, r, kappa);
      break;
    case SensitivitySource::Empirical:
      delta = tangent_bound_empirical(data.ball(), cfg.empirical_grid_n) / (n * h);
      break;
  }
  const double sigma = scaled_sigma(cfg, delta);

  std::optional<BallSpec> ball;
  if (cfg.condition_on_ball) {
    ball = data.ball();
  }
  Point draw = sample_riemannian_laplace(mean.mean, sigma, cfg, std::move(ball), rng);

  MechanismAudit audit;
  audit.n = n;
  audit.r = r;
  audit.kappa = kappa;
  audit.h = h;
  audit.delta = delta;
  audit.epsilon = cfg.epsilon;
  audit.sigma = sigma;
  audit.sensitivity_source = cfg.sensitivity_source;
  audit.conditioned = cfg.condition_on_ball;
  return PrivatizeResult{std::move(draw), audit};
}

Eigen::VectorXd ambient_embedding(const Point& p) {
  switch (p.manifold().kind()) {
    case ManifoldKind::Sphere:
      return p.coords();
    case ManifoldKind::Spdm:
      return vech(p.matrix());
  }
  throw std::logic_error("unknown manifold kind");
}

BaselineResult privatize_euclidean_baseline(const Dataset& data, const MechanismConfig& cfg,
                                            std::mt19937_64& rng) {
  if (!(cfg.epsilon > 0.0)) {
    throw std::invalid_argument("epsilon must be positive");
  }
  const MeanResult mean = frechet_mean(data);
  const bool is_sphere = data.manifold().kind() == ManifoldKind::Sphere;
  const double r = data.ball().radius();
  const double ambient_r = is_sphere ? chord_radius(r) : ambient_radius(r);
  // Flat ambient space: h = 1, so the matched sensitivity is 2 r_E / n.
  const double delta = 2.0 * ambient_r / data.size();
  const double sigma = scaled_sigma(cfg, delta);

  const Eigen::VectorXd embedded = ambient_embedding(mean.mean);
  Eigen::VectorXd noisy = sample_euclidean_laplace(embedded, sigma, rng);

  bool on_manifold = false;
  if (is_sphere) {
    on_manifold = std::abs(noisy.norm() - 1.0) <= kInvariantTol;
  } else {
    const Eigen::MatrixXd m = unvech(noisy);
    const SymEigen eig = sym_eigen(m);
    on_manifold = eig.eigenvalues.minCoeff() > 1e-12;
  }
  return BaselineResult{std::move(noisy), on_manifold, delta, sigma};
}

double project_subspace_noise(int dim_d, int dim_big, double sigma, long long n_draws,
                              std::mt19937_64& rng) {
  if (dim_d < 1 || dim_d > dim_big) {
    throw std::invalid_argument("projection requires 1 <= d <= D");
  }
  if (n_draws < 1) {
    throw std::invalid_argument("n_draws must be >= 1");
  }
  const Eigen::VectorXd center = Eigen::VectorXd::Zero(dim_big);
  double acc = 0.0;
  for (long long i = 0; i < n_draws; ++i) {
    const Eigen::VectorXd y = sample_euclidean_laplace(center, sigma, rng);
    acc += y.head(dim_d).squaredNorm();
  }
  return acc / static_cast<double>(n_draws);
}

}  // namespace manifold_dp
