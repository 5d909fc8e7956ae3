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

#include "manifold_dp/spdm.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace manifold_dp {

namespace {

constexpr long long kMaxConsecutiveRejections = 1000000;

void require_spdm(const ManifoldDescriptor& m) {
  if (m.kind() != ManifoldKind::Spdm) {
    throw std::invalid_argument("operation requires an spdm manifold");
  }
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& a) {
  return 0.5 * (a + a.transpose());
}

double inv_sqrt(double x) { return 1.0 / std::sqrt(x); }

// Log of the eigenvalues of q^{-1/2} p q^{-1/2}, the ingredient shared by
// spdm_log and spdm_distance.
Eigen::VectorXd log_spectrum(const Point& q, const Point& p, Eigen::MatrixXd* basis = nullptr) {
  const Eigen::MatrixXd qi = sym_matrix_function(q.matrix(), inv_sqrt);
  const SymEigen inner = sym_eigen(symmetrized(qi * p.matrix() * qi));
  if (inner.eigenvalues.minCoeff() <= 0.0) {
    throw std::invalid_argument("matrix is not positive definite");
  }
  if (basis != nullptr) {
    *basis = inner.eigenvectors;
  }
  return inner.eigenvalues.array().log();
}

}  // namespace

SymEigen sym_eigen(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetrized(a));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("symmetric eigendecomposition failed");
  }
  return SymEigen{solver.eigenvalues(), solver.eigenvectors()};
}

Eigen::MatrixXd sym_matrix_function(const Eigen::MatrixXd& a, double (*f)(double)) {
  const SymEigen e = sym_eigen(a);
  Eigen::VectorXd mapped(e.eigenvalues.size());
  for (int i = 0; i < mapped.size(); ++i) {
    mapped[i] = f(e.eigenvalues[i]);
  }
  return symmetrized(e.eigenvectors * mapped.asDiagonal() * e.eigenvectors.transpose());
}

Point spdm_exp(const Point& p, const TangentVector& v) {
  require_spdm(p.manifold());
  if ((v.footpoint().coords() - p.coords()).lpNorm<Eigen::Infinity>() > kInvariantTol) {
    throw FootpointMismatchError("tangent vector is not based at the given point");
  }
  const Eigen::MatrixXd ps = sym_matrix_function(p.matrix(), std::sqrt);
  const Eigen::MatrixXd pi = sym_matrix_function(p.matrix(), inv_sqrt);
  const Eigen::MatrixXd inner = sym_matrix_function(symmetrized(pi * v.matrix() * pi), std::exp);
  return Point::spdm(symmetrized(ps * inner * ps));
}

TangentVector spdm_log(const Point& q, const Point& p) {
  require_spdm(q.manifold());
  Eigen::MatrixXd basis;
  const Eigen::VectorXd logs = log_spectrum(q, p, &basis);
  const Eigen::MatrixXd qs = sym_matrix_function(q.matrix(), std::sqrt);
  const Eigen::MatrixXd inner =
      symmetrized(basis * logs.asDiagonal() * basis.transpose());
  return TangentVector::spdm(q, symmetrized(qs * inner * qs));
}

double spdm_distance(const Point& q, const Point& p) {
  require_spdm(q.manifold());
  return log_spectrum(q, p).norm();
}

Eigen::VectorXd vech(const Eigen::MatrixXd& sym) {
  const int k = static_cast<int>(sym.rows());
  if (sym.cols() != k) {
    throw std::invalid_argument("vech requires a square matrix");
  }
  Eigen::VectorXd out(k * (k + 1) / 2);
  int idx = 0;
  for (int j = 0; j < k; ++j) {
    for (int i = j; i < k; ++i) {
      out[idx++] = sym(i, j);
    }
  }
  return out;
}

Eigen::MatrixXd unvech(const Eigen::VectorXd& x) {
  const auto len = static_cast<double>(x.size());
  const int k = static_cast<int>(std::lround((std::sqrt(8.0 * len + 1.0) - 1.0) / 2.0));
  if (k * (k + 1) / 2 != x.size()) {
    throw std::invalid_argument("unvech input length is not triangular");
  }
  Eigen::MatrixXd out(k, k);
  int idx = 0;
  for (int j = 0; j < k; ++j) {
    for (int i = j; i < k; ++i) {
      out(i, j) = x[idx];
      out(j, i) = x[idx];
      ++idx;
    }
  }
  return out;
}

double ambient_radius(double r) {
  if (r < 0.0) {
    throw std::domain_error("geodesic radius must be nonnegative");
  }
  return std::expm1(r);
}

Point wishart_sample(int k, int df, std::mt19937_64& rng) {
  if (df < k) {
    throw std::invalid_argument("wishart degrees of freedom must be >= the matrix order");
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(k));  // V = I/k
  while (true) {
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(k, k);
    Eigen::VectorXd z(k);
    for (int i = 0; i < df; ++i) {
      for (int j = 0; j < k; ++j) {
        z[j] = scale * gauss(rng);
      }
      sum += z * z.transpose();
    }
    // A draw at the eigenvalue floor is not representable as a point (its
    // geodesic distance to the identity is effectively infinite); redraw.
    if (sym_eigen(sum).eigenvalues.minCoeff() > 1e-12) {
      return Point::spdm(symmetrized(sum));
    }
  }
}

Point sample_ball_wishart(const BallSpec& ball, int k, int df, std::mt19937_64& rng,
                          BallSampleStats* stats) {
  require_spdm(ball.center().manifold());
  if ((ball.center().matrix() - Eigen::MatrixXd::Identity(k, k)).norm() > kInvariantTol) {
    throw std::invalid_argument("ball-conditioned wishart sampling requires center I_k");
  }
  for (long long attempt = 0; attempt < kMaxConsecutiveRejections; ++attempt) {
    Point draw = wishart_sample(k, df, rng);
    if (stats != nullptr) {
      ++stats->proposed;
    }
    if (in_ball(ball, draw)) {
      if (stats != nullptr) {
        ++stats->accepted;
      }
      return draw;
    }
  }
  throw SamplerStuckError("wishart ball sampler exceeded 10^6 consecutive rejections");
}

TangentVector spdm_tangent_proposal(const Point& x, double sigma, std::mt19937_64& rng) {
  require_spdm(x.manifold());
  if (!(sigma > 0.0)) {
    throw std::domain_error("proposal length must be positive");
  }
  const int k = x.manifold().matrix_order();
  std::normal_distribution<double> gauss(0.0, 1.0);
  while (true) {
    Eigen::MatrixXd z(k, k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        z(i, j) = gauss(rng);
      }
    }
    // (Z + Z^T)/2 has standard-normal coefficients in a Frobenius-orthonormal
    // basis of Sym(k); conjugating by x^{1/2} makes it isotropic for <.,.>_x,
    // and its Frobenius norm equals the metric norm of the result.
    const Eigen::MatrixXd g = symmetrized(z);
    const double norm = g.norm();
    if (norm == 0.0) {
      continue;
    }
    const Eigen::MatrixXd xs = sym_matrix_function(x.matrix(), std::sqrt);
    return TangentVector::spdm(x, symmetrized(xs * ((sigma / norm) * g) * xs));
  }
}

}  // namespace manifold_dp
