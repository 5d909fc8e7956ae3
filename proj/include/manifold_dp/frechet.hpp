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

#include <vector>

#include "manifold_dp/geometry.hpp"

namespace manifold_dp {

// A dataset together with its ball certificate. Construction checks that
// every point lies in the ball, which is what guarantees existence and
// uniqueness of the mean and validity of the sensitivity calibration.
class Dataset {
 public:
  Dataset(std::vector<Point> points, BallSpec ball);

  const std::vector<Point>& points() const { return points_; }
  const BallSpec& ball() const { return ball_; }
  const ManifoldDescriptor& manifold() const { return ball_.center().manifold(); }
  int size() const { return static_cast<int>(points_.size()); }

 private:
  std::vector<Point> points_;
  BallSpec ball_;
};

struct MeanSolverOptions {
  double step = 0.5;      // t_k, fixed
  double tol = 1e-5;      // stop when rho(mu_k, mu_{k-1}) < tol
  int max_iter = 500;
  int init_index = 0;     // mu_0 = points[init_index]
  bool init_medoid = false;  // overrides init_index with the energy-minimizing data point
  bool record_energy = false;
};

struct MeanResult {
  Point mean;
  int iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;  // norm of the descent direction at the last accepted iterate
  std::vector<double> energy_trace;  // filled when record_energy is set
};

// Energy functional (1/2n) sum_i rho^2(x, x_i).
double energy(const Dataset& data, const Point& x);

// Descent direction (1/n) sum_i exp_x^{-1}(x_i), the negative Riemannian
// gradient of the energy; zero exactly at the mean.
TangentVector gradient_step_direction(const Dataset& data, const Point& x);

// Gradient descent for the sample Fréchet mean:
// mu_k = exp_{mu_{k-1}}(t_k v_k). Non-convergence within max_iter is reported
// through the flag, not an exception; the last iterate is returned.
MeanResult frechet_mean(const Dataset& data, const MeanSolverOptions& opts = {});

}  // namespace manifold_dp
