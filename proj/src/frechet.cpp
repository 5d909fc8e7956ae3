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

#include "manifold_dp/frechet.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace manifold_dp {

Dataset::Dataset(std::vector<Point> points, BallSpec ball)
    : points_(std::move(points)), ball_(std::move(ball)) {
  if (points_.empty()) {
    throw std::invalid_argument("dataset must contain at least one point");
  }
  for (const Point& p : points_) {
    if (p.manifold() != ball_.center().manifold()) {
      throw std::invalid_argument("dataset points must share the ball's manifold");
    }
    if (!in_ball(ball_, p)) {
      throw std::invalid_argument("dataset point lies outside the certified ball");
    }
  }
}

double energy(const Dataset& data, const Point& x) {
  double sum = 0.0;
  for (const Point& p : data.points()) {
    const double d = distance(x, p);
    sum += d * d;
  }
  return sum / (2.0 * data.size());
}

TangentVector gradient_step_direction(const Dataset& data, const Point& x) {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(x.coords().size());
  for (const Point& p : data.points()) {
    acc += log_map(x, p).coords();
  }
  return TangentVector(x, acc / data.size());
}

namespace {

int medoid_index(const Dataset& data) {
  int best = 0;
  double best_energy = energy(data, data.points()[0]);
  for (int i = 1; i < data.size(); ++i) {
    const double e = energy(data, data.points()[i]);
    if (e < best_energy) {
      best_energy = e;
      best = i;
    }
  }
  return best;
}

}  // namespace

MeanResult frechet_mean(const Dataset& data, const MeanSolverOptions& opts) {
  if (!(opts.step > 0.0) || opts.step > 1.0) {
    throw std::invalid_argument("step size must lie in (0, 1]");
  }
  if (!(opts.tol > 0.0) || opts.max_iter < 1) {
    throw std::invalid_argument("tolerance must be positive and max_iter >= 1");
  }
  int init = opts.init_medoid ? medoid_index(data) : opts.init_index;
  if (init < 0 || init >= data.size()) {
    throw std::invalid_argument("initial index out of range");
  }

  MeanResult result{data.points()[init], 0, false, 0.0, {}};
  if (data.size() == 1) {
    result.iterations = 1;
    result.converged = true;
    if (opts.record_energy) {
      result.energy_trace.push_back(energy(data, result.mean));
    }
    return result;
  }

  Point current = data.points()[init];
  if (opts.record_energy) {
    result.energy_trace.push_back(energy(data, current));
  }
  for (int k = 1; k <= opts.max_iter; ++k) {
    const TangentVector direction = gradient_step_direction(data, current);
    const Point next = exp_map(direction.scaled(opts.step));
    result.gradient_norm = tangent_norm(direction);
    result.iterations = k;
    if (opts.record_energy) {
      result.energy_trace.push_back(energy(data, next));
    }
    if (distance(next, current) < opts.tol) {
      result.mean = next;
      result.converged = true;
      return result;
    }
    current = next;
  }
  result.mean = current;
  result.converged = false;
  return result;
}

}  // namespace manifold_dp
