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
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "manifold_dp/mechanism.hpp"

namespace manifold_dp {

// Bad configuration input (file, JSON, flags); maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class ExperimentKind {
  Sensitivity,
  Utility,
  TangentBound,
  Projection,
  CircleDemo,
  Mean,
  Privatize,
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Sensitivity;
  ManifoldKind manifold = ManifoldKind::Sphere;
  std::vector<int> n_grid;  // empty selects the experiment default
  int replicates = 1000;
  double epsilon = 1.0;
  double r = -1.0;  // negative selects the per-manifold default
  int df = 2;
  std::uint64_t seed = 1;
  std::string out_path;
  std::string data_path;  // mean / privatize input

  // Mechanism overrides; unset fields keep the per-manifold defaults.
  std::optional<ScaleRule> scale_rule;
  std::optional<SensitivitySource> sensitivity_source;
  int grid_n = 720;
  bool condition_on_ball = false;
  int burn_in = 10000;
  int thinning = 100;

  // Tangent-bound scan resolution and projection-check parameters.
  int r_grid_points = 50;
  int proj_d = 3;
  int proj_big = 6;
  double proj_sigma = 1.0;
  long long proj_draws = 1000000;

  // Effective data-ball radius (pi/8 for the sphere, 1.5 for spdm by default).
  double ball_radius() const;
  // Assembled mechanism configuration.
  MechanismConfig mechanism() const;
  // n grid with experiment defaults applied.
  std::vector<int> effective_n_grid() const;
};

// Parses a config JSON object; unknown keys are rejected. The environment
// variable MANIFOLD_DP_SEED, when set, overrides the config seed.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig config_from_file(const std::string& path);

struct SensitivityRecord {
  int n = 0;
  int replicate = 0;
  double distance = 0.0;
  double bound_theoretical = 0.0;
  double bound_empirical = 0.0;
  bool converged = false;
};

struct UtilityRecord {
  int n = 0;
  int replicate = 0;
  double dist_intrinsic = 0.0;
  double dist_euclidean = 0.0;
  bool off_manifold = false;
  double sigma_intrinsic = 0.0;
  double sigma_euclidean = 0.0;
};

struct TangentBoundRecord {
  double r = 0.0;
  double two_r = 0.0;
  double lemma_bound = 0.0;
  double empirical = 0.0;
};

struct ProjectionRecord {
  int d = 0;
  int big_d = 0;
  double sigma = 0.0;
  long long n_draws = 0;
  double estimate = 0.0;
  double analytic = 0.0;
  double rel_err = 0.0;
};

struct CircleDemoRecord {
  int n = 0;
  double max_sensitivity = 0.0;
};

// The simulation ball: radius r around the north pole (sphere) or the
// identity (spdm).
BallSpec experiment_ball(ManifoldKind manifold, double r);

// One data draw: polar cap for the sphere, ball-conditioned Wishart for spdm.
Point sample_data_point(const BallSpec& ball, int df, std::mt19937_64& rng);

// Neighboring-dataset sensitivity scatter. For the sphere the empirical
// column is the boundary-grid bound; for spdm it coincides with the
// theoretical one (the closed form is tight under nonpositive curvature).
std::vector<SensitivityRecord> run_sensitivity(const ExperimentConfig& cfg);

// Intrinsic mechanism vs the ambient Euclidean baseline, both distances
// measured in the shared embedding.
std::vector<UtilityRecord> run_utility(const ExperimentConfig& cfg);

// Scan of 2r, the closed-form tangent bound, and the boundary-grid estimate
// over r in (0, pi/4].
std::vector<TangentBoundRecord> run_tangent_bound(const ExperimentConfig& cfg);

std::vector<ProjectionRecord> run_projection(const ExperimentConfig& cfg);

// Evenly spaced points on the circle with one duplicated: the mean snaps to
// the duplicate, so single-record swaps move it arbitrarily far. The mean is
// found by scanning the data points, which is where the minimizer lives for
// this configuration. Requires even n.
std::vector<CircleDemoRecord> run_circle_demo(const ExperimentConfig& cfg);

std::string to_csv(const std::vector<SensitivityRecord>& rows);
std::string to_csv(const std::vector<UtilityRecord>& rows);
std::string to_csv(const std::vector<TangentBoundRecord>& rows);
std::string to_csv(const std::vector<ProjectionRecord>& rows);
std::string to_csv(const std::vector<CircleDemoRecord>& rows);

struct UtilitySummaryRow {
  int n = 0;
  double mean_intrinsic = 0.0;
  double se_intrinsic = 0.0;
  double mean_euclidean = 0.0;
  double se_euclidean = 0.0;
  double off_manifold_fraction = 0.0;
};

// Per-n mean and standard error (sd / sqrt(replicates)) of both distances.
std::vector<UtilitySummaryRow> summarize_utility(const std::vector<UtilityRecord>& rows);

nlohmann::json config_to_json(const ExperimentConfig& cfg);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace manifold_dp
