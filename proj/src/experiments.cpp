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

#include "manifold_dp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>

#include "manifold_dp/io.hpp"
#include "manifold_dp/rng.hpp"
#include "manifold_dp/sphere.hpp"
#include "manifold_dp/spdm.hpp"

namespace manifold_dp {

namespace {

// Full-precision, locale-independent formatting so identical runs produce
// byte-identical CSV files.
std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fmt(int x) { return std::to_string(x); }
std::string fmt(long long x) { return std::to_string(x); }
std::string fmt(bool x) { return x ? "1" : "0"; }

constexpr double kSphereDefaultRadius = std::numbers::pi / 8.0;
constexpr double kSpdmDefaultRadius = 1.5;
constexpr int kSpdmOrder = 2;

std::uint64_t parse_seed(const std::string& text) {
  char* end = nullptr;
  errno = 0;
  const unsigned long long value = std::strtoull(text.c_str(), &end, 10);
  if (errno != 0 || end == nullptr || *end != '\0' || text.empty()) {
    throw ConfigError("invalid seed value: " + text);
  }
  return static_cast<std::uint64_t>(value);
}

}  // namespace

double ExperimentConfig::ball_radius() const {
  if (r > 0.0) {
    return r;
  }
  return manifold == ManifoldKind::Sphere ? kSphereDefaultRadius : kSpdmDefaultRadius;
}

MechanismConfig ExperimentConfig::mechanism() const {
  MechanismConfig m = MechanismConfig::defaults_for(manifold);
  m.epsilon = epsilon;
  if (scale_rule.has_value()) {
    m.scale_rule = *scale_rule;
  }
  if (sensitivity_source.has_value()) {
    m.sensitivity_source = *sensitivity_source;
  }
  m.empirical_grid_n = grid_n;
  m.condition_on_ball = condition_on_ball;
  m.burn_in = burn_in;
  m.thinning = thinning;
  return m;
}

std::vector<int> ExperimentConfig::effective_n_grid() const {
  if (!n_grid.empty()) {
    return n_grid;
  }
  if (experiment == ExperimentKind::CircleDemo) {
    return {4, 8, 16, 32};
  }
  std::vector<int> grid;
  for (int n = 20; n <= 200; n += 20) {
    grid.push_back(n);
  }
  return grid;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  static const std::vector<std::string> known = {
      "experiment",     "manifold",  "n_grid",    "replicates",        "epsilon",
      "r",              "df",        "seed",      "out_path",          "data_path",
      "scale_rule",     "grid_n",    "burn_in",   "thinning",          "condition_on_ball",
      "r_grid_points",  "proj_d",    "proj_D",    "proj_sigma",        "proj_draws",
      "sensitivity_source"};
  if (!j.is_object()) {
    throw ConfigError("config must be a JSON object");
  }
  for (const auto& item : j.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      throw ConfigError("unknown config key: " + item.key());
    }
  }

  ExperimentConfig cfg;
  try {
    if (j.contains("experiment")) {
      const std::string name = j.at("experiment").get<std::string>();
      if (name == "sensitivity") {
        cfg.experiment = ExperimentKind::Sensitivity;
      } else if (name == "utility") {
        cfg.experiment = ExperimentKind::Utility;
      } else if (name == "tangent-bound") {
        cfg.experiment = ExperimentKind::TangentBound;
      } else if (name == "projection") {
        cfg.experiment = ExperimentKind::Projection;
      } else if (name == "circle-demo") {
        cfg.experiment = ExperimentKind::CircleDemo;
      } else if (name == "mean") {
        cfg.experiment = ExperimentKind::Mean;
      } else if (name == "privatize") {
        cfg.experiment = ExperimentKind::Privatize;
      } else {
        throw ConfigError("unknown experiment: " + name);
      }
    }
    if (j.contains("manifold")) {
      const std::string name = j.at("manifold").get<std::string>();
      if (name == "sphere") {
        cfg.manifold = ManifoldKind::Sphere;
      } else if (name == "spdm") {
        cfg.manifold = ManifoldKind::Spdm;
      } else {
        throw ConfigError("unknown manifold: " + name);
      }
    }
    if (j.contains("n_grid")) {
      cfg.n_grid = j.at("n_grid").get<std::vector<int>>();
    }
    if (j.contains("replicates")) {
      cfg.replicates = j.at("replicates").get<int>();
    }
    if (j.contains("epsilon")) {
      cfg.epsilon = j.at("epsilon").get<double>();
    }
    if (j.contains("r")) {
      cfg.r = j.at("r").get<double>();
    }
    if (j.contains("df")) {
      cfg.df = j.at("df").get<int>();
    }
    if (j.contains("seed")) {
      cfg.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("out_path")) {
      cfg.out_path = j.at("out_path").get<std::string>();
    }
    if (j.contains("data_path")) {
      cfg.data_path = j.at("data_path").get<std::string>();
    }
    if (j.contains("scale_rule")) {
      const std::string name = j.at("scale_rule").get<std::string>();
      if (name == "homogeneous") {
        cfg.scale_rule = ScaleRule::Homogeneous;
      } else if (name == "general") {
        cfg.scale_rule = ScaleRule::General;
      } else {
        throw ConfigError("unknown scale_rule: " + name);
      }
    }
    if (j.contains("sensitivity_source")) {
      const std::string name = j.at("sensitivity_source").get<std::string>();
      if (name == "theoretical") {
        cfg.sensitivity_source = SensitivitySource::Theoretical;
      } else if (name == "empirical") {
        cfg.sensitivity_source = SensitivitySource::Empirical;
      } else {
        throw ConfigError("unknown sensitivity_source: " + name);
      }
    }
    if (j.contains("grid_n")) {
      cfg.grid_n = j.at("grid_n").get<int>();
    }
    if (j.contains("condition_on_ball")) {
      cfg.condition_on_ball = j.at("condition_on_ball").get<bool>();
    }
    if (j.contains("burn_in")) {
      cfg.burn_in = j.at("burn_in").get<int>();
    }
    if (j.contains("thinning")) {
      cfg.thinning = j.at("thinning").get<int>();
    }
    if (j.contains("r_grid_points")) {
      cfg.r_grid_points = j.at("r_grid_points").get<int>();
    }
    if (j.contains("proj_d")) {
      cfg.proj_d = j.at("proj_d").get<int>();
    }
    if (j.contains("proj_D")) {
      cfg.proj_big = j.at("proj_D").get<int>();
    }
    if (j.contains("proj_sigma")) {
      cfg.proj_sigma = j.at("proj_sigma").get<double>();
    }
    if (j.contains("proj_draws")) {
      cfg.proj_draws = j.at("proj_draws").get<long long>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }

  if (cfg.replicates < 1) {
    throw ConfigError("replicates must be >= 1");
  }
  for (int n : cfg.n_grid) {
    if (n < 2) {
      throw ConfigError("n_grid entries must be >= 2");
    }
  }
  if (!(cfg.epsilon > 0.0)) {
    throw ConfigError("epsilon must be positive");
  }

  if (const char* env_seed = std::getenv("MANIFOLD_DP_SEED")) {
    cfg.seed = parse_seed(env_seed);
  }
  return cfg;
}

ExperimentConfig config_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("cannot parse config JSON: ") + e.what());
  }
  return config_from_json(j);
}

BallSpec experiment_ball(ManifoldKind manifold, double r) {
  if (manifold == ManifoldKind::Sphere) {
    Eigen::VectorXd north(3);
    north << 0.0, 0.0, 1.0;
    return BallSpec(Point::sphere(north), r);
  }
  return BallSpec(Point::spdm(Eigen::MatrixXd::Identity(kSpdmOrder, kSpdmOrder)), r);
}

Point sample_data_point(const BallSpec& ball, int df, std::mt19937_64& rng) {
  if (ball.center().manifold().kind() == ManifoldKind::Sphere) {
    return sample_polar_cap(ball.center().manifold(), ball.radius(), rng);
  }
  return sample_ball_wishart(ball, ball.center().manifold().matrix_order(), df, rng);
}

namespace {

std::uint64_t stream_index(int n_index, int replicates, int replicate) {
  return static_cast<std::uint64_t>(n_index) * static_cast<std::uint64_t>(replicates) +
         static_cast<std::uint64_t>(replicate);
}

}  // namespace

std::vector<SensitivityRecord> run_sensitivity(const ExperimentConfig& cfg) {
  const double r = cfg.ball_radius();
  const BallSpec ball = experiment_ball(cfg.manifold, r);
  const double kappa = ball.center().manifold().kappa_upper();
  const double h = curvature_factor(r, kappa);
  const bool is_sphere = cfg.manifold == ManifoldKind::Sphere;
  // One boundary scan serves the whole run: the ball is fixed.
  const double empirical_numerator =
      is_sphere ? tangent_bound_empirical(ball, cfg.grid_n) : tangent_bound_theoretical(r, kappa);

  const std::vector<int> grid = cfg.effective_n_grid();
  std::vector<SensitivityRecord> rows;
  rows.reserve(grid.size() * cfg.replicates);
  for (int gi = 0; gi < static_cast<int>(grid.size()); ++gi) {
    const int n = grid[gi];
    for (int rep = 0; rep < cfg.replicates; ++rep) {
      std::mt19937_64 rng = make_stream(cfg.seed, stream_index(gi, cfg.replicates, rep));
      std::vector<Point> points;
      points.reserve(n + 1);
      for (int i = 0; i < n + 1; ++i) {
        points.push_back(sample_data_point(ball, cfg.df, rng));
      }
      std::vector<Point> base(points.begin(), points.begin() + n);
      std::vector<Point> swapped(points.begin(), points.begin() + n - 1);
      swapped.push_back(points[n]);

      const MeanResult mean = frechet_mean(Dataset(base, ball));
      const MeanResult mean_swapped = frechet_mean(Dataset(swapped, ball));

      SensitivityRecord row;
      row.n = n;
      row.replicate = rep;
      row.distance = distance(mean.mean, mean_swapped.mean);
      row.bound_theoretical = sensitivity(n, r, kappa);
      row.bound_empirical = empirical_numerator / (n * h);
      row.converged = mean.converged && mean_swapped.converged;
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<UtilityRecord> run_utility(const ExperimentConfig& cfg) {
  const double r = cfg.ball_radius();
  const BallSpec ball = experiment_ball(cfg.manifold, r);
  const MechanismConfig mech = cfg.mechanism();

  const std::vector<int> grid = cfg.effective_n_grid();
  std::vector<UtilityRecord> rows;
  rows.reserve(grid.size() * cfg.replicates);
  for (int gi = 0; gi < static_cast<int>(grid.size()); ++gi) {
    const int n = grid[gi];
    for (int rep = 0; rep < cfg.replicates; ++rep) {
      std::mt19937_64 rng = make_stream(cfg.seed, stream_index(gi, cfg.replicates, rep));
      std::vector<Point> points;
      points.reserve(n);
      for (int i = 0; i < n; ++i) {
        points.push_back(sample_data_point(ball, cfg.df, rng));
      }
      Dataset data(points, ball);
      const MeanResult mean = frechet_mean(data);
      const Eigen::VectorXd embedded_mean = ambient_embedding(mean.mean);

      const PrivatizeResult intrinsic = privatize_frechet_mean(data, mech, rng);
      const BaselineResult baseline = privatize_euclidean_baseline(data, mech, rng);

      UtilityRecord row;
      row.n = n;
      row.replicate = rep;
      row.dist_intrinsic = (embedded_mean - ambient_embedding(intrinsic.point)).norm();
      row.dist_euclidean = (embedded_mean - baseline.ambient).norm();
      row.off_manifold = !baseline.on_manifold;
      row.sigma_intrinsic = intrinsic.audit.sigma;
      row.sigma_euclidean = baseline.sigma;
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<TangentBoundRecord> run_tangent_bound(const ExperimentConfig& cfg) {
  if (cfg.r_grid_points < 1) {
    throw ConfigError("r_grid_points must be >= 1");
  }
  const double r_max = std::numbers::pi / 4.0;
  std::vector<TangentBoundRecord> rows;
  rows.reserve(cfg.r_grid_points);
  for (int i = 1; i <= cfg.r_grid_points; ++i) {
    const double r = r_max * i / cfg.r_grid_points;
    const BallSpec ball = experiment_ball(ManifoldKind::Sphere, r);
    TangentBoundRecord row;
    row.r = r;
    row.two_r = 2.0 * r;
    row.lemma_bound = tangent_bound_theoretical(r, 1.0);
    row.empirical = tangent_bound_empirical(ball, cfg.grid_n);
    rows.push_back(row);
  }
  return rows;
}

std::vector<ProjectionRecord> run_projection(const ExperimentConfig& cfg) {
  std::mt19937_64 rng = make_stream(cfg.seed, 0);
  ProjectionRecord row;
  row.d = cfg.proj_d;
  row.big_d = cfg.proj_big;
  row.sigma = cfg.proj_sigma;
  row.n_draws = cfg.proj_draws;
  row.estimate = project_subspace_noise(cfg.proj_d, cfg.proj_big, cfg.proj_sigma,
                                        cfg.proj_draws, rng);
  row.analytic = cfg.proj_sigma * cfg.proj_sigma * cfg.proj_d * (cfg.proj_big + 1);
  row.rel_err = row.analytic != 0.0 ? std::abs(row.estimate - row.analytic) / row.analytic : 0.0;
  return {row};
}

namespace {

// Arc distance between two angles on the circle.
double circle_distance(double a, double b) {
  const double two_pi = 2.0 * std::numbers::pi;
  double diff = std::fmod(std::abs(a - b), two_pi);
  return std::min(diff, two_pi - diff);
}

// Mean of the duplicated-point configuration, searching the data points
// themselves (the minimizer is a data point for this configuration).
double circle_mean(const std::vector<double>& base, double duplicate) {
  std::vector<double> data = base;
  data.push_back(duplicate);
  double best = data[0];
  double best_energy = std::numeric_limits<double>::infinity();
  for (double candidate : base) {
    double e = 0.0;
    for (double x : data) {
      const double d = circle_distance(candidate, x);
      e += d * d;
    }
    if (e < best_energy) {
      best_energy = e;
      best = candidate;
    }
  }
  return best;
}

}  // namespace

std::vector<CircleDemoRecord> run_circle_demo(const ExperimentConfig& cfg) {
  std::vector<CircleDemoRecord> rows;
  for (int n : cfg.effective_n_grid()) {
    if (n % 2 != 0) {
      throw ConfigError("circle-demo sample sizes must be even");
    }
    std::vector<double> base;
    for (int i = 1; i <= n - 1; ++i) {
      base.push_back(2.0 * std::numbers::pi * i / (n - 1));
    }
    // Moving the duplicate from position i to position j swaps one record;
    // the means snap to the duplicates, so the sensitivity is their largest
    // pairwise distance.
    std::vector<double> means;
    means.reserve(base.size());
    for (double duplicate : base) {
      means.push_back(circle_mean(base, duplicate));
    }
    double max_sensitivity = 0.0;
    for (size_t i = 0; i < means.size(); ++i) {
      for (size_t j = i + 1; j < means.size(); ++j) {
        max_sensitivity = std::max(max_sensitivity, circle_distance(means[i], means[j]));
      }
    }
    rows.push_back(CircleDemoRecord{n, max_sensitivity});
  }
  return rows;
}

std::string to_csv(const std::vector<SensitivityRecord>& rows) {
  std::string out = "n,replicate,distance,bound_theoretical,bound_empirical,converged\n";
  for (const auto& r : rows) {
    out += fmt(r.n) + "," + fmt(r.replicate) + "," + fmt(r.distance) + "," +
           fmt(r.bound_theoretical) + "," + fmt(r.bound_empirical) + "," + fmt(r.converged) +
           "\n";
  }
  return out;
}

std::string to_csv(const std::vector<UtilityRecord>& rows) {
  std::string out =
      "n,replicate,dist_intrinsic,dist_euclidean,off_manifold,sigma_intrinsic,sigma_euclidean\n";
  for (const auto& r : rows) {
    out += fmt(r.n) + "," + fmt(r.replicate) + "," + fmt(r.dist_intrinsic) + "," +
           fmt(r.dist_euclidean) + "," + fmt(r.off_manifold) + "," + fmt(r.sigma_intrinsic) +
           "," + fmt(r.sigma_euclidean) + "\n";
  }
  return out;
}

std::string to_csv(const std::vector<TangentBoundRecord>& rows) {
  std::string out = "r,two_r,lemma_bound,empirical\n";
  for (const auto& r : rows) {
    out += fmt(r.r) + "," + fmt(r.two_r) + "," + fmt(r.lemma_bound) + "," + fmt(r.empirical) +
           "\n";
  }
  return out;
}

std::string to_csv(const std::vector<ProjectionRecord>& rows) {
  std::string out = "d,D,sigma,n_draws,estimate,analytic,rel_err\n";
  for (const auto& r : rows) {
    out += fmt(r.d) + "," + fmt(r.big_d) + "," + fmt(r.sigma) + "," + fmt(r.n_draws) + "," +
           fmt(r.estimate) + "," + fmt(r.analytic) + "," + fmt(r.rel_err) + "\n";
  }
  return out;
}

std::string to_csv(const std::vector<CircleDemoRecord>& rows) {
  std::string out = "n,max_sensitivity\n";
  for (const auto& r : rows) {
    out += fmt(r.n) + "," + fmt(r.max_sensitivity) + "\n";
  }
  return out;
}

std::vector<UtilitySummaryRow> summarize_utility(const std::vector<UtilityRecord>& rows) {
  std::vector<UtilitySummaryRow> summary;
  std::vector<int> ns;
  for (const auto& r : rows) {
    if (std::find(ns.begin(), ns.end(), r.n) == ns.end()) {
      ns.push_back(r.n);
    }
  }
  for (int n : ns) {
    std::vector<double> intrinsic;
    std::vector<double> euclidean;
    int off = 0;
    for (const auto& r : rows) {
      if (r.n != n) {
        continue;
      }
      intrinsic.push_back(r.dist_intrinsic);
      euclidean.push_back(r.dist_euclidean);
      off += r.off_manifold ? 1 : 0;
    }
    const auto mean_se = [](const std::vector<double>& xs) {
      const double mean =
          std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
      double ss = 0.0;
      for (double x : xs) {
        ss += (x - mean) * (x - mean);
      }
      const double sd = xs.size() > 1 ? std::sqrt(ss / (xs.size() - 1.0)) : 0.0;
      return std::pair<double, double>(mean, sd / std::sqrt(static_cast<double>(xs.size())));
    };
    const auto [mi, si] = mean_se(intrinsic);
    const auto [me, se] = mean_se(euclidean);
    summary.push_back(UtilitySummaryRow{n, mi, si, me, se,
                                        static_cast<double>(off) / intrinsic.size()});
  }
  return summary;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  static const char* kExperimentNames[] = {"sensitivity", "utility",    "tangent-bound",
                                           "projection",  "circle-demo", "mean",
                                           "privatize"};
  nlohmann::json j{
      {"experiment", kExperimentNames[static_cast<int>(cfg.experiment)]},
      {"manifold", cfg.manifold == ManifoldKind::Sphere ? "sphere" : "spdm"},
      {"n_grid", cfg.effective_n_grid()},
      {"replicates", cfg.replicates},
      {"epsilon", cfg.epsilon},
      {"r", cfg.ball_radius()},
      {"df", cfg.df},
      {"seed", cfg.seed},
      {"out_path", cfg.out_path},
      {"scale_rule", scale_rule_name(cfg.mechanism().scale_rule)},
      {"sensitivity_source", sensitivity_source_name(cfg.mechanism().sensitivity_source)},
      {"grid_n", cfg.grid_n},
      {"condition_on_ball", cfg.condition_on_ball},
      {"burn_in", cfg.burn_in},
      {"thinning", cfg.thinning},
      {"r_grid_points", cfg.r_grid_points},
      {"proj_d", cfg.proj_d},
      {"proj_D", cfg.proj_big},
      {"proj_sigma", cfg.proj_sigma},
      {"proj_draws", cfg.proj_draws},
  };
  if (!cfg.data_path.empty()) {
    j["data_path"] = cfg.data_path;
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  out << content;
  if (!out) {
    throw std::runtime_error("failed writing output file: " + path);
  }
}

}  // namespace manifold_dp
