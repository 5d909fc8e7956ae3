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
//
// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line; the
// process exits nonzero if any criterion fails. The first argument, when
// present, is the CLI binary used by the determinism criterion.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "manifold_dp/experiments.hpp"
#include "manifold_dp/io.hpp"
#include "manifold_dp/rng.hpp"
#include "manifold_dp/sphere.hpp"
#include "manifold_dp/spdm.hpp"
#include "test_support.hpp"

using namespace manifold_dp;
using manifold_dp::testing::ks_distance;
using manifold_dp::testing::random_rotation;
using manifold_dp::testing::random_spd_point;
using manifold_dp::testing::random_sphere_point;
using manifold_dp::testing::random_symmetric;

namespace {

constexpr double kPi = std::numbers::pi;

struct Criterion {
  std::string name;
  std::function<bool(std::ostream&)> run;
};

Point north_pole() {
  Eigen::VectorXd v(3);
  v << 0.0, 0.0, 1.0;
  return Point::sphere(v);
}

std::vector<int> range_grid(int from, int to, int by) {
  std::vector<int> grid;
  for (int n = from; n <= to; n += by) {
    grid.push_back(n);
  }
  return grid;
}

// Per-n mean distance must shrink as the sample grows: compare every n in the
// grid against its double (the 1/n decay dwarfs Monte Carlo noise there).
bool mean_distance_decreases(const std::vector<SensitivityRecord>& rows, std::ostream& log) {
  std::map<int, std::pair<double, int>> sums;
  for (const auto& row : rows) {
    sums[row.n].first += row.distance;
    sums[row.n].second += 1;
  }
  for (const auto& [n, acc] : sums) {
    const auto doubled = sums.find(2 * n);
    if (doubled == sums.end()) {
      continue;
    }
    const double mean_n = acc.first / acc.second;
    const double mean_2n = doubled->second.first / doubled->second.second;
    if (mean_n <= mean_2n) {
      log << "mean distance did not decrease from n=" << n << " to n=" << 2 * n;
      return false;
    }
  }
  return true;
}

// 1. Neighboring-pair distances on P(2) never exceed 2r/n = 3/n.
bool spdm_containment(std::ostream& log) {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::Sensitivity;
  cfg.manifold = ManifoldKind::Spdm;
  cfg.n_grid = range_grid(20, 200, 20);
  cfg.replicates = 200;
  cfg.seed = 1001;
  const auto rows = run_sensitivity(cfg);
  double worst_margin = 1e9;
  for (const auto& row : rows) {
    const double bound = 3.0 / row.n + 1e-9;
    worst_margin = std::min(worst_margin, bound - row.distance);
    if (row.distance > bound || !row.converged) {
      log << "violated at n=" << row.n << " replicate=" << row.replicate
          << " distance=" << row.distance;
      return false;
    }
  }
  if (!mean_distance_decreases(rows, log)) {
    return false;
  }
  log << rows.size() << " pairs, smallest margin to 3/n: " << worst_margin;
  return true;
}

// 2. Sphere distances stay under the empirical bound (and the closed form).
bool sphere_containment(std::ostream& log) {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::Sensitivity;
  cfg.manifold = ManifoldKind::Sphere;
  cfg.n_grid = range_grid(20, 200, 20);
  cfg.replicates = 200;
  cfg.seed = 1002;
  const auto rows = run_sensitivity(cfg);
  for (const auto& row : rows) {
    if (row.distance > row.bound_empirical + 1e-9 ||
        row.distance > row.bound_theoretical + 1e-9 || !row.converged) {
      log << "violated at n=" << row.n << " replicate=" << row.replicate
          << " distance=" << row.distance << " empirical=" << row.bound_empirical;
      return false;
    }
  }
  if (!mean_distance_decreases(rows, log)) {
    return false;
  }
  log << rows.size() << " pairs under the empirical bound";
  return true;
}

// 3. 2r - slack <= empirical <= 2r(2-h) on a 50-point radius grid.
bool tangent_bound_ordering(std::ostream& log) {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::TangentBound;
  cfg.r_grid_points = 50;
  cfg.grid_n = 720;
  const auto rows = run_tangent_bound(cfg);
  if (rows.size() != 50) {
    log << "unexpected row count " << rows.size();
    return false;
  }
  for (const auto& row : rows) {
    const double slack = 2.0 * kPi * row.r / cfg.grid_n;
    if (row.empirical < row.two_r - slack || row.empirical > row.lemma_bound + 1e-9) {
      log << "ordering fails at r=" << row.r << " (empirical=" << row.empirical
          << ", 2r=" << row.two_r << ", lemma=" << row.lemma_bound << ")";
      return false;
    }
  }
  log << "ordering holds at all 50 radii up to pi/4";
  return true;
}

// 4. E|Y|^2 = d(d+1) for the Euclidean Laplace (d=3, sigma=1).
bool euclidean_moment(std::ostream& log) {
  std::mt19937_64 rng = make_stream(1004, 0);
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(3);
  double acc = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    acc += sample_euclidean_laplace(origin, 1.0, rng).squaredNorm();
  }
  const double estimate = acc / n;
  log << "estimate " << estimate << " vs 12";
  return std::abs(estimate - 12.0) <= 0.01 * 12.0;
}

// 5. Projected ambient noise: sigma^2 d (D+1).
bool projection_moment(std::ostream& log) {
  std::mt19937_64 rng = make_stream(1005, 0);
  const double wide = project_subspace_noise(3, 6, 1.0, 1000000, rng);
  const double square = project_subspace_noise(3, 3, 1.0, 1000000, rng);
  log << "d=3,D=6: " << wide << " vs 21; d=D=3: " << square << " vs 12";
  return std::abs(wide - 21.0) <= 0.015 * 21.0 && std::abs(square - 12.0) <= 0.01 * 12.0;
}

// 6. Thinned chain radial law matches the integrated CDF of e^{-s/sigma} sin s.
bool mh_radial_law(std::ostream& log) {
  const double sigma = 0.1;
  MechanismConfig cfg;  // burn-in 10000, thinning 100
  std::mt19937_64 rng = make_stream(1006, 0);
  RiemannianLaplaceSampler sampler(north_pole(), sigma, cfg);
  std::vector<double> radii;
  radii.reserve(5000);
  for (int i = 0; i < 5000; ++i) {
    radii.push_back(sphere_distance(north_pole(), sampler.next(rng)));
  }

  const int quad = 40000;
  std::vector<double> cdf(quad + 1, 0.0);
  const double step = kPi / quad;
  const auto f = [sigma](double s) { return std::exp(-s / sigma) * std::sin(s); };
  for (int i = 1; i <= quad; ++i) {
    const double a = (i - 1) * step;
    cdf[i] = cdf[i - 1] + step / 6.0 * (f(a) + 4.0 * f(a + step / 2.0) + f(a + step));
  }
  const double total = cdf[quad];
  const auto radial_cdf = [&](double t) {
    const double pos = std::clamp(t / step, 0.0, static_cast<double>(quad));
    const int lo = static_cast<int>(pos);
    const double frac = pos - lo;
    const double v = lo >= quad ? cdf[quad] : cdf[lo] + frac * (cdf[lo + 1] - cdf[lo]);
    return v / total;
  };
  const double ks = ks_distance(radii, radial_cdf);
  log << "KS distance " << ks << " (acceptance rate " << sampler.acceptance_rate() << ")";
  return ks < 0.02;
}

// 7. Intrinsic mechanism beats the Euclidean baseline by 5-30% on the sphere.
bool sphere_utility(std::ostream& log) {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::Utility;
  cfg.manifold = ManifoldKind::Sphere;
  cfg.n_grid = {20, 60, 100};
  cfg.replicates = 1000;
  cfg.epsilon = 1.0;
  cfg.seed = 1007;
  const auto summary = summarize_utility(run_utility(cfg));
  bool ok = true;
  for (const auto& s : summary) {
    const double reduction = 1.0 - s.mean_intrinsic / s.mean_euclidean;
    log << "n=" << s.n << ": " << s.mean_intrinsic << " vs " << s.mean_euclidean
        << " (reduction " << 100.0 * reduction << "%) ";
    ok = ok && s.mean_intrinsic < s.mean_euclidean && reduction >= 0.05 && reduction <= 0.30;
  }
  return ok;
}

// 8. Euclidean baseline leaves P(2) for roughly a quarter of small-n runs.
bool spdm_off_manifold(std::ostream& log) {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::Utility;
  cfg.manifold = ManifoldKind::Spdm;
  cfg.n_grid = {20, 30, 40};
  cfg.replicates = 1000;
  cfg.epsilon = 1.0;
  cfg.seed = 1008;
  const auto rows = run_utility(cfg);
  long long off = 0;
  for (const auto& row : rows) {
    off += row.off_manifold ? 1 : 0;
  }
  const double fraction = static_cast<double>(off) / rows.size();
  for (const auto& s : summarize_utility(rows)) {
    log << "n=" << s.n << ": " << 100.0 * s.off_manifold_fraction << "% ";
  }
  log << "pooled " << 100.0 * fraction << "%";
  return fraction >= 0.15 && fraction <= 0.35;
}

// 9. Mean solver: midpoints, grid oracle, convergence and monotone descent.
bool frechet_solver(std::ostream& log) {
  std::mt19937_64 rng = make_stream(1009, 0);
  const BallSpec cap_ball(north_pole(), kPi / 8.0);
  const BallSpec spd_ball(Point::spdm(Eigen::MatrixXd::Identity(2, 2)), 1.5);

  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<Point> sph = {
        sample_polar_cap(cap_ball.center().manifold(), kPi / 8.0, rng),
        sample_polar_cap(cap_ball.center().manifold(), kPi / 8.0, rng)};
    const MeanResult m1 = frechet_mean(Dataset(sph, cap_ball));
    if (distance(m1.mean, geodesic_point(sph[0], sph[1], 0.5)) > 1e-5) {
      log << "sphere midpoint off by more than 1e-5";
      return false;
    }
    const std::vector<Point> spd = {sample_ball_wishart(spd_ball, 2, 2, rng),
                                    sample_ball_wishart(spd_ball, 2, 2, rng)};
    const MeanResult m2 = frechet_mean(Dataset(spd, spd_ball));
    if (distance(m2.mean, geodesic_point(spd[0], spd[1], 0.5)) > 1e-5) {
      log << "spdm midpoint off by more than 1e-5";
      return false;
    }
  }

  // Brute-force (theta, phi) scan for a 5-point cap dataset, refined once.
  std::vector<Point> five;
  for (int i = 0; i < 5; ++i) {
    five.push_back(sample_polar_cap(cap_ball.center().manifold(), kPi / 8.0, rng));
  }
  const Dataset data(five, cap_ball);
  const MeanResult solved = frechet_mean(data);
  const auto eval = [&data](double theta, double phi) {
    Eigen::VectorXd v(3);
    v << std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta);
    return energy(data, Point::sphere(v));
  };
  const int grid = 400;
  const double r = kPi / 8.0;
  double best = 1e99;
  double best_theta = 0.0;
  double best_phi = 0.0;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double theta = r * i / (grid - 1.0);
      const double phi = 2.0 * kPi * j / grid;
      const double e = eval(theta, phi);
      if (e < best) {
        best = e;
        best_theta = theta;
        best_phi = phi;
      }
    }
  }
  const double dt = r / (grid - 1.0);
  const double dp = 2.0 * kPi / grid;
  double ref_theta = best_theta;
  double ref_phi = best_phi;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double theta = std::clamp(best_theta - dt + 2.0 * dt * i / (grid - 1.0), 0.0, r);
      const double phi = best_phi - dp + 2.0 * dp * j / (grid - 1.0);
      const double e = eval(theta, phi);
      if (e < best) {
        best = e;
        ref_theta = theta;
        ref_phi = phi;
      }
    }
  }
  Eigen::VectorXd v(3);
  v << std::sin(ref_theta) * std::cos(ref_phi), std::sin(ref_theta) * std::sin(ref_phi),
      std::cos(ref_theta);
  if (distance(solved.mean, Point::sphere(v)) > 1e-3 ||
      energy(data, solved.mean) > best + 1e-9) {
    log << "grid oracle disagrees with the solver";
    return false;
  }

  // 100 paper-scale datasets: convergence within 500 steps, monotone energy.
  MeanSolverOptions opts;
  opts.record_energy = true;
  int worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Point> pts;
    const bool use_sphere = trial % 2 == 0;
    for (int i = 0; i < 60; ++i) {
      pts.push_back(use_sphere
                        ? sample_polar_cap(cap_ball.center().manifold(), kPi / 8.0, rng)
                        : sample_ball_wishart(spd_ball, 2, 2, rng));
    }
    const MeanResult result =
        frechet_mean(Dataset(pts, use_sphere ? cap_ball : spd_ball), opts);
    if (!result.converged || result.iterations >= 500) {
      log << "dataset " << trial << " failed to converge";
      return false;
    }
    worst = std::max(worst, result.iterations);
    for (size_t i = 1; i < result.energy_trace.size(); ++i) {
      if (result.energy_trace[i] > result.energy_trace[i - 1] + 1e-12) {
        log << "energy increased on dataset " << trial;
        return false;
      }
    }
  }
  log << "midpoints, grid oracle, and 100 datasets ok (worst iterations " << worst << ")";
  return true;
}

// 10. Circle configuration: sensitivity stays near pi and never decreases.
bool circle_demo(std::ostream& log) {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::CircleDemo;
  cfg.n_grid = {4, 8, 16, 32};
  const auto rows = run_circle_demo(cfg);
  double previous = 0.0;
  for (const auto& row : rows) {
    log << "n=" << row.n << ": " << row.max_sensitivity << " ";
    if (std::abs(row.max_sensitivity - kPi) > 2.0 * kPi / (row.n - 1) ||
        row.max_sensitivity < previous) {
      return false;
    }
    previous = row.max_sensitivity;
  }
  return true;
}

// 11. Geometry property suite at the stated tolerances.
bool geometry_properties(std::ostream& log) {
  std::mt19937_64 rng = make_stream(1011, 0);

  for (int trial = 0; trial < 200; ++trial) {
    const bool use_sphere = trial % 2 == 0;
    const Point p = use_sphere ? random_sphere_point(2, rng) : random_spd_point(2, 1.5, rng);
    const Point q = use_sphere ? random_sphere_point(2, rng) : random_spd_point(2, 1.5, rng);
    const TangentVector v = log_map(p, q);
    if ((exp_map(v).coords() - q.coords()).lpNorm<Eigen::Infinity>() > 1e-8) {
      log << "exp/log roundtrip failed";
      return false;
    }
    if (std::abs(tangent_norm(v) - distance(p, q)) > 1e-8) {
      log << "|log_p q| != rho(p, q)";
      return false;
    }
  }

  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::MatrixXd rot = random_rotation(3, rng);
    const Point a = random_sphere_point(2, rng);
    const Point b = random_sphere_point(2, rng);
    if (std::abs(distance(Point::sphere(rot * a.coords()), Point::sphere(rot * b.coords())) -
                 distance(a, b)) > 1e-8) {
      log << "rotation invariance failed";
      return false;
    }
    const Eigen::MatrixXd c = random_rotation(2, rng);
    const Point sp = random_spd_point(2, 1.5, rng);
    const Point sq = random_spd_point(2, 1.5, rng);
    const auto congruent = [&c](const Point& x) {
      const Eigen::MatrixXd m = c * x.matrix() * c.transpose();
      return Point::spdm(0.5 * (m + m.transpose().eval()));
    };
    if (std::abs(distance(congruent(sp), congruent(sq)) - distance(sp, sq)) > 1e-8) {
      log << "congruence invariance failed";
      return false;
    }
  }

  // Frobenius reach of the geodesic ball: never beyond e^r - 1.
  const double r = 1.5;
  const double bound = std::exp(r) - 1.0;
  double max_seen = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const Eigen::MatrixXd w = random_symmetric(2, r, rng);
    const Eigen::MatrixXd x = sym_matrix_function(w, std::exp);
    max_seen = std::max(max_seen, (x - Eigen::MatrixXd::Identity(2, 2)).norm());
  }
  if (max_seen > bound + 1e-9) {
    log << "ball member beyond e^r - 1: " << max_seen;
    return false;
  }
  log << "roundtrips, invariances, and ambient reach " << max_seen << " <= " << bound;
  return true;
}

// 12. Identical seeds give byte-identical CSV output, end to end via the CLI.
bool determinism(std::ostream& log, const std::string& cli_path) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "manifold_dp_acceptance";
  fs::create_directories(dir);

  const fs::path cfg_path = dir / "cfg.json";
  {
    std::ofstream cfg(cfg_path);
    cfg << R"({"experiment":"sensitivity","manifold":"spdm","n_grid":[10,20],)"
        << R"("replicates":25,"seed":7})";
  }

  const auto read_all = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  if (!cli_path.empty()) {
    const fs::path out1 = dir / "run1.csv";
    const fs::path out2 = dir / "run2.csv";
    const auto invoke = [&](const fs::path& out) {
      const std::string cmd = cli_path + " sensitivity-sim --config " + cfg_path.string() +
                              " --seed 7 --out " + out.string() + " > /dev/null";
      const int status = std::system(cmd.c_str());
      return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };
    if (invoke(out1) != 0 || invoke(out2) != 0) {
      log << "CLI run failed";
      return false;
    }
    const std::string a = read_all(out1);
    const std::string b = read_all(out2);
    if (a.empty() || a != b) {
      log << "CLI outputs differ between identical runs";
      return false;
    }
    if (!fs::exists(out1.string() + ".manifest.json")) {
      log << "missing run manifest";
      return false;
    }
    // Missing config file reports a config error (exit 1).
    const std::string bad = cli_path + " sensitivity-sim --config " +
                            (dir / "missing.json").string() + " > /dev/null 2>&1";
    const int bad_status = std::system(bad.c_str());
    if (!WIFEXITED(bad_status) || WEXITSTATUS(bad_status) != 1) {
      log << "missing config did not exit with code 1";
      return false;
    }
    log << "CLI byte-identical across runs; config errors exit 1";
    return true;
  }

  const ExperimentConfig cfg = config_from_file(cfg_path.string());
  const std::string a = to_csv(run_sensitivity(cfg));
  const std::string b = to_csv(run_sensitivity(cfg));
  log << "library-level comparison (no CLI path given)";
  return !a.empty() && a == b;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli_path = argc > 1 ? argv[1] : "";

  const std::vector<Criterion> criteria = {
      {"SPDM sensitivity containment (rho <= 3/n)", spdm_containment},
      {"sphere sensitivity containment (empirical bound)", sphere_containment},
      {"tangent bound ordering over r in (0, pi/4]", tangent_bound_ordering},
      {"euclidean laplace second moment d(d+1)", euclidean_moment},
      {"projected noise second moment sigma^2 d(D+1)", projection_moment},
      {"MH radial law on the sphere (KS < 0.02)", mh_radial_law},
      {"sphere utility: intrinsic beats baseline by 5-30%", sphere_utility},
      {"SPDM baseline off-manifold fraction in [15%, 35%]", spdm_off_manifold},
      {"frechet solver: midpoints, grid oracle, convergence", frechet_solver},
      {"circle demo: sensitivity near pi, non-decreasing", circle_demo},
      {"geometry properties: roundtrips, invariance, ambient reach", geometry_properties},
      {"determinism: identical seeds give identical bytes",
       [&cli_path](std::ostream& log) { return determinism(log, cli_path); }},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    std::ostringstream detail;
    bool ok = false;
    try {
      ok = criteria[i].run(detail);
    } catch (const std::exception& e) {
      detail << "exception: " << e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << (i + 1) << ". " << criteria[i].name << " ("
              << seconds << "s) -- " << detail.str() << std::endl;
    failures += ok ? 0 : 1;
  }
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed" << std::endl;
    return 1;
  }
  std::cout << "all " << criteria.size() << " criteria passed" << std::endl;
  return 0;
}
