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

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "manifold_dp/experiments.hpp"
#include "manifold_dp/io.hpp"
#include "manifold_dp/rng.hpp"
#include "manifold_dp/version.hpp"

namespace {

using manifold_dp::ConfigError;
using manifold_dp::ExperimentConfig;
using manifold_dp::ExperimentKind;

// The caveat attached to every private release: the chain targets the exact
// Laplace density but is still MCMC, so the epsilon guarantee is exact only
// for exact draws. This tool is an experimental testbed, not a certified
// release system.
constexpr const char* kMcmcCaveat =
    "intrinsic draws are produced by Metropolis-Hastings; the stated epsilon "
    "holds exactly only for exact Laplace draws";

struct CliOverrides {
  std::string config_path;
  std::string data_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> epsilon;
  std::optional<int> replicates;
};

ExperimentConfig assemble_config(const CliOverrides& cli, ExperimentKind kind) {
  // Precedence: defaults < config file < MANIFOLD_DP_SEED < flags.
  ExperimentConfig cfg = cli.config_path.empty()
                             ? manifold_dp::config_from_json(nlohmann::json::object())
                             : manifold_dp::config_from_file(cli.config_path);
  cfg.experiment = kind;
  if (cli.seed.has_value()) {
    cfg.seed = *cli.seed;
  }
  if (cli.epsilon.has_value()) {
    cfg.epsilon = *cli.epsilon;
  }
  if (cli.replicates.has_value()) {
    cfg.replicates = *cli.replicates;
  }
  if (!cli.out_path.empty()) {
    cfg.out_path = cli.out_path;
  }
  if (!cli.data_path.empty()) {
    cfg.data_path = cli.data_path;
  }
  if (cfg.replicates < 1) {
    throw ConfigError("replicates must be >= 1");
  }
  if (!(cfg.epsilon > 0.0)) {
    throw ConfigError("epsilon must be positive");
  }
  return cfg;
}

std::string default_out_path(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Sensitivity:
      return "sensitivity.csv";
    case ExperimentKind::Utility:
      return "utility.csv";
    case ExperimentKind::TangentBound:
      return "tangent_bound.csv";
    case ExperimentKind::Projection:
      return "projection.csv";
    case ExperimentKind::CircleDemo:
      return "circle_demo.csv";
    default:
      return "out.json";
  }
}

void write_manifest(const ExperimentConfig& cfg, const std::string& csv_path,
                    double wall_seconds, const nlohmann::json& extra) {
  nlohmann::json manifest{
      {"config", manifold_dp::config_to_json(cfg)},
      {"library_version", manifold_dp::kVersion},
      {"wall_time_seconds", wall_seconds},
      {"output", csv_path},
  };
  if (!extra.is_null()) {
    manifest["summary"] = extra;
  }
  manifold_dp::write_text_file(csv_path + ".manifest.json", manifest.dump(2) + "\n");
}

manifold_dp::Dataset load_dataset(const std::string& path) {
  if (path.empty()) {
    throw ConfigError("a dataset file is required (--data)");
  }
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open dataset file: " + path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("cannot parse dataset JSON: ") + e.what());
  }
  try {
    return manifold_dp::dataset_from_json(j);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid dataset: ") + e.what());
  }
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    manifold_dp::write_text_file(out_path, content);
  }
}

int run_simulation(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  std::string csv;
  nlohmann::json summary;
  switch (cfg.experiment) {
    case ExperimentKind::Sensitivity:
      csv = manifold_dp::to_csv(manifold_dp::run_sensitivity(cfg));
      break;
    case ExperimentKind::Utility: {
      const auto rows = manifold_dp::run_utility(cfg);
      csv = manifold_dp::to_csv(rows);
      summary = nlohmann::json::array();
      for (const auto& s : manifold_dp::summarize_utility(rows)) {
        summary.push_back({{"n", s.n},
                           {"mean_intrinsic", s.mean_intrinsic},
                           {"se_intrinsic", s.se_intrinsic},
                           {"mean_euclidean", s.mean_euclidean},
                           {"se_euclidean", s.se_euclidean},
                           {"off_manifold_fraction", s.off_manifold_fraction}});
      }
      break;
    }
    case ExperimentKind::TangentBound:
      csv = manifold_dp::to_csv(manifold_dp::run_tangent_bound(cfg));
      break;
    case ExperimentKind::Projection:
      csv = manifold_dp::to_csv(manifold_dp::run_projection(cfg));
      break;
    case ExperimentKind::CircleDemo:
      csv = manifold_dp::to_csv(manifold_dp::run_circle_demo(cfg));
      break;
    default:
      throw ConfigError("not a simulation experiment");
  }
  const std::string out = cfg.out_path.empty() ? default_out_path(cfg.experiment) : cfg.out_path;
  manifold_dp::write_text_file(out, csv);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(cfg, out, wall, summary);
  std::cout << "wrote " << out << "\n";
  if (summary.is_array()) {
    for (const auto& s : summary) {
      std::cout << "n=" << s["n"] << " intrinsic " << s["mean_intrinsic"].get<double>()
                << " +/- 2*" << s["se_intrinsic"].get<double>() << ", euclidean "
                << s["mean_euclidean"].get<double>() << " +/- 2*"
                << s["se_euclidean"].get<double>() << ", off-manifold "
                << s["off_manifold_fraction"].get<double>() << "\n";
    }
  }
  return 0;
}

int run_mean(const ExperimentConfig& cfg) {
  const manifold_dp::Dataset data = load_dataset(cfg.data_path);
  const manifold_dp::MeanResult result = manifold_dp::frechet_mean(data);
  nlohmann::json out{{"mean", manifold_dp::point_to_json(result.mean)},
                     {"iterations", result.iterations},
                     {"converged", result.converged},
                     {"gradient_norm", result.gradient_norm}};
  emit(cfg.out_path, out.dump(2) + "\n");
  return 0;
}

int run_privatize(const ExperimentConfig& cfg) {
  const manifold_dp::Dataset data = load_dataset(cfg.data_path);
  // Mechanism defaults follow the dataset's manifold, not the config field.
  ExperimentConfig effective = cfg;
  effective.manifold = data.manifold().kind();
  manifold_dp::MechanismConfig mech = effective.mechanism();
  std::mt19937_64 rng = manifold_dp::make_stream(cfg.seed, 0);
  const manifold_dp::PrivatizeResult result =
      manifold_dp::privatize_frechet_mean(data, mech, rng);
  nlohmann::json out{{"point", manifold_dp::point_to_json(result.point)},
                     {"audit", manifold_dp::audit_to_json(result.audit)},
                     {"mcmc_caveat", kMcmcCaveat}};
  emit(cfg.out_path, out.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private statistical summaries on Riemannian manifolds"};
  app.require_subcommand(1);
  app.set_version_flag("--version", manifold_dp::kVersion);
  app.failure_message(CLI::FailureMessage::help);

  CliOverrides cli;
  const auto add_common = [&cli](CLI::App* sub) {
    sub->add_option("--config", cli.config_path, "JSON experiment config");
    sub->add_option("--seed", cli.seed, "master seed (overrides config and environment)");
    sub->add_option("--out", cli.out_path, "output path");
    sub->add_option("--epsilon", cli.epsilon, "privacy budget");
    sub->add_option("--replicates", cli.replicates, "replicates per sample size");
  };

  CLI::App* mean = app.add_subcommand("mean", "Fréchet mean of a JSON dataset");
  mean->add_option("--data", cli.data_path, "dataset JSON file");
  add_common(mean);

  CLI::App* privatize = app.add_subcommand("privatize", "private Fréchet mean of a JSON dataset");
  privatize->add_option("--data", cli.data_path, "dataset JSON file");
  add_common(privatize);

  CLI::App* sensitivity =
      app.add_subcommand("sensitivity-sim", "neighboring-dataset sensitivity scatter");
  add_common(sensitivity);
  CLI::App* utility =
      app.add_subcommand("utility-sim", "intrinsic vs Euclidean baseline comparison");
  add_common(utility);
  CLI::App* tangent = app.add_subcommand("tangent-bound", "tangent bound scan over the radius");
  add_common(tangent);
  CLI::App* projection =
      app.add_subcommand("projection-check", "projected ambient noise second moment");
  add_common(projection);
  CLI::App* circle = app.add_subcommand("circle-demo", "unstable mean on the circle");
  add_common(circle);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  ExperimentKind kind = ExperimentKind::Mean;
  if (mean->parsed()) {
    kind = ExperimentKind::Mean;
  } else if (privatize->parsed()) {
    kind = ExperimentKind::Privatize;
  } else if (sensitivity->parsed()) {
    kind = ExperimentKind::Sensitivity;
  } else if (utility->parsed()) {
    kind = ExperimentKind::Utility;
  } else if (tangent->parsed()) {
    kind = ExperimentKind::TangentBound;
  } else if (projection->parsed()) {
    kind = ExperimentKind::Projection;
  } else if (circle->parsed()) {
    kind = ExperimentKind::CircleDemo;
  }

  try {
    const ExperimentConfig cfg = assemble_config(cli, kind);
    switch (kind) {
      case ExperimentKind::Mean:
        return run_mean(cfg);
      case ExperimentKind::Privatize:
        return run_privatize(cfg);
      default:
        return run_simulation(cfg);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
