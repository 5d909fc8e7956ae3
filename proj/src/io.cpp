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

#include "manifold_dp/io.hpp"

#include <cmath>

namespace manifold_dp {

nlohmann::json point_to_json(const Point& p) {
  std::vector<double> coords(p.coords().data(), p.coords().data() + p.coords().size());
  return nlohmann::json{
      {"manifold", p.manifold().kind() == ManifoldKind::Sphere ? "sphere" : "spdm"},
      {"coords", coords}};
}

Point point_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("manifold").get<std::string>();
  const auto raw = j.at("coords").get<std::vector<double>>();
  const int size = static_cast<int>(raw.size());
  Eigen::VectorXd coords = Eigen::Map<const Eigen::VectorXd>(raw.data(), raw.size());
  if (kind == "sphere") {
    return Point(ManifoldDescriptor::sphere(size - 1), std::move(coords));
  }
  if (kind == "spdm") {
    const int k = static_cast<int>(std::lround(std::sqrt(static_cast<double>(size))));
    if (k * k != size) {
      throw std::invalid_argument("spdm coords length is not a perfect square");
    }
    return Point(ManifoldDescriptor::spdm(k), std::move(coords));
  }
  throw std::invalid_argument("unknown manifold kind: " + kind);
}

nlohmann::json dataset_to_json(const Dataset& d) {
  nlohmann::json points = nlohmann::json::array();
  for (const Point& p : d.points()) {
    points.push_back(point_to_json(p));
  }
  return nlohmann::json{{"ball",
                         {{"center", point_to_json(d.ball().center())},
                          {"radius", d.ball().radius()}}},
                        {"points", points}};
}

Dataset dataset_from_json(const nlohmann::json& j) {
  const nlohmann::json& ball_json = j.at("ball");
  BallSpec ball(point_from_json(ball_json.at("center")), ball_json.at("radius").get<double>());
  std::vector<Point> points;
  for (const nlohmann::json& pj : j.at("points")) {
    points.push_back(point_from_json(pj));
  }
  return Dataset(std::move(points), std::move(ball));
}

nlohmann::json audit_to_json(const MechanismAudit& audit) {
  return nlohmann::json{{"n", audit.n},
                        {"r", audit.r},
                        {"kappa", audit.kappa},
                        {"h", audit.h},
                        {"delta", audit.delta},
                        {"epsilon", audit.epsilon},
                        {"sigma", audit.sigma},
                        {"sensitivity_source", sensitivity_source_name(audit.sensitivity_source)},
                        {"conditioned", audit.conditioned}};
}

std::string scale_rule_name(ScaleRule rule) {
  return rule == ScaleRule::Homogeneous ? "homogeneous" : "general";
}

std::string sensitivity_source_name(SensitivitySource source) {
  return source == SensitivitySource::Theoretical ? "theoretical" : "empirical";
}

}  // namespace manifold_dp
