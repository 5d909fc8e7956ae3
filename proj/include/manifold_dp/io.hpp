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

#include <json.hpp>
#include <string>

#include "manifold_dp/frechet.hpp"
#include "manifold_dp/geometry.hpp"
#include "manifold_dp/mechanism.hpp"

namespace manifold_dp {

// Point wire format: {"manifold": "sphere"|"spdm", "coords": [..]} with
// row-major flattening for spdm matrices.
nlohmann::json point_to_json(const Point& p);
Point point_from_json(const nlohmann::json& j);

// Dataset file format:
//   {"ball": {"center": <point>, "radius": <r>}, "points": [<point>, ...]}
nlohmann::json dataset_to_json(const Dataset& d);
Dataset dataset_from_json(const nlohmann::json& j);

nlohmann::json audit_to_json(const MechanismAudit& audit);

std::string scale_rule_name(ScaleRule rule);
std::string sensitivity_source_name(SensitivitySource source);

}  // namespace manifold_dp
