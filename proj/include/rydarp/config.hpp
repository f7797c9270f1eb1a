// Copyright 2026 The rydarp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rydarp/scenario.hpp"

namespace rydarp {

using Json = nlohmann::json;

Json to_json(const ScenarioConfig& cfg);
// Strict: every key must exist in the default tree with a compatible type.
// Keys starting with '_' are comments and are ignored.
ScenarioConfig config_from_json(const Json& j);

// Overlays `layer` onto `base` with the same strictness rules; `prefix` is
// the dotted path used in error messages.
void overlay_config(Json& base, const Json& layer, const std::string& prefix = "");

// Applies "dotted.path=value"; the value is parsed as JSON, falling back to a
// plain string.
void apply_override(Json& tree, const std::string& assignment);

ScenarioConfig load_config(const std::vector<std::string>& paths, const std::vector<std::string>& overrides);

// FNV-1a 64 of the canonical (sorted-key, compact) dump without run.workers,
// as 16 hex digits.
std::string config_hash(const ScenarioConfig& cfg);
std::string code_version();
Provenance make_provenance(const ScenarioConfig& cfg);

}  // namespace rydarp
