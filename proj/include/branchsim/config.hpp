// Copyright 2026 The branchsim Authors
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

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "branchsim/schedule.hpp"

namespace branchsim {

/// Raised for any malformed or inconsistent scenario configuration.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    ScenarioConfig scenario;
    double tolerance = 1e-9;
    nlohmann::json source; // the document as read, echoed into reports
};

/**
 * Builds a run from a JSON document. A "scenario" block seeds lattice,
 * initial state, schedule and horizon from the library; explicit "lattice",
 * "init", "schedule", "horizon" and "analyses" blocks override it.
 *
 * Gate entries are {"time", "pair": [i, j], "gate"} or {"time", "site", "gate"}
 * where "gate" is a library name or {"name", "matrix"} with a row-major 4x4
 * matrix of [re, im] pairs.
 */
RunConfig parse_run_config(const nlohmann::json &doc);
RunConfig load_run_config(const std::filesystem::path &path);

SingleSiteState parse_site_state(const nlohmann::json &spec);
Gate2 parse_gate2(const nlohmann::json &spec);

} // namespace branchsim
