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
#include <string>
#include <vector>

#include <json.hpp>

#include "branchsim/analysis.hpp"
#include "branchsim/config.hpp"

namespace branchsim {

inline constexpr const char *kEngineVersion = "1.0.0";

/// Rounds to the 12 significant digits used for derived scalars in reports.
double report_scalar(double value);

struct RunReport {
    nlohmann::json document;       // config echo, metadata, per-step records
    std::string timeseries_csv;    // step,site,coherence,purity,entropy,branch_count,cluster_count
    std::string correlations_csv;  // correlation and CHSH values per step
    double wall_seconds = 0.0;     // kept out of `document` so reports stay reproducible
};

/// Runs the configured schedule and evaluates every requested analysis at every step.
RunReport build_report(const RunConfig &run);

/// Writes report.json, timeseries.csv, correlations.csv and timing.json into `dir`.
void write_report(const RunReport &report, const std::filesystem::path &dir);

nlohmann::json density_matrix_to_json(const DensityMatrix &rho);
nlohmann::json branches_to_json(const BranchDecomposition &d);
nlohmann::json clusters_to_json(const BranchClusters &c);

} // namespace branchsim
