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

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "branchsim/gates.hpp"
#include "branchsim/state.hpp"

namespace branchsim {

/// One gate placed at a timestep. Two-site gates use both sites, single-site gates only `first`.
struct GateApplication {
    int time = 0;
    SiteId first;
    std::optional<SiteId> second;
    std::variant<Gate1, Gate2> gate;

    std::vector<SiteId> support() const;
    const std::string &gate_name() const;
    /// Two-site applications whose sites are not lattice neighbours (|i - j| != 1).
    bool is_nonlocal() const;
};

/**
 * Timestep-indexed gate applications. Within a step no site appears in two
 * applications, so the order of application inside a step is immaterial;
 * applications are kept sorted by their lowest site index.
 */
class Schedule {
  public:
    Schedule() = default;
    explicit Schedule(std::vector<GateApplication> applications);

    void add(GateApplication application);

    /// Applications at step `t` (empty past the last scheduled step).
    const std::vector<GateApplication> &step(int t) const;
    int step_count() const { return static_cast<int>(steps_.size()); }
    bool empty() const { return steps_.empty(); }

    std::vector<GateApplication> nonlocal_applications() const;
    /// Throws std::invalid_argument if any site is not in `lattice`.
    void validate(const Lattice &lattice) const;

  private:
    std::vector<std::vector<GateApplication>> steps_;
};

GateApplication at(int time, const Gate2 &gate, int left, int right);
GateApplication at(int time, const Gate1 &gate, int site);

/// output[0] is the input; output[t] applies step t-1 to output[t-1].
std::vector<PureState> run_schedule(const PureState &initial, const Schedule &schedule,
                                    int horizon);

/// Site-local analyses requested by a scenario; evaluated per timestep by the reporting layer.
struct AnalysisRequest {
    std::string name;
    nlohmann::json params = nlohmann::json::object();
};

struct ScenarioConfig {
    std::string name;
    Lattice lattice;
    PureState initial;
    Schedule schedule;
    int horizon = 0;
    std::vector<AnalysisRequest> analyses;
    std::vector<std::string> warnings;
};

/// Parameters of a library scenario, for listing.
struct ScenarioInfo {
    std::string name;
    std::string description;
};
std::vector<ScenarioInfo> scenario_list();

/**
 * System qubit alpha|0> + beta|1> at 0 with field spins 1..n_sites all up.
 * Step 0 couples (0,1); step t >= 1 applies `field_gate` to (t, t+1) until the
 * right boundary.
 */
ScenarioConfig scenario_single(Amplitude alpha, Amplitude beta, int n_sites,
                               const Gate2 &field_gate = gate_field_copy());

/**
 * The single-qubit scenario with an extra up spin at -1. Steps 0..2 match
 * scenario_single; step 3 couples the qubit to -1 instead of extending the
 * chain, and the chain resumes at step 4 with (3,4).
 */
ScenarioConfig scenario_bidirectional(int n_right);

/// Two independent qubits (|0>+|1>)/sqrt2 at 0 and n_field+1 with a symmetric field between.
ScenarioConfig scenario_collision(int n_field = 4);

/// As scenario_collision but with qubits in (|0>|1> + |1>|0>)/sqrt2.
ScenarioConfig scenario_epr(int n_field = 4);

/// Dispatches on the library name with JSON parameters.
ScenarioConfig scenario_by_name(const std::string &name, const nlohmann::json &params);

} // namespace branchsim
