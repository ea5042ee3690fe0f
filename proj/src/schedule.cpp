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

#include "branchsim/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace branchsim {

std::vector<SiteId> GateApplication::support() const {
    if (second) {
        return {first, *second};
    }
    return {first};
}

const std::string &GateApplication::gate_name() const {
    return std::visit([](const auto &g) -> const std::string & { return g.name; }, gate);
}

bool GateApplication::is_nonlocal() const {
    return second && std::abs(first.index - second->index) != 1;
}

Schedule::Schedule(std::vector<GateApplication> applications) {
    for (auto &a : applications) {
        add(std::move(a));
    }
}

void Schedule::add(GateApplication application) {
    if (application.time < 0) {
        throw std::invalid_argument("gate application at negative time");
    }
    const bool two_site = std::holds_alternative<Gate2>(application.gate);
    if (two_site != application.second.has_value()) {
        throw std::invalid_argument("gate '" + application.gate_name() +
                                    "' has the wrong number of sites");
    }
    if (application.second && *application.second == application.first) {
        throw std::invalid_argument("two-site gate applied to a single site");
    }
    if (static_cast<std::size_t>(application.time) >= steps_.size()) {
        steps_.resize(application.time + 1);
    }
    auto &bucket = steps_[application.time];
    for (const auto &existing : bucket) {
        for (SiteId a : existing.support()) {
            for (SiteId b : application.support()) {
                if (a == b) {
                    throw std::invalid_argument("site " + std::to_string(a.index) +
                                                " used twice in step " +
                                                std::to_string(application.time));
                }
            }
        }
    }
    auto low = [](const GateApplication &g) {
        auto s = g.support();
        return *std::min_element(s.begin(), s.end());
    };
    auto pos = std::upper_bound(bucket.begin(), bucket.end(), application,
                                [&](const GateApplication &x, const GateApplication &y) {
                                    return low(x) < low(y);
                                });
    bucket.insert(pos, std::move(application));
}

const std::vector<GateApplication> &Schedule::step(int t) const {
    static const std::vector<GateApplication> none;
    if (t < 0 || t >= step_count()) {
        return none;
    }
    return steps_[t];
}

std::vector<GateApplication> Schedule::nonlocal_applications() const {
    std::vector<GateApplication> out;
    for (const auto &bucket : steps_) {
        for (const auto &a : bucket) {
            if (a.is_nonlocal()) {
                out.push_back(a);
            }
        }
    }
    return out;
}

void Schedule::validate(const Lattice &lattice) const {
    for (const auto &bucket : steps_) {
        for (const auto &a : bucket) {
            for (SiteId s : a.support()) {
                if (!lattice.contains(s)) {
                    throw std::invalid_argument("schedule refers to site " +
                                                std::to_string(s.index) +
                                                " which is not in the lattice");
                }
            }
        }
    }
}

GateApplication at(int time, const Gate2 &gate, int left, int right) {
    return {time, SiteId{left}, SiteId{right}, gate};
}

GateApplication at(int time, const Gate1 &gate, int site) {
    return {time, SiteId{site}, std::nullopt, gate};
}

std::vector<PureState> run_schedule(const PureState &initial, const Schedule &schedule,
                                    int horizon) {
    if (horizon < 0) {
        throw std::invalid_argument("horizon must be non-negative");
    }
    schedule.validate(initial.lattice());
    std::vector<PureState> out;
    out.reserve(horizon + 1);
    out.push_back(initial);
    for (int t = 0; t < horizon; ++t) {
        PureState next = out.back();
        for (const auto &a : schedule.step(t)) {
            if (const auto *g2 = std::get_if<Gate2>(&a.gate)) {
                next = apply_gate2(next, *g2, {a.first, *a.second});
            } else {
                next = apply_gate1(next, std::get<Gate1>(a.gate), a.first);
            }
        }
        out.push_back(std::move(next));
    }
    return out;
}

std::vector<ScenarioInfo> scenario_list() {
    return {
        {"single", "one qubit at 0 decohering into a field on 1..n (params: alpha, beta, n_sites, "
                   "field_gate)"},
        {"bidirectional", "single-qubit chain that also couples to a spin at -1 at step 3 "
                          "(params: n_right)"},
        {"collision", "two independent qubits whose branches meet in a symmetric field "
                      "(params: n_field)"},
        {"epr", "two entangled qubits whose branches meet in a symmetric field (params: n_field)"},
    };
}

ScenarioConfig scenario_single(Amplitude alpha, Amplitude beta, int n_sites,
                               const Gate2 &field_gate) {
    if (n_sites < 1) {
        throw std::invalid_argument("single scenario needs at least one field site");
    }
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-9) {
        throw std::invalid_argument("|alpha|^2 + |beta|^2 must equal 1");
    }
    ScenarioConfig cfg;
    cfg.name = "single";
    cfg.lattice = Lattice::with_systems(0, n_sites, {0});
    std::map<SiteId, SingleSiteState> init{{SiteId{0}, {alpha, beta}}};
    for (int i = 1; i <= n_sites; ++i) {
        init[SiteId{i}] = spin_up();
    }
    // new_product_state insists on 1e-12; rescale the 1e-9-accepted input exactly.
    const double n = std::sqrt(std::norm(alpha) + std::norm(beta));
    init[SiteId{0}] = {alpha / n, beta / n};
    cfg.initial = new_product_state(cfg.lattice, init);

    cfg.schedule.add(at(0, gate_system_field(), 0, 1));
    for (int t = 1; t + 1 <= n_sites; ++t) {
        cfg.schedule.add(at(t, field_gate, t, t + 1));
    }
    cfg.horizon = n_sites;
    return cfg;
}

ScenarioConfig scenario_bidirectional(int n_right) {
    if (n_right < 3) {
        throw std::invalid_argument("bidirectional scenario needs n_right >= 3");
    }
    ScenarioConfig cfg;
    cfg.name = "bidirectional";
    cfg.lattice = Lattice::with_systems(-1, n_right, {0});
    const double h = 1.0 / std::sqrt(2.0);
    std::map<SiteId, SingleSiteState> init{{SiteId{0}, {h, h}}};
    for (const auto &s : cfg.lattice.sites()) {
        if (s.kind == SiteKind::Field) {
            init[s.id] = spin_up();
        }
    }
    cfg.initial = new_product_state(cfg.lattice, init);

    cfg.schedule.add(at(0, gate_system_field(), 0, 1));
    cfg.schedule.add(at(1, gate_field_copy(), 1, 2));
    cfg.schedule.add(at(2, gate_field_copy(), 2, 3));
    cfg.schedule.add(at(3, gate_system_field(), 0, -1));
    for (int s = 4; s <= n_right; ++s) {
        cfg.schedule.add(at(s, gate_field_copy(), s - 1, s));
    }
    cfg.horizon = std::max(4, n_right);
    return cfg;
}

namespace {

ScenarioConfig two_qubit_layout(const std::string &name, int n_field) {
    if (n_field < 2) {
        throw std::invalid_argument(name + " scenario needs at least two field sites");
    }
    ScenarioConfig cfg;
    cfg.name = name;
    const int right_qubit = n_field + 1;
    cfg.lattice = Lattice::with_systems(0, right_qubit, {0, right_qubit});
    if (n_field % 2 != 0) {
        cfg.warnings.push_back("odd number of field spins (" + std::to_string(n_field) +
                               "): the two fronts do not meet symmetrically");
    }

    cfg.schedule.add(at(0, gate_system_field(), 0, 1));
    // Mirrored coupling: the system is the left operand even though it sits to the right.
    cfg.schedule.add(at(0, gate_system_field(), right_qubit, right_qubit - 1));

    int last_step = 0;
    for (int k = 1;; ++k) {
        const int l0 = k;
        const int l1 = k + 1;
        const int r0 = right_qubit - k;
        const int r1 = right_qubit - k - 1;
        if (l1 > r0) {
            break;
        }
        last_step = k;
        if (l0 == r1 && l1 == r0) {
            cfg.schedule.add(at(k, gate_field_swap(), l0, l1));
            break;
        }
        if (l1 == r1) {
            // Odd gap: both fronts want the middle site; advance the left one only.
            cfg.schedule.add(at(k, gate_field_swap(), l0, l1));
            break;
        }
        cfg.schedule.add(at(k, gate_field_swap(), l0, l1));
        cfg.schedule.add(at(k, gate_field_swap(), r0, r1));
    }
    cfg.horizon = last_step + 1;
    return cfg;
}

} // namespace

ScenarioConfig scenario_collision(int n_field) {
    ScenarioConfig cfg = two_qubit_layout("collision", n_field);
    const double h = 1.0 / std::sqrt(2.0);
    std::map<SiteId, SingleSiteState> init;
    for (const auto &s : cfg.lattice.sites()) {
        init[s.id] = s.kind == SiteKind::System ? SingleSiteState{h, h} : spin_up();
    }
    cfg.initial = new_product_state(cfg.lattice, init);
    return cfg;
}

ScenarioConfig scenario_epr(int n_field) {
    ScenarioConfig cfg = two_qubit_layout("epr", n_field);
    const std::size_t n = cfg.lattice.size();
    BasisString a(n);
    a.set(n - 1, true); // |0>, all up, |1>
    BasisString b(n);
    b.set(0, true); // |1>, all up, |0>
    cfg.initial = new_entangled_state(cfg.lattice, {{a, 1.0}, {b, 1.0}});
    return cfg;
}

ScenarioConfig scenario_by_name(const std::string &name, const nlohmann::json &params) {
    auto complex_param = [&](const char *key, Amplitude fallback) -> Amplitude {
        if (!params.contains(key)) {
            return fallback;
        }
        const auto &v = params.at(key);
        if (v.is_array()) {
            return {v.at(0).get<double>(), v.at(1).get<double>()};
        }
        return {v.get<double>(), 0.0};
    };
    if (name == "single") {
        const double h = 1.0 / std::sqrt(2.0);
        return scenario_single(complex_param("alpha", h), complex_param("beta", h),
                               params.value("n_sites", 4),
                               gate2_by_name(params.value("field_gate", std::string("U_copy"))));
    }
    if (name == "bidirectional") {
        return scenario_bidirectional(params.value("n_right", 4));
    }
    if (name == "collision") {
        return scenario_collision(params.value("n_field", 4));
    }
    if (name == "epr") {
        return scenario_epr(params.value("n_field", 4));
    }
    throw std::invalid_argument("unknown scenario '" + name + "'");
}

} // namespace branchsim
