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

#include "branchsim/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace branchsim {

namespace {

Amplitude parse_complex(const nlohmann::json &v) {
    if (v.is_number()) {
        return {v.get<double>(), 0.0};
    }
    if (v.is_array() && v.size() == 2) {
        return {v.at(0).get<double>(), v.at(1).get<double>()};
    }
    throw ConfigError("expected a number or [re, im] pair, got " + v.dump());
}

const std::set<std::string> &known_analyses() {
    static const std::set<std::string> names{"site_metrics", "branches", "clusters", "rdm",
                                             "correlation",  "chsh",     "mutual_information",
                                             "entropy"};
    return names;
}

void parse_schedule(const nlohmann::json &doc, Schedule &schedule) {
    for (const auto &entry : doc) {
        const int time = entry.at("time").get<int>();
        const auto &gate = entry.at("gate");
        if (entry.contains("pair")) {
            const auto &pair = entry.at("pair");
            schedule.add(at(time, parse_gate2(gate), pair.at(0).get<int>(), pair.at(1).get<int>()));
        } else if (entry.contains("site")) {
            if (!gate.is_string()) {
                throw ConfigError("single-site gates must be given by name");
            }
            schedule.add(at(time, gate1_by_name(gate.get<std::string>()),
                            entry.at("site").get<int>()));
        } else {
            throw ConfigError("schedule entry needs \"pair\" or \"site\": " + entry.dump());
        }
    }
}

PureState parse_init(const nlohmann::json &doc, const Lattice &lattice) {
    if (doc.contains("product")) {
        std::map<SiteId, SingleSiteState> states;
        for (const auto &[key, spec] : doc.at("product").items()) {
            states[SiteId{std::stoi(key)}] = parse_site_state(spec);
        }
        // Field spins left unspecified start up.
        for (const auto &s : lattice.sites()) {
            if (!states.count(s.id) && s.kind == SiteKind::Field) {
                states[s.id] = spin_up();
            }
        }
        return new_product_state(lattice, states);
    }
    if (doc.contains("terms")) {
        std::vector<std::pair<BasisString, Amplitude>> terms;
        for (const auto &t : doc.at("terms")) {
            const Amplitude amp =
                t.size() >= 3 ? Amplitude{t.at(1).get<double>(), t.at(2).get<double>()}
                : t.size() == 2 ? parse_complex(t.at(1))
                                : Amplitude{1.0};
            terms.emplace_back(basis(lattice, t.at(0).get<std::string>()), amp);
        }
        return new_entangled_state(lattice, terms);
    }
    throw ConfigError("init block needs \"product\" or \"terms\"");
}

} // namespace

SingleSiteState parse_site_state(const nlohmann::json &spec) {
    const double h = 1.0 / std::sqrt(2.0);
    if (spec.is_string()) {
        const auto s = spec.get<std::string>();
        if (s == "up" || s == "0") {
            return spin_up();
        }
        if (s == "down" || s == "1") {
            return spin_down();
        }
        if (s == "+") {
            return {h, h};
        }
        if (s == "-") {
            return {h, -h};
        }
        throw ConfigError("unknown single-site state '" + s + "'");
    }
    if (spec.is_array() && spec.size() == 2) {
        return {parse_complex(spec.at(0)), parse_complex(spec.at(1))};
    }
    throw ConfigError("bad single-site state " + spec.dump());
}

Gate2 parse_gate2(const nlohmann::json &spec) {
    if (spec.is_string()) {
        return gate2_by_name(spec.get<std::string>());
    }
    const auto &rows = spec.at("matrix");
    if (rows.size() != 4) {
        throw ConfigError("inline gate matrix must have 4 rows");
    }
    Eigen::Matrix4cd m;
    for (int r = 0; r < 4; ++r) {
        if (rows.at(r).size() != 4) {
            throw ConfigError("inline gate matrix must have 4 columns");
        }
        for (int c = 0; c < 4; ++c) {
            m(r, c) = parse_complex(rows.at(r).at(c));
        }
    }
    return make_gate2(spec.value("name", std::string("custom")), m);
}

RunConfig parse_run_config(const nlohmann::json &doc) {
    RunConfig run;
    run.source = doc;
    try {
        ScenarioConfig &cfg = run.scenario;
        if (doc.contains("scenario")) {
            const auto &s = doc.at("scenario");
            cfg = scenario_by_name(s.at("name").get<std::string>(),
                                   s.value("params", nlohmann::json::object()));
        }
        if (doc.contains("name")) {
            cfg.name = doc.at("name").get<std::string>();
        }
        if (doc.contains("lattice")) {
            cfg.lattice = lattice_from_json(doc.at("lattice"));
            if (!doc.contains("init")) {
                throw ConfigError("a config that defines its lattice must also define \"init\"");
            }
        } else if (!doc.contains("scenario")) {
            throw ConfigError("config needs a \"scenario\" or a \"lattice\" block");
        }
        if (doc.contains("init")) {
            cfg.initial = parse_init(doc.at("init"), cfg.lattice);
        }
        if (doc.contains("schedule")) {
            cfg.schedule = Schedule{};
            parse_schedule(doc.at("schedule"), cfg.schedule);
        }
        if (doc.contains("horizon")) {
            cfg.horizon = doc.at("horizon").get<int>();
        }
        if (cfg.horizon < 0) {
            throw ConfigError("horizon must be non-negative");
        }
        cfg.schedule.validate(cfg.lattice);
        for (const auto &a : cfg.schedule.nonlocal_applications()) {
            cfg.warnings.push_back("non-local gate " + a.gate_name() + " at step " +
                                   std::to_string(a.time) + " on sites " +
                                   std::to_string(a.first.index) + "," +
                                   std::to_string(a.second->index));
        }

        cfg.analyses.clear();
        if (doc.contains("analyses")) {
            for (const auto &a : doc.at("analyses")) {
                AnalysisRequest req;
                req.name = a.at("name").get<std::string>();
                if (!known_analyses().count(req.name)) {
                    throw ConfigError("unknown analysis '" + req.name + "'");
                }
                req.params = a;
                req.params.erase("name");
                cfg.analyses.push_back(std::move(req));
            }
        } else {
            cfg.analyses = {{"site_metrics"}, {"branches"}, {"clusters"}};
        }
        run.tolerance = doc.value("tolerance", 1e-9);
        if (!(run.tolerance > 0.0 && run.tolerance < 1.0)) {
            throw ConfigError("tolerance must lie in (0, 1)");
        }
    } catch (const ConfigError &) {
        throw;
    } catch (const std::exception &e) {
        throw ConfigError(e.what());
    }
    return run;
}

RunConfig load_run_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path.string() + "'");
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse_run_config(doc);
}

} // namespace branchsim
