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

// Command-line front end: run scenarios, scan CHSH settings, verify the engines.
//
// Exit codes: 0 success, 1 configuration or usage error, 2 verification failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "branchsim/analysis.hpp"
#include "branchsim/config.hpp"
#include "branchsim/report.hpp"
#include "branchsim/verify.hpp"

namespace {

using namespace branchsim;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitVerify = 2;

double degrees(double radians) { return radians * 180.0 / std::numbers::pi; }

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

RunConfig load_with_overrides(const std::string &path, int horizon, double tolerance) {
    RunConfig run = load_run_config(path);
    if (horizon >= 0) {
        run.scenario.horizon = horizon;
        run.source["horizon"] = horizon;
    }
    if (tolerance > 0.0) {
        if (tolerance >= 1.0) {
            throw ConfigError("tolerance must lie in (0, 1)");
        }
        run.tolerance = tolerance;
        run.source["tolerance"] = tolerance;
    }
    return run;
}

int print_verification(const VerifyOptions &options) {
    const auto results = run_verification(options);
    bool all = true;
    std::cout << std::left << std::setw(22) << "check" << std::setw(6) << "ok"
              << "description\n";
    for (const auto &r : results) {
        all = all && r.passed;
        std::cout << std::left << std::setw(22) << r.key << std::setw(6)
                  << (r.passed ? "PASS" : "FAIL") << r.what;
        if (!r.passed && !r.detail.empty()) {
            std::cout << " (" << r.detail << ")";
        }
        std::cout << '\n';
    }
    std::cout << (all ? "all checks passed" : "verification FAILED") << '\n';
    return all ? kExitOk : kExitVerify;
}

int cmd_run(const std::string &config, const std::string &out, int horizon, double tolerance,
            bool verify) {
    const RunConfig run = load_with_overrides(config, horizon, tolerance);
    for (const auto &w : run.scenario.warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    const RunReport report = build_report(run);
    write_report(report, out);
    const auto &last = report.document.at("steps").back();
    std::cout << "scenario " << run.scenario.name << ": " << report.document.at("steps").size()
              << " steps, final branch count " << last.at("branch_count") << ", clusters "
              << last.at("cluster_count") << "\nreport written to " << out << '\n';

    if (verify) {
        const auto states = run_schedule(run.scenario.initial, run.scenario.schedule,
                                         run.scenario.horizon);
        oracle::DenseState dense = oracle::densify(run.scenario.initial);
        for (int t = 0; t <= run.scenario.horizon; ++t) {
            if (auto failure = compare_engines(states[t], dense, 1e-10)) {
                std::cerr << "dense oracle disagrees at t=" << t << ": " << *failure << '\n';
                return kExitVerify;
            }
            for (const auto &a : run.scenario.schedule.step(t)) {
                if (const auto *g2 = std::get_if<Gate2>(&a.gate)) {
                    dense = oracle::dense_apply(dense, *g2, {a.first, *a.second});
                } else {
                    dense = oracle::dense_apply(dense, std::get<Gate1>(a.gate), a.first);
                }
            }
        }
        std::cout << "dense oracle agrees at every step\n";
    }
    return kExitOk;
}

int cmd_chsh_scan(const std::string &config, const std::vector<int> &sites, double resolution,
                  int step, const std::string &out) {
    const RunConfig run = load_with_overrides(config, -1, -1.0);
    if (sites.size() != 2 || sites[0] == sites[1]) {
        throw ConfigError("--sites needs two distinct site indices");
    }
    const SiteId a{sites[0]};
    const SiteId b{sites[1]};
    if (!run.scenario.lattice.contains(a) || !run.scenario.lattice.contains(b)) {
        throw ConfigError("--sites refers to a site that is not in the lattice");
    }
    if (!(resolution > 0.0 && resolution <= 90.0)) {
        throw ConfigError("--resolution must lie in (0, 90]");
    }
    const int t = step >= 0 ? step : run.scenario.horizon;
    const auto states = run_schedule(run.scenario.initial, run.scenario.schedule, t);
    const ChshScanResult scan = chsh_scan(states.back(), a, b, resolution, !out.empty());

    std::cout << "CHSH scan at t=" << t << " on sites (" << a.index << "," << b.index
              << "), grid " << resolution << " deg\n"
              << "grid max    " << fmt12(scan.grid_max) << " at (a, a', b, b') = ("
              << degrees(scan.grid_best.a) << ", " << degrees(scan.grid_best.a_prime) << ", "
              << degrees(scan.grid_best.b) << ", " << degrees(scan.grid_best.b_prime) << ") deg\n"
              << "refined max " << fmt12(scan.refined_max) << '\n';

    if (!out.empty()) {
        std::filesystem::create_directories(out);
        std::ofstream grid(std::filesystem::path(out) / "chsh_grid.csv");
        grid << "theta_a_deg,theta_a_prime_deg,best_theta_b_deg,best_theta_b_prime_deg,chsh\n";
        for (const auto &row : scan.rows) {
            grid << fmt12(degrees(row.a)) << ',' << fmt12(degrees(row.a_prime)) << ','
                 << fmt12(degrees(row.best_b)) << ',' << fmt12(degrees(row.best_b_prime)) << ','
                 << fmt12(row.value) << '\n';
        }
        nlohmann::json summary{
            {"step", t},
            {"sites", {a.index, b.index}},
            {"resolution_deg", resolution},
            {"grid_max", report_scalar(scan.grid_max)},
            {"grid_best_deg",
             {degrees(scan.grid_best.a), degrees(scan.grid_best.a_prime),
              degrees(scan.grid_best.b), degrees(scan.grid_best.b_prime)}},
            {"refined_max", report_scalar(scan.refined_max)},
            {"refined_best_rad",
             {scan.refined_best.a, scan.refined_best.a_prime, scan.refined_best.b,
              scan.refined_best.b_prime}}};
        std::ofstream(std::filesystem::path(out) / "chsh_max.json") << summary.dump(2) << '\n';
    }
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"branchsim: lattice model of branching by decoherence"};
    app.require_subcommand(1);

    std::string config;
    std::string out = "out";
    int horizon = -1;
    double tolerance = -1.0;
    bool verify_flag = false;

    auto *run = app.add_subcommand("run", "run a scenario config and write a report");
    run->add_option("--config", config, "scenario config (JSON)")->required();
    run->add_option("--out", out, "output directory");
    run->add_option("--horizon", horizon, "override the number of steps");
    run->add_option("--tolerance", tolerance, "branch/decoherence tolerance");
    run->add_flag("--verify", verify_flag, "cross-check every step against the dense oracle");

    VerifyOptions vopts;
    auto *verify = app.add_subcommand("verify", "run the engine self-checks");
    verify->add_option("--tolerance", vopts.tolerance, "numeric tolerance for every check");
    verify->add_option("--random", vopts.random_sequences, "number of random gate sequences");
    verify->add_option("--seed", vopts.seed, "random seed");
    verify->add_flag("--inject-fault", vopts.inject_fault, "corrupt a library gate (test hook)")
        ->group("");

    std::vector<int> sites;
    double resolution = 1.0;
    int step = -1;
    std::string scan_out;
    auto *scan = app.add_subcommand("chsh-scan", "grid-search CHSH settings on two sites");
    scan->add_option("--config", config, "scenario config (JSON)")->required();
    scan->add_option("--sites", sites, "two site indices")->delimiter(',')->expected(2);
    scan->add_option("--resolution", resolution, "grid resolution in degrees");
    scan->add_option("--step", step, "timestep to analyse (default: horizon)");
    scan->add_option("--out", scan_out, "directory for chsh_grid.csv and chsh_max.json");

    auto *scenario = app.add_subcommand("scenario", "library scenarios");
    scenario->require_subcommand(1);
    auto *list = scenario->add_subcommand("list", "list library scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run) {
            return cmd_run(config, out, horizon, tolerance, verify_flag);
        }
        if (*verify) {
            if (!(vopts.tolerance > 0.0)) {
                throw ConfigError("--tolerance must be positive");
            }
            return print_verification(vopts);
        }
        if (*scan) {
            return cmd_chsh_scan(config, sites, resolution, step, scan_out);
        }
        if (*list) {
            for (const auto &info : scenario_list()) {
                std::cout << std::left << std::setw(16) << info.name << info.description << '\n';
            }
            return kExitOk;
        }
    } catch (const ConfigError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitOk;
}
