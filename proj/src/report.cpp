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

#include "branchsim/report.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "branchsim/analysis.hpp"

namespace branchsim {

namespace {

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::vector<SiteId> site_list(const nlohmann::json &v) {
    std::vector<SiteId> out;
    for (const auto &i : v) {
        out.emplace_back(i.get<int>());
    }
    return out;
}

nlohmann::json site_json(const std::set<SiteId> &sites) {
    nlohmann::json out = nlohmann::json::array();
    for (SiteId s : sites) {
        out.push_back(s.index);
    }
    return out;
}

nlohmann::json branch_list_json(const std::vector<Branch> &branches) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto &b : branches) {
        nlohmann::json assignment = nlohmann::json::object();
        for (const auto &[site, bit] : b.assignment) {
            assignment[std::to_string(site.index)] = bit;
        }
        out.push_back({{"weight", report_scalar(b.weight)}, {"assignment", assignment}});
    }
    return out;
}

void write_text(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    out << text;
}

} // namespace

double report_scalar(double value) {
    const double r = std::strtod(fmt12(value).c_str(), nullptr);
    return r == 0.0 ? 0.0 : r; // no negative zero in reports
}

nlohmann::json density_matrix_to_json(const DensityMatrix &rho) {
    nlohmann::json sites = nlohmann::json::array();
    for (SiteId s : rho.sites) {
        sites.push_back(s.index);
    }
    nlohmann::json entries = nlohmann::json::array();
    for (Eigen::Index i = 0; i < rho.matrix.rows(); ++i) {
        for (Eigen::Index j = 0; j < rho.matrix.cols(); ++j) {
            entries.push_back(
                {report_scalar(rho.matrix(i, j).real()), report_scalar(rho.matrix(i, j).imag())});
        }
    }
    return {{"sites", sites}, {"dim", rho.matrix.rows()}, {"row_major", entries}};
}

nlohmann::json branches_to_json(const BranchDecomposition &d) {
    return {{"basis", d.basis},
            {"count", d.branches.size()},
            {"support", site_json(d.support)},
            {"unbranched", site_json(d.unbranched)},
            {"branches", branch_list_json(d.branches)}};
}

nlohmann::json clusters_to_json(const BranchClusters &c) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto &cl : c.clusters) {
        out.push_back({{"sites", site_json(cl.sites)},
                       {"branch_count", cl.branches.size()},
                       {"branches", branch_list_json(cl.branches)}});
    }
    return out;
}

RunReport build_report(const RunConfig &run) {
    const auto start = std::chrono::steady_clock::now();
    const ScenarioConfig &cfg = run.scenario;
    const double tol = run.tolerance;
    const auto states = run_schedule(cfg.initial, cfg.schedule, cfg.horizon);

    std::ostringstream series;
    series << "step,site,coherence,purity,entropy,branch_count,cluster_count\n";
    std::ostringstream corr;
    corr << "step,kind,site_a,site_b,theta_a,theta_a_prime,theta_b,theta_b_prime,value\n";

    nlohmann::json steps = nlohmann::json::array();
    for (std::size_t t = 0; t < states.size(); ++t) {
        const PureState &psi = states[t];
        const BranchDecomposition branches = branch_decompose(psi, tol);
        const BranchClusters clusters = extended_branch_clusters(psi, tol);

        nlohmann::json site_metrics = nlohmann::json::array();
        for (const auto &site : psi.lattice().sites()) {
            const DensityMatrix rho = reduced_density_matrix(psi, {site.id});
            const double c = coherence(rho);
            const double p = purity(rho);
            const double s = von_neumann_entropy(rho);
            series << t << ',' << site.id.index << ',' << fmt12(report_scalar(c)) << ','
                   << fmt12(report_scalar(p)) << ',' << fmt12(report_scalar(s)) << ','
                   << branches.branches.size() << ',' << clusters.clusters.size() << '\n';
            site_metrics.push_back({{"site", site.id.index},
                                    {"coherence", report_scalar(c)},
                                    {"purity", report_scalar(p)},
                                    {"entropy", report_scalar(s)},
                                    {"decohered", is_decohered(psi, site.id, tol)}});
        }

        nlohmann::json analyses = nlohmann::json::object();
        for (const auto &req : cfg.analyses) {
            const auto &p = req.params;
            if (req.name == "site_metrics") {
                analyses["site_metrics"] = site_metrics;
            } else if (req.name == "branches") {
                analyses["branches"] = branches_to_json(branches);
            } else if (req.name == "clusters") {
                analyses["clusters"] = clusters_to_json(clusters);
            } else if (req.name == "rdm") {
                analyses["rdm"].push_back(
                    density_matrix_to_json(reduced_density_matrix(psi, site_list(p.at("sites")))));
            } else if (req.name == "entropy") {
                analyses["entropy"].push_back(
                    {{"region", p.at("region")},
                     {"value", report_scalar(entanglement_entropy(psi, site_list(p.at("region"))))}});
            } else if (req.name == "mutual_information") {
                analyses["mutual_information"].push_back(
                    {{"a", p.at("a")},
                     {"b", p.at("b")},
                     {"value", report_scalar(mutual_information(psi, site_list(p.at("a")),
                                                                site_list(p.at("b"))))}});
            } else if (req.name == "correlation") {
                const MeasurementSetting s1{SiteId{p.at("site_a").get<int>()},
                                            p.value("theta_a", 0.0)};
                const MeasurementSetting s2{SiteId{p.at("site_b").get<int>()},
                                            p.value("theta_b", 0.0)};
                const double v = correlation(psi, s1, s2);
                analyses["correlation"].push_back({{"site_a", s1.site.index},
                                                   {"theta_a", s1.theta},
                                                   {"site_b", s2.site.index},
                                                   {"theta_b", s2.theta},
                                                   {"value", report_scalar(v)}});
                corr << t << ",correlation," << s1.site.index << ',' << s2.site.index << ','
                     << fmt12(s1.theta) << ",," << fmt12(s2.theta) << ",," << fmt12(report_scalar(v))
                     << '\n';
            } else if (req.name == "chsh") {
                const SiteId a{p.at("site_a").get<int>()};
                const SiteId b{p.at("site_b").get<int>()};
                const auto &ang = p.at("angles");
                const ChshSettings s{ang.at(0).get<double>(), ang.at(1).get<double>(),
                                     ang.at(2).get<double>(), ang.at(3).get<double>()};
                const double v = chsh(psi, a, b, s);
                analyses["chsh"].push_back({{"site_a", a.index},
                                            {"site_b", b.index},
                                            {"angles", ang},
                                            {"value", report_scalar(v)}});
                corr << t << ",chsh," << a.index << ',' << b.index << ',' << fmt12(s.a) << ','
                     << fmt12(s.a_prime) << ',' << fmt12(s.b) << ',' << fmt12(s.b_prime) << ','
                     << fmt12(report_scalar(v)) << '\n';
            }
        }

        steps.push_back({{"t", t},
                         {"term_count", psi.term_count()},
                         {"norm", report_scalar(norm(psi))},
                         {"branch_count", branches.branches.size()},
                         {"cluster_count", clusters.clusters.size()},
                         {"state", state_to_json(psi).at("terms")},
                         {"analyses", analyses}});
    }

    nlohmann::json warnings = nlohmann::json::array();
    for (const auto &w : cfg.warnings) {
        warnings.push_back(w);
    }
    RunReport report;
    report.document = {{"config", run.source},
                       {"scenario", cfg.name},
                       {"lattice", lattice_to_json(cfg.lattice)},
                       {"horizon", cfg.horizon},
                       {"engine", {{"name", "branchsim"},
                                   {"version", kEngineVersion},
                                   {"tolerance", run.tolerance},
                                   {"prune_threshold", kPruneThreshold}}},
                       {"warnings", warnings},
                       {"steps", steps}};
    report.timeseries_csv = series.str();
    report.correlations_csv = corr.str();
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

void write_report(const RunReport &report, const std::filesystem::path &dir) {
    std::filesystem::create_directories(dir);
    write_text(dir / "report.json", report.document.dump(2) + "\n");
    write_text(dir / "timeseries.csv", report.timeseries_csv);
    write_text(dir / "correlations.csv", report.correlations_csv);
    write_text(dir / "timing.json",
               nlohmann::json{{"wall_seconds", report.wall_seconds}}.dump(2) + "\n");
}

} // namespace branchsim
