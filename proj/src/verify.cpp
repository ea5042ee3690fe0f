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

#include "branchsim/verify.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "branchsim/analysis.hpp"

namespace branchsim {

Gate2 random_gate2(std::mt19937_64 &rng) {
    std::normal_distribution<double> normal;
    Eigen::Matrix4cd z;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            z(r, c) = {normal(rng), normal(rng)};
        }
    }
    Eigen::HouseholderQR<Eigen::Matrix4cd> qr(z);
    Eigen::Matrix4cd q = qr.householderQ();
    const Eigen::Matrix4cd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < 4; ++c) {
        q.col(c) *= r(c, c) / std::abs(r(c, c));
    }
    return make_gate2("haar", q);
}

PureState random_state(const Lattice &lattice, std::mt19937_64 &rng) {
    std::normal_distribution<double> normal;
    const std::size_t n = lattice.size();
    std::vector<std::pair<BasisString, Amplitude>> terms;
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i) {
        terms.emplace_back(BasisString::from_index(i, n), Amplitude{normal(rng), normal(rng)});
    }
    return new_entangled_state(lattice, terms);
}

std::optional<std::string> compare_engines(const PureState &sparse,
                                           const oracle::DenseState &dense, double tolerance) {
    std::ostringstream why;
    const double overlap =
        std::abs(oracle::dense_inner_product(oracle::densify(sparse), dense));
    if (std::abs(overlap - 1.0) > tolerance) {
        why << "overlap " << overlap;
        return why.str();
    }

    const Lattice &lattice = sparse.lattice();
    std::vector<std::vector<SiteId>> regions;
    for (std::size_t p = 0; p < lattice.size(); ++p) {
        regions.push_back({lattice[p].id});
        if (p + 1 < lattice.size()) {
            regions.push_back({lattice[p].id, lattice[p + 1].id});
        }
    }
    if (lattice.size() >= 2) {
        regions.push_back({lattice[lattice.size() - 1].id, lattice[0].id});
    }
    for (const auto &region : regions) {
        const DensityMatrix a = reduced_density_matrix(sparse, region);
        const DensityMatrix b = oracle::dense_rdm(dense, region);
        const double diff = (a.matrix - b.matrix).cwiseAbs().maxCoeff();
        if (diff > tolerance) {
            why << "reduced matrix on sites starting " << region.front().index << " differs by "
                << diff;
            return why.str();
        }
        const double ds = std::abs(von_neumann_entropy(a) - von_neumann_entropy(b));
        if (ds > tolerance) {
            why << "entropy on sites starting " << region.front().index << " differs by " << ds;
            return why.str();
        }
    }

    const double branch_tol = 1e-9;
    const BranchDecomposition x = branch_decompose(sparse, branch_tol);
    const BranchDecomposition y = oracle::dense_branch_decompose(dense, branch_tol);
    if (x.support != y.support || x.branches.size() != y.branches.size()) {
        why << "branch structure differs: " << x.branches.size() << " vs " << y.branches.size()
            << " branches";
        return why.str();
    }
    for (std::size_t i = 0; i < x.branches.size(); ++i) {
        if (x.branches[i].assignment != y.branches[i].assignment ||
            std::abs(x.branches[i].weight - y.branches[i].weight) > tolerance) {
            why << "branch " << i << " differs";
            return why.str();
        }
    }
    return std::nullopt;
}

namespace {

PureState equal_superposition(const Lattice &lattice, const std::vector<std::string> &digits) {
    std::vector<std::pair<BasisString, Amplitude>> terms;
    for (const auto &d : digits) {
        terms.emplace_back(basis(lattice, d), 1.0);
    }
    return new_entangled_state(lattice, terms);
}

double overlap_defect(const PureState &a, const PureState &b) {
    return std::abs(std::abs(inner_product(a, b)) - 1.0);
}

std::string num(double v) {
    std::ostringstream s;
    s.precision(3);
    s << v;
    return s.str();
}

class Checker {
  public:
    explicit Checker(double tol) : tol_(tol) {}

    void expect(const std::string &key, const std::string &what, double defect) {
        results_.push_back({key, what, defect <= tol_, "defect " + num(defect)});
    }
    void expect_true(const std::string &key, const std::string &what, bool ok,
                     const std::string &detail = {}) {
        results_.push_back({key, what, ok, detail});
    }
    void expect_states(const std::string &key, const std::vector<PureState> &got,
                       const std::map<int, std::vector<std::string>> &printed) {
        double worst = 0.0;
        for (const auto &[t, digits] : printed) {
            worst = std::max(worst,
                             overlap_defect(got.at(t), equal_superposition(got.at(t).lattice(), digits)));
        }
        expect(key, "printed states reproduced", worst);
    }
    double tol() const { return tol_; }
    std::vector<CheckResult> take() { return std::move(results_); }

  private:
    double tol_;
    std::vector<CheckResult> results_;
};

void check_differential(Checker &c, const ScenarioConfig &cfg) {
    const auto sparse = run_schedule(cfg.initial, cfg.schedule, cfg.horizon);
    oracle::DenseState dense = oracle::densify(cfg.initial);
    std::optional<std::string> failure;
    for (int t = 0; t <= cfg.horizon && !failure; ++t) {
        failure = compare_engines(sparse[t], dense, c.tol());
        if (failure) {
            *failure = "t=" + std::to_string(t) + ": " + *failure;
        }
        for (const auto &a : cfg.schedule.step(t)) {
            if (const auto *g2 = std::get_if<Gate2>(&a.gate)) {
                dense = oracle::dense_apply(dense, *g2, {a.first, *a.second});
            } else {
                dense = oracle::dense_apply(dense, std::get<Gate1>(a.gate), a.first);
            }
        }
    }
    c.expect_true("oracle/" + cfg.name, "sparse and dense engines agree at every step", !failure,
                  failure.value_or(""));
}

} // namespace

std::vector<CheckResult> run_verification(const VerifyOptions &options) {
    Checker c(options.tolerance);
    const double h = 1.0 / std::sqrt(2.0);

    // Gate library.
    std::vector<Gate2> library{gate_system_field(), gate_field_copy(), gate_field_swap()};
    if (options.inject_fault) {
        library[1].matrix(2, 3) += 0.25;
    }
    double worst_unitarity = 0.0;
    for (const auto &g : library) {
        worst_unitarity = std::max(worst_unitarity, unitarity_defect(g.matrix));
    }
    c.expect("gates", "library gates are unitary", worst_unitarity);

    {
        const Lattice pair = Lattice::with_systems(0, 1, {0});
        const Lattice field_pair = Lattice::with_systems(1, 2, {});
        auto maps = [](const Lattice &l, const Gate2 &g, const char *from, const char *to) {
            const PureState in = equal_superposition(l, {from});
            const PureState out = apply_gate2(in, g, {l[0].id, l[1].id});
            return overlap_defect(out, equal_superposition(l, {to}));
        };
        double worst = 0.0;
        for (auto [from, to] : {std::pair{"00", "01"}, {"01", "00"}, {"10", "10"}, {"11", "11"}}) {
            worst = std::max(worst, maps(pair, library[0], from, to));
        }
        c.expect("gates", "system-field coupling table", worst);
        worst = 0.0;
        for (auto [from, to] : {std::pair{"00", "00"}, {"01", "01"}, {"10", "11"}, {"11", "10"}}) {
            worst = std::max(worst, maps(field_pair, library[1], from, to));
        }
        c.expect("gates", "field copy table", worst);
        worst = 0.0;
        for (auto [from, to] : {std::pair{"00", "00"}, {"01", "10"}, {"10", "01"}, {"11", "11"}}) {
            worst = std::max(worst, maps(field_pair, library[2], from, to));
        }
        c.expect("gates", "field swap table", worst);
    }

    // Single qubit chain.
    const ScenarioConfig single = scenario_single(h, h, 4);
    const auto chain = run_schedule(single.initial, single.schedule, 3);
    c.expect_states("single-chain", chain,
                    {{0, {"00000", "10000"}},
                     {1, {"01000", "10000"}},
                     {2, {"01100", "10000"}},
                     {3, {"01110", "10000"}}});
    double worst_norm = 0.0;
    for (const auto &s : chain) {
        worst_norm = std::max(worst_norm, std::abs(norm(s) - 1.0));
    }
    c.expect("single-chain", "norm conserved", worst_norm);

    {
        const DensityMatrix rho = reduced_density_matrix(chain[1], {SiteId{0}});
        Eigen::Matrix2cd want = Eigen::Matrix2cd::Identity() * 0.5;
        c.expect("rdm-mixed", "qubit reduced state at t=1 is I/2",
                 (rho.matrix - want).cwiseAbs().maxCoeff());
        std::mt19937_64 rng(options.seed);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            worst = std::max(worst,
                             coherence(change_basis(rho, {{SiteId{0}, rotation_gate(angle(rng))}})));
        }
        c.expect("rdm-mixed", "zero coherence in 100 random bases", worst);
    }

    {
        const ScenarioConfig skew = scenario_single(std::sqrt(2.0 / 3.0), std::sqrt(1.0 / 3.0), 4);
        const auto states = run_schedule(skew.initial, skew.schedule, 1);
        const DensityMatrix rho = reduced_density_matrix(states[1], {SiteId{0}});
        Eigen::Matrix2cd diag;
        diag << 2.0 / 3.0, 0, 0, 1.0 / 3.0;
        c.expect("basis-relativity", "t=1 reduced state diag(2/3, 1/3)",
                 (rho.matrix - diag).cwiseAbs().maxCoeff());
        Eigen::Matrix2cd rotated;
        rotated << 0.5, 1.0 / 6.0, 1.0 / 6.0, 0.5;
        const DensityMatrix r = change_basis(rho, {{SiteId{0}, hadamard_gate()}});
        c.expect("basis-relativity", "Hadamard-basis matrix [[1/2,1/6],[1/6,1/2]]",
                 (r.matrix - rotated).cwiseAbs().maxCoeff());
    }

    {
        const ScenarioConfig bi = scenario_bidirectional(4);
        const auto states = run_schedule(bi.initial, bi.schedule, 4);
        c.expect_states("bidirectional", states, {{4, {"101110", "010000"}}});
        double worst = 0.0;
        for (int t = 0; t <= 3; ++t) {
            worst = std::max(worst, std::abs(1.0 - purity(reduced_density_matrix(
                                                       states[t], {SiteId{-1}}))));
        }
        c.expect("bidirectional", "site -1 untouched before step 3", worst);
    }

    {
        const ScenarioConfig col = scenario_collision();
        const auto states = run_schedule(col.initial, col.schedule, 3);
        c.expect_states("collision", states,
                        {{1, {"010010", "010001", "100010", "100001"}},
                         {2, {"001100", "001001", "100100", "100001"}},
                         {3, {"001100", "000101", "101000", "100001"}}});
        const auto d = branch_decompose(states[3]);
        double worst = d.branches.size() == 4 ? 0.0 : 1.0;
        for (const auto &b : d.branches) {
            worst = std::max(worst, std::abs(b.weight - 0.25));
        }
        c.expect("collision", "four branches of weight 1/4 at t=3", worst);
        c.expect("collision", "sites 1 and 4 pure at t=2",
                 std::max(std::abs(1.0 - purity(reduced_density_matrix(states[2], {SiteId{1}}))),
                          std::abs(1.0 - purity(reduced_density_matrix(states[2], {SiteId{4}})))));
        c.expect("collision", "qubits uncorrelated at t=3",
                 std::abs(mutual_information(states[3], {SiteId{0}}, {SiteId{5}})));
    }

    {
        const ScenarioConfig epr = scenario_epr();
        const auto states = run_schedule(epr.initial, epr.schedule, 3);
        c.expect_states("epr", states,
                        {{0, {"000001", "100000"}},
                         {1, {"010001", "100010"}},
                         {2, {"001001", "100100"}},
                         {3, {"000101", "101000"}}});
        const auto d = branch_decompose(states[3]);
        double worst = d.branches.size() == 2 ? 0.0 : 1.0;
        for (const auto &b : d.branches) {
            worst = std::max(worst, std::abs(b.weight - 0.5));
        }
        c.expect("epr", "two branches of weight 1/2 at t=3", worst);
        const auto clusters = extended_branch_clusters(states[1]);
        const bool one = clusters.clusters.size() == 1 &&
                         clusters.clusters[0].sites ==
                             std::set<SiteId>{SiteId{0}, SiteId{1}, SiteId{4}, SiteId{5}} &&
                         clusters.clusters[0].branches.size() == 2;
        c.expect_true("epr", "t=1 extended branch spans {0,1,4,5}", one);
    }

    {
        const ScenarioConfig lc = scenario_single(h, h, 12);
        const auto states = run_schedule(lc.initial, lc.schedule, 12);
        double worst = 0.0;
        for (int k = 1; k <= 12; ++k) {
            for (int t = 0; t < k; ++t) {
                worst = std::max(worst, std::abs(1.0 - purity(reduced_density_matrix(
                                                           states[t], {SiteId{k}}))));
            }
        }
        c.expect("light-cone", "field site k pure for every t < k", worst);
    }

    for (const auto &cfg : {scenario_single(h, h, 4), scenario_bidirectional(4),
                            scenario_collision(), scenario_epr()}) {
        check_differential(c, cfg);
    }

    {
        std::mt19937_64 rng(options.seed);
        const Lattice lattice = Lattice::with_systems(1, 8, {});
        std::uniform_int_distribution<int> site(1, 8);
        std::optional<std::string> failure;
        for (int seq = 0; seq < options.random_sequences && !failure; ++seq) {
            PureState sparse = random_state(lattice, rng);
            oracle::DenseState dense = oracle::densify(sparse);
            for (int g = 0; g < 6; ++g) {
                const Gate2 gate = random_gate2(rng);
                const int a = site(rng);
                int b = site(rng);
                while (b == a) {
                    b = site(rng);
                }
                sparse = apply_gate2(sparse, gate, {SiteId{a}, SiteId{b}});
                dense = oracle::dense_apply(dense, gate, {SiteId{a}, SiteId{b}});
            }
            failure = compare_engines(sparse, dense, c.tol());
            if (failure) {
                *failure = "sequence " + std::to_string(seq) + ": " + *failure;
            }
        }
        c.expect_true("oracle/random",
                      std::to_string(options.random_sequences) + " random 8-site gate sequences",
                      !failure, failure.value_or(""));
    }

    return c.take();
}

} // namespace branchsim
