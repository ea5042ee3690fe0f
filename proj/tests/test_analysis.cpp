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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "branchsim/verify.hpp"
#include "test_support.hpp"

using namespace branchsim;
using namespace branchsim::testing;

namespace {

const double kLn2 = std::log(2.0);

std::vector<PureState> chain_states() {
    const ScenarioConfig cfg = scenario_single(kInvSqrt2, kInvSqrt2, 4);
    return run(cfg, cfg.horizon);
}

std::vector<PureState> epr_states() {
    const ScenarioConfig cfg = scenario_epr();
    return run(cfg, cfg.horizon);
}

std::vector<PureState> collision_states() {
    const ScenarioConfig cfg = scenario_collision();
    return run(cfg, cfg.horizon);
}

// Correlator from rotating both sites and reading parities; no reduced matrices involved.
double correlation_by_rotation(const PureState &psi, SiteId a, double ta, SiteId b, double tb) {
    const PureState r = apply_gate1(apply_gate1(psi, rotation_gate(ta), a), rotation_gate(tb), b);
    const std::size_t pa = r.lattice().position(a);
    const std::size_t pb = r.lattice().position(b);
    double e = 0.0;
    for (const auto &[key, amp] : r.terms()) {
        e += (key.get(pa) == key.get(pb) ? 1.0 : -1.0) * std::norm(amp);
    }
    return e;
}

// Exhaustive four-angle search over a grid of correlators computed by rotation.
double brute_force_chsh(const PureState &psi, SiteId a, SiteId b, double resolution_deg) {
    const int n = static_cast<int>(std::lround(360.0 / resolution_deg));
    const double step = resolution_deg * std::numbers::pi / 180.0;
    std::vector<double> e(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            e[i * n + j] = correlation_by_rotation(psi, a, i * step, b, j * step);
        }
    }
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int ip = 0; ip < n; ++ip) {
            for (int j = 0; j < n; ++j) {
                for (int jp = 0; jp < n; ++jp) {
                    const double s = std::abs(e[i * n + j] - e[i * n + jp] + e[ip * n + j] +
                                              e[ip * n + jp]);
                    best = std::max(best, s);
                }
            }
        }
    }
    return best;
}

} // namespace

TEST_CASE("reduced matrix of the first chain spin after coupling") {
    const auto states = chain_states();
    const auto rho = reduced_density_matrix(states[1], {SiteId{1}});
    CHECK(rho.matrix(0, 0).real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(rho.matrix(1, 1).real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(rho.matrix(0, 1)) < 1e-15);
    rho.check_invariants();
}

TEST_CASE("reduced matrix of the qubit before coupling is a projector") {
    const auto states = chain_states();
    const auto rho = reduced_density_matrix(states[0], {SiteId{0}});
    CHECK(std::abs(rho.matrix(0, 1) - 0.5) < 1e-15);
    CHECK(std::abs(rho.matrix(1, 0) - 0.5) < 1e-15);
    CHECK(purity(rho) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("reduced matrix errors") {
    const auto states = chain_states();
    CHECK_THROWS_AS(reduced_density_matrix(states[0], {}), std::invalid_argument);
    CHECK_THROWS_AS(reduced_density_matrix(states[0], {SiteId{9}}), std::invalid_argument);
    CHECK_THROWS_AS(reduced_density_matrix(states[0], {SiteId{1}, SiteId{1}}),
                    std::invalid_argument);
    const ScenarioConfig big = scenario_single(kInvSqrt2, kInvSqrt2, 14);
    std::vector<SiteId> thirteen;
    for (int i = 0; i < 13; ++i) {
        thirteen.push_back(SiteId{i});
    }
    CHECK_THROWS_AS(reduced_density_matrix(big.initial, thirteen), std::invalid_argument);
    CHECK_THROWS_AS(entanglement_entropy(big.initial, thirteen), std::invalid_argument);
}

TEST_CASE("reduced matrix ordering follows the requested site order") {
    const Lattice l = Lattice::with_systems(1, 3, {});
    const PureState psi = superposition(l, {"100"});
    const auto ab = reduced_density_matrix(psi, {SiteId{1}, SiteId{2}});
    const auto ba = reduced_density_matrix(psi, {SiteId{2}, SiteId{1}});
    CHECK(ab.matrix(2, 2).real() == doctest::Approx(1.0));
    CHECK(ba.matrix(1, 1).real() == doctest::Approx(1.0));
}

TEST_CASE("property: partial trace reproduces local expectation values") {
    std::mt19937_64 rng(41);
    std::normal_distribution<double> normal;
    const Lattice l = Lattice::with_systems(0, 5, {0});
    const std::size_t n = l.size();
    for (int trial = 0; trial < 100; ++trial) {
        const PureState psi = random_small_state(l, rng, 0.5);
        const int sa = trial % 6;
        const int sb = (sa + 1 + (trial / 6) % 5) % 6;
        Eigen::Matrix4cd g;
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                g(i, j) = {normal(rng), normal(rng)};
            }
        }
        const Eigen::Matrix4cd obs = g + g.adjoint();

        const std::size_t pa = l.position(SiteId{sa});
        const std::size_t pb = l.position(SiteId{sb});
        std::vector<Amplitude> dense(std::size_t{1} << n);
        for (const auto &[key, amp] : psi.terms()) {
            dense[key.to_index()] = amp;
        }
        const std::uint64_t ma = std::uint64_t{1} << (n - 1 - pa);
        const std::uint64_t mb = std::uint64_t{1} << (n - 1 - pb);
        Amplitude direct = 0.0;
        for (std::uint64_t i = 0; i < dense.size(); ++i) {
            const int ki = ((i & ma) ? 2 : 0) + ((i & mb) ? 1 : 0);
            const std::uint64_t env = i & ~(ma | mb);
            for (int kj = 0; kj < 4; ++kj) {
                const std::uint64_t j = env | ((kj & 2) ? ma : 0) | ((kj & 1) ? mb : 0);
                direct += std::conj(dense[i]) * obs(ki, kj) * dense[j];
            }
        }
        const auto rho = reduced_density_matrix(psi, {SiteId{sa}, SiteId{sb}});
        const Amplitude traced = (rho.matrix * obs).trace();
        REQUIRE(std::abs(traced - direct) < 1e-12);
    }
}

TEST_CASE("change of basis") {
    // A pure |0><0| seen through a Hadamard is maximally coherent.
    Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(2, 2);
    zero(0, 0) = 1.0;
    const DensityMatrix rho{{SiteId{1}}, zero};
    const auto h = change_basis(rho, {{SiteId{1}, hadamard_gate()}});
    CHECK(coherence(h) == doctest::Approx(1.0).epsilon(1e-14));

    const DensityMatrix mixed{{SiteId{1}}, Eigen::MatrixXcd::Identity(2, 2) * 0.5};
    const auto m = change_basis(mixed, {{SiteId{1}, rotation_gate(0.3)}});
    CHECK((m.matrix - mixed.matrix).cwiseAbs().maxCoeff() < 1e-15);

    const auto same = change_basis(rho, {{SiteId{1}, gate_identity1()}});
    CHECK(same.matrix == rho.matrix);
    CHECK_THROWS_AS(change_basis(rho, {}), std::invalid_argument);
    CHECK_THROWS_AS(change_basis(rho, {{SiteId{2}, hadamard_gate()}}), std::invalid_argument);
}

TEST_CASE("property: change of basis keeps trace and spectrum") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    const Lattice l = Lattice::with_systems(1, 5, {});
    for (int trial = 0; trial < 100; ++trial) {
        const PureState psi = random_small_state(l, rng, 0.7);
        const auto rho = reduced_density_matrix(psi, {SiteId{2}, SiteId{4}});
        const auto rot = change_basis(rho, {{SiteId{2}, rotation_gate(angle(rng))},
                                            {SiteId{4}, rotation_gate(angle(rng))}});
        REQUIRE(std::abs(rot.trace() - rho.trace()) < 1e-12);
        REQUIRE((rot.eigenvalues() - rho.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);
        REQUIRE(std::abs(purity(rot) - purity(rho)) < 1e-12);
        rot.check_invariants();
    }
}

TEST_CASE("coherence values") {
    Eigen::MatrixXcd m(2, 2);
    m << 0.5, 0.0, 0.0, 0.5;
    CHECK(coherence({{SiteId{1}}, m}) == 0.0);
    m << 2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0;
    CHECK(coherence({{SiteId{1}}, m}) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    m << 0.5, 0.5, 0.5, 0.5;
    CHECK(coherence({{SiteId{1}}, m}) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("purity values") {
    Eigen::MatrixXcd m(2, 2);
    m << 0.5, 0.0, 0.0, 0.5;
    CHECK(purity({{SiteId{1}}, m}) == doctest::Approx(0.5).epsilon(1e-15));
    m << 1.0, 0.0, 0.0, 0.0;
    CHECK(purity({{SiteId{1}}, m}) == doctest::Approx(1.0).epsilon(1e-15));
    m << 2.0 / 3.0, 0.0, 0.0, 1.0 / 3.0;
    CHECK(purity({{SiteId{1}}, m}) == doctest::Approx(5.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("decoherence flags along the chain") {
    const auto states = chain_states();
    CHECK(is_decohered(states[1], SiteId{1}));
    CHECK_FALSE(is_decohered(states[0], SiteId{0}));
    CHECK_FALSE(is_decohered(states[1], SiteId{2}));
    CHECK_THROWS_AS(is_decohered(states[1], SiteId{1}, -1.0), std::invalid_argument);
}

TEST_CASE("entanglement entropy of the qubit") {
    const auto states = chain_states();
    CHECK(std::abs(entanglement_entropy(states[0], {SiteId{0}})) < 1e-12);
    for (int t = 1; t <= 4; ++t) {
        CHECK(entanglement_entropy(states[t], {SiteId{0}}) == doctest::Approx(kLn2).epsilon(1e-12));
    }
    std::vector<SiteId> all;
    for (const auto &s : states[3].lattice().sites()) {
        all.push_back(s.id);
    }
    CHECK(std::abs(entanglement_entropy(states[3], all)) < 1e-12);
}

TEST_CASE("mutual information") {
    const auto collision = collision_states();
    CHECK(std::abs(mutual_information(collision[3], {SiteId{0}}, {SiteId{5}})) < 1e-12);

    // Reference value: pure pair with maximally mixed marginals, S = ln2 + ln2 - 0.
    const auto epr = epr_states();
    CHECK(mutual_information(epr[0], {SiteId{0}}, {SiteId{5}}) ==
          doctest::Approx(2.0 * kLn2).epsilon(1e-12));

    CHECK_THROWS_AS(mutual_information(epr[0], {SiteId{0}}, {SiteId{0}, SiteId{1}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(mutual_information(epr[0], {}, {SiteId{1}}), std::invalid_argument);
    const auto chain = chain_states();
    CHECK(std::abs(mutual_information(chain[0], {SiteId{1}}, {SiteId{2}})) < 1e-12);
}

TEST_CASE("branch decomposition of the chain") {
    const auto states = chain_states();
    const auto d3 = branch_decompose(states[3]);
    REQUIRE(d3.branches.size() == 2);
    for (const auto &b : d3.branches) {
        CHECK(b.weight == doctest::Approx(0.5).epsilon(1e-12));
    }
    CHECK(d3.support == std::set<SiteId>{SiteId{0}, SiteId{1}, SiteId{2}, SiteId{3}});
    CHECK(d3.unbranched == std::set<SiteId>{SiteId{4}});

    const auto d0 = branch_decompose(states[0]);
    REQUIRE(d0.branches.size() == 1);
    CHECK(d0.branches[0].weight == doctest::Approx(1.0));
    CHECK(d0.support.empty());
    CHECK_THROWS_AS(branch_decompose(states[0], 1.5), std::invalid_argument);
}

TEST_CASE("branch weights follow the Born rule") {
    const ScenarioConfig cfg = scenario_single(std::sqrt(2.0 / 3.0), std::sqrt(1.0 / 3.0), 4);
    const auto states = run(cfg, 3);
    const auto d = branch_decompose(states[3]);
    REQUIRE(d.branches.size() == 2);
    double w_qubit0 = 0.0;
    for (const auto &b : d.branches) {
        if (b.assignment.at(SiteId{0}) == 0) {
            w_qubit0 = b.weight;
        }
    }
    CHECK(w_qubit0 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("collision and epr branch counts") {
    const auto c = collision_states();
    const auto e = epr_states();
    CHECK(branch_decompose(c[1]).branches.size() == 4);
    CHECK(branch_decompose(c[3]).branches.size() == 4);
    CHECK(branch_decompose(e[3]).branches.size() == 2);
}

TEST_CASE("property: results are stable across tolerances") {
    std::vector<PureState> states;
    for (const auto &s : chain_states()) states.push_back(s);
    for (const auto &s : collision_states()) states.push_back(s);
    for (const auto &s : epr_states()) states.push_back(s);
    for (const auto &s : run(scenario_bidirectional(4), 4)) states.push_back(s);
    for (const auto &psi : states) {
        const auto ref = branch_decompose(psi, 1e-12);
        const auto ref_clusters = extended_branch_clusters(psi, 1e-12);
        for (double tol : {1e-11, 1e-9, 1e-6, 1e-3}) {
            const auto d = branch_decompose(psi, tol);
            REQUIRE(d.branches.size() == ref.branches.size());
            REQUIRE(d.support == ref.support);
            const auto c = extended_branch_clusters(psi, tol);
            REQUIRE(c.clusters.size() == ref_clusters.clusters.size());
            for (const auto &s : psi.lattice().sites()) {
                REQUIRE(is_decohered(psi, s.id, tol) == is_decohered(psi, s.id, 1e-12));
            }
        }
    }
}

TEST_CASE("clusters: independent qubits stay separate") {
    const auto c = collision_states();
    const auto k1 = extended_branch_clusters(c[1]);
    REQUIRE(k1.clusters.size() == 2);
    CHECK(k1.clusters[0].sites == std::set<SiteId>{SiteId{0}, SiteId{1}});
    CHECK(k1.clusters[1].sites == std::set<SiteId>{SiteId{4}, SiteId{5}});
    for (const auto &cl : k1.clusters) {
        CHECK(cl.branches.size() == 2);
    }
}

TEST_CASE("clusters: at the meeting step links are pairwise") {
    // The final collision state is a product of two Bell-like pairs, (0,3) and (2,5).
    const auto c = collision_states();
    CHECK(mutual_information(c[3], {SiteId{0}}, {SiteId{3}}) == doctest::Approx(2.0 * kLn2));
    CHECK(std::abs(mutual_information(c[3], {SiteId{0}}, {SiteId{2}})) < 1e-12);
    const auto k3 = extended_branch_clusters(c[3]);
    REQUIRE(k3.clusters.size() == 2);
    CHECK(k3.clusters[0].sites == std::set<SiteId>{SiteId{0}, SiteId{3}});
    CHECK(k3.clusters[1].sites == std::set<SiteId>{SiteId{2}, SiteId{5}});
}

TEST_CASE("clusters: entangled qubits share one extended branch") {
    const auto e = epr_states();
    const auto k1 = extended_branch_clusters(e[1]);
    REQUIRE(k1.clusters.size() == 1);
    CHECK(k1.clusters[0].sites == std::set<SiteId>{SiteId{0}, SiteId{1}, SiteId{4}, SiteId{5}});
    CHECK(k1.clusters[0].branches.size() == 2);
}

TEST_CASE("correlations") {
    const auto e = epr_states();
    CHECK(correlation(e[0], {SiteId{0}, 0.0}, {SiteId{5}, 0.0}) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(correlation(e[3], {SiteId{2}, 0.0}, {SiteId{3}, 0.0}) == doctest::Approx(-1.0).epsilon(1e-12));
    const auto c = collision_states();
    CHECK(std::abs(correlation(c[3], {SiteId{2}, 0.0}, {SiteId{3}, 0.0})) < 1e-12);
    CHECK_THROWS_AS(correlation(e[0], {SiteId{1}, 0.0}, {SiteId{1}, 0.5}), std::invalid_argument);
}

TEST_CASE("property: correlator agrees with explicit rotation") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    const Lattice l = Lattice::with_systems(0, 4, {0});
    for (int trial = 0; trial < 200; ++trial) {
        const PureState psi = random_small_state(l, rng, 0.5);
        const SiteId a{trial % 5};
        const SiteId b{(trial % 5 + 1 + trial % 3) % 5};
        const double ta = angle(rng);
        const double tb = angle(rng);
        REQUIRE(std::abs(correlation(psi, {a, ta}, {b, tb}) -
                         correlation_by_rotation(psi, a, ta, b, tb)) < 1e-12);
    }
}

TEST_CASE("property: Tsirelson bound holds for random states") {
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    const Lattice l = Lattice::with_systems(1, 4, {});
    for (int trial = 0; trial < 500; ++trial) {
        const PureState psi = random_state(l, rng);
        const ChshSettings s{angle(rng), angle(rng), angle(rng), angle(rng)};
        REQUIRE(chsh(psi, SiteId{1}, SiteId{3}, s) <= 2.0 * std::sqrt(2.0) + 1e-12);
    }
    // Product states never exceed the classical bound.
    const PureState prod = superposition(l, {"0000"});
    const auto scan = chsh_scan(prod, SiteId{1}, SiteId{2}, 15.0);
    CHECK(scan.refined_max <= 2.0 + 1e-12);
}

TEST_CASE("chsh grid search matches an exhaustive four-angle search") {
    const auto e = epr_states();
    const auto c = collision_states();
    struct Case {
        const PureState *psi;
        SiteId a, b;
    };
    for (const Case &k : {Case{&e[0], SiteId{0}, SiteId{5}}, Case{&e[3], SiteId{2}, SiteId{3}},
                          Case{&c[3], SiteId{2}, SiteId{3}}}) {
        const auto scan = chsh_scan(*k.psi, k.a, k.b, 10.0);
        CHECK(scan.grid_max == doctest::Approx(brute_force_chsh(*k.psi, k.a, k.b, 10.0)).epsilon(1e-12));
        CHECK(scan.refined_max >= scan.grid_max - 1e-15);
    }
}

TEST_CASE("chsh maxima") {
    const auto e = epr_states();
    const auto qubits = chsh_scan(e[0], SiteId{0}, SiteId{5}, 1.0);
    CHECK(qubits.refined_max == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
    // The meeting spins are classically correlated (Z-only tensor), so the maximum is 2.
    const auto spins = chsh_scan(e[3], SiteId{2}, SiteId{3}, 1.0);
    CHECK(spins.refined_max == doctest::Approx(2.0).epsilon(1e-9));
    const auto c = collision_states();
    CHECK(chsh_scan(c[3], SiteId{2}, SiteId{3}, 1.0).refined_max <= 2.0 + 1e-9);

    const auto coarse = chsh_scan(e[0], SiteId{0}, SiteId{5}, 90.0, true);
    CHECK(coarse.rows.size() == 16);
    CHECK_THROWS_AS(chsh_scan(e[0], SiteId{0}, SiteId{5}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(chsh_scan(e[0], SiteId{0}, SiteId{5}, 91.0), std::invalid_argument);
}

TEST_CASE("measurement sampling follows the Born rule") {
    const ScenarioConfig cfg = scenario_single(std::sqrt(0.3), std::sqrt(0.7), 4);
    const auto states = run(cfg, 3);
    const MeasurementSetting z1{SiteId{1}, 0.0};
    // Site 1 reads |1> when the qubit is |0>.
    CHECK(outcome_probability(states[3], z1) == doctest::Approx(0.7).epsilon(1e-12));

    const int n = 10000;
    int zeros = 0;
    for (int seed = 0; seed < n; ++seed) {
        const auto m = sample_measurement(states[3], z1, static_cast<std::uint64_t>(seed));
        zeros += m.outcome == 0;
        REQUIRE(std::abs(norm(m.post_state) - 1.0) < 1e-12);
        REQUIRE(branch_decompose(m.post_state).branches.size() == 1);
        const auto rho = reduced_density_matrix(m.post_state, {SiteId{1}});
        REQUIRE(std::abs(rho.matrix(m.outcome, m.outcome) - 1.0) < 1e-12);
    }
    const double sigma = std::sqrt(n * 0.7 * 0.3);
    CHECK(std::abs(zeros - n * 0.7) < 3.0 * sigma);
}

TEST_CASE("measurement edge cases") {
    const ScenarioConfig cfg = scenario_single(kInvSqrt2, kInvSqrt2, 4);
    const auto states = run(cfg, 2);
    // An unbranched up spin always reads 0 and is left alone.
    const auto m = sample_measurement(states[2], {SiteId{4}, 0.0}, 5);
    CHECK(m.outcome == 0);
    CHECK(m.probability == doctest::Approx(1.0));
    CHECK(overlap(m.post_state, states[2]) == doctest::Approx(1.0).epsilon(1e-12));

    // Measuring along X on an X eigenstate is certain.
    const auto x = sample_measurement(states[0], {SiteId{0}, std::numbers::pi / 2}, 1);
    CHECK(x.probability == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(overlap(x.post_state, states[0]) == doctest::Approx(1.0).epsilon(1e-12));

    const auto a = sample_measurement(states[2], {SiteId{1}, 0.4}, 42);
    const auto b = sample_measurement(states[2], {SiteId{1}, 0.4}, 42);
    CHECK(a.outcome == b.outcome);
    CHECK(identical(a.post_state, b.post_state));
}
