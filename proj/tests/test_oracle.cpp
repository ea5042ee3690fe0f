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

#include <random>

#include "branchsim/oracle.hpp"
#include "branchsim/verify.hpp"
#include "test_support.hpp"

using namespace branchsim;
using namespace branchsim::oracle;
using namespace branchsim::testing;

TEST_CASE("densify places amplitudes by lattice position") {
    const Lattice l = Lattice::with_systems(0, 2, {0});
    const PureState psi = superposition(l, {"100", "001"});
    const DenseState d = densify(psi);
    REQUIRE(d.amplitudes.size() == 8);
    CHECK(std::abs(d.amplitudes[4] - kInvSqrt2) < 1e-15);
    CHECK(std::abs(d.amplitudes[1] - kInvSqrt2) < 1e-15);
    CHECK(dense_norm(d) == doctest::Approx(1.0));
    CHECK(identical(sparsify(d), psi));
}

TEST_CASE("densify refuses lattices beyond the dense cap") {
    const ScenarioConfig big = scenario_single(1.0, 0.0, 20);
    CHECK_THROWS_AS(densify(big.initial), std::invalid_argument);
    const ScenarioConfig ok = scenario_single(1.0, 0.0, 19);
    CHECK(densify(ok.initial).amplitudes.size() == (std::size_t{1} << 20));
}

TEST_CASE("dense and sparse single applications agree on random input") {
    std::mt19937_64 rng(1001);
    std::uniform_int_distribution<int> size(2, 6);
    for (int trial = 0; trial < 10000; ++trial) {
        const int n = size(rng);
        const Lattice l = Lattice::with_systems(1, n, {});
        const PureState psi = random_small_state(l, rng, 0.5);
        std::uniform_int_distribution<int> site(1, n);
        const int a = site(rng);
        int b = site(rng);
        while (b == a) {
            b = site(rng);
        }
        const Gate2 g = random_gate2(rng);
        const PureState sparse = apply_gate2(psi, g, {SiteId{a}, SiteId{b}});
        const DenseState dense = dense_apply(densify(psi), g, {SiteId{a}, SiteId{b}});
        const DenseState as_dense = densify(sparse);
        double worst = 0.0;
        for (std::size_t i = 0; i < dense.amplitudes.size(); ++i) {
            worst = std::max(worst, std::abs(dense.amplitudes[i] - as_dense.amplitudes[i]));
        }
        REQUIRE(worst < 1e-10);
        REQUIRE(std::abs(dense_norm(dense) - 1.0) < 1e-12);
    }
}

TEST_CASE("dense single-site gates agree with sparse ones") {
    std::mt19937_64 rng(5);
    const Lattice l = Lattice::with_systems(0, 4, {0});
    for (int trial = 0; trial < 200; ++trial) {
        const PureState psi = random_small_state(l, rng, 0.5);
        const SiteId s{trial % 5};
        const Gate1 r = rotation_gate(0.1 * trial);
        const PureState sparse = apply_gate1(psi, r, s);
        const DenseState dense = dense_apply(densify(psi), r, s);
        REQUIRE(std::abs(dense_inner_product(densify(sparse), dense) - 1.0) < 1e-12);
    }
}

TEST_CASE("dense engine reproduces the chain step by step") {
    const ScenarioConfig cfg = scenario_single(kInvSqrt2, kInvSqrt2, 4);
    const auto sparse = run(cfg, cfg.horizon);
    DenseState dense = densify(cfg.initial);
    for (int t = 0; t <= cfg.horizon; ++t) {
        REQUIRE_FALSE(compare_engines(sparse[t], dense, 1e-12).has_value());
        for (const auto &a : cfg.schedule.step(t)) {
            dense = dense_apply(dense, std::get<Gate2>(a.gate), {a.first, *a.second});
        }
    }
}

TEST_CASE("dense reduced matrices match sparse ones") {
    for (const ScenarioConfig &cfg : {scenario_single(0.6, 0.8, 5), scenario_bidirectional(4),
                                      scenario_collision(), scenario_epr()}) {
        for (const auto &psi : run(cfg, cfg.horizon)) {
            const DenseState d = densify(psi);
            const auto &sites = psi.lattice().sites();
            for (std::size_t i = 0; i < sites.size(); ++i) {
                for (std::size_t j = 0; j < sites.size(); ++j) {
                    if (i == j) {
                        continue;
                    }
                    const std::vector<SiteId> keep{sites[i].id, sites[j].id};
                    const auto a = reduced_density_matrix(psi, keep);
                    const auto b = dense_rdm(d, keep);
                    REQUIRE((a.matrix - b.matrix).cwiseAbs().maxCoeff() < 1e-12);
                    REQUIRE(b.trace() == doctest::Approx(1.0).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("dense reduced matrix of the first chain spin") {
    const ScenarioConfig cfg = scenario_single(kInvSqrt2, kInvSqrt2, 4);
    const auto states = run(cfg, 1);
    const auto rho = dense_rdm(densify(states[1]), {SiteId{1}});
    CHECK(rho.matrix(0, 0).real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(rho.matrix(0, 1)) < 1e-15);
}

TEST_CASE("dense branch decomposition matches sparse") {
    for (const ScenarioConfig &cfg : {scenario_single(0.6, 0.8, 5), scenario_collision(),
                                      scenario_epr()}) {
        for (const auto &psi : run(cfg, cfg.horizon)) {
            const auto a = branch_decompose(psi);
            const auto b = dense_branch_decompose(densify(psi), kDefaultTolerance);
            REQUIRE(a.branches.size() == b.branches.size());
            REQUIRE(a.support == b.support);
            for (std::size_t k = 0; k < a.branches.size(); ++k) {
                REQUIRE(a.branches[k].assignment == b.branches[k].assignment);
                REQUIRE(std::abs(a.branches[k].weight - b.branches[k].weight) < 1e-12);
            }
        }
    }
}
