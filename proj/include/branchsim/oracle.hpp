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

#include <vector>

#include "branchsim/analysis.hpp"
#include "branchsim/gates.hpp"
#include "branchsim/state.hpp"

// Brute-force reference engine. Nothing here calls the sparse gate or trace
// routines; it exists to catch indexing mistakes in them.
namespace branchsim::oracle {

inline constexpr std::size_t kMaxDenseLatticeSites = 20;

/// Full 2^n amplitude vector; index bit (n-1-p) holds the value of the site at position p.
struct DenseState {
    Lattice lattice;
    std::vector<Amplitude> amplitudes;
};

DenseState densify(const PureState &state);
PureState sparsify(const DenseState &state);

DenseState dense_apply(const DenseState &state, const Gate2 &gate, std::pair<SiteId, SiteId> pair);
DenseState dense_apply(const DenseState &state, const Gate1 &gate, SiteId site);

DensityMatrix dense_rdm(const DenseState &state, const std::vector<SiteId> &keep);

/// Same contract as branch_decompose, computed by index enumeration over the dense vector.
BranchDecomposition dense_branch_decompose(const DenseState &state, double tolerance);

double dense_norm(const DenseState &state);
Amplitude dense_inner_product(const DenseState &a, const DenseState &b);

} // namespace branchsim::oracle
