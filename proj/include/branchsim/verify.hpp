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

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "branchsim/oracle.hpp"
#include "branchsim/schedule.hpp"

namespace branchsim {

/// Haar-distributed 4x4 unitary (QR of a complex Gaussian matrix with phase fix).
Gate2 random_gate2(std::mt19937_64 &rng);
/// Normalized state with i.i.d. complex Gaussian amplitudes on every basis string.
PureState random_state(const Lattice &lattice, std::mt19937_64 &rng);

/**
 * Compares a sparse state against its dense counterpart: overlap, every
 * single-site and nearest-neighbour reduced matrix, their entropies, and the
 * branch decomposition. Returns a description of the first mismatch.
 */
std::optional<std::string> compare_engines(const PureState &sparse,
                                           const oracle::DenseState &dense, double tolerance);

struct VerifyOptions {
    double tolerance = 1e-10;
    int random_sequences = 200;
    std::uint64_t seed = 20240611;
    /// Test hook: perturb one entry of U_copy before the checks run.
    bool inject_fault = false;
};

struct CheckResult {
    std::string key; // check family, e.g. "single-chain", "oracle/epr"
    std::string what;
    bool passed = false;
    std::string detail;
};

std::vector<CheckResult> run_verification(const VerifyOptions &options);

} // namespace branchsim
