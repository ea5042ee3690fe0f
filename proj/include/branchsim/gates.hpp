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

#include <string>
#include <utility>

#include <Eigen/Dense>

#include "branchsim/state.hpp"

namespace branchsim {

inline constexpr double kUnitarityTolerance = 1e-12;

/**
 * Two-site unitary. Rows and columns are indexed by 2*left_bit + right_bit,
 * where "left" is the first site of the pair it is applied to.
 */
struct Gate2 {
    std::string name;
    Eigen::Matrix4cd matrix;
};

struct Gate1 {
    std::string name;
    Eigen::Matrix2cd matrix;
};

/// Largest entry of |U^dagger U - I|.
double unitarity_defect(const Eigen::MatrixXcd &u);

/// Builds a named gate after checking unitarity; throws std::invalid_argument otherwise.
Gate2 make_gate2(std::string name, const Eigen::Matrix4cd &matrix);
Gate1 make_gate1(std::string name, const Eigen::Matrix2cd &matrix);

/// System-field coupling: a system in |0> flips the adjacent spin, |1> leaves it alone.
Gate2 gate_system_field();
/// Directional field copy: a down spin on the left flips its right neighbour.
Gate2 gate_field_copy();
/// Left-right symmetric field interaction: exchanges anti-aligned neighbours.
Gate2 gate_field_swap();
Gate2 gate_identity2();

/**
 * Rotation by theta in the Z-X plane. Measuring Z after applying it is the
 * same as measuring cos(theta) Z + sin(theta) X on the unrotated state.
 */
Gate1 rotation_gate(double theta);
/// Maps {|0>,|1>} to {(|0>+|1>)/sqrt2, (|0>-|1>)/sqrt2}.
Gate1 hadamard_gate();
Gate1 gate_identity1();

/**
 * Looks up a library gate by name: "U_si", "U_copy", "U_swap", "I2".
 * Throws std::invalid_argument for unknown names.
 */
Gate2 gate2_by_name(const std::string &name);
/// "rot(<radians>)", "H", "I".
Gate1 gate1_by_name(const std::string &name);

/// Applies `gate` with its left index on pair.first and right index on pair.second.
PureState apply_gate2(const PureState &state, const Gate2 &gate, std::pair<SiteId, SiteId> pair);
PureState apply_gate1(const PureState &state, const Gate1 &gate, SiteId site);

} // namespace branchsim
