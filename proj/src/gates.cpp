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

#include "branchsim/gates.hpp"

#include <cmath>
#include <regex>
#include <stdexcept>

namespace branchsim {

namespace {

Eigen::Matrix4cd permutation4(const std::array<int, 4> &image) {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    for (int in = 0; in < 4; ++in) {
        m(image[in], in) = 1.0;
    }
    return m;
}

} // namespace

double unitarity_defect(const Eigen::MatrixXcd &u) {
    const Eigen::MatrixXcd d = u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
    return d.cwiseAbs().maxCoeff();
}

Gate2 make_gate2(std::string name, const Eigen::Matrix4cd &matrix) {
    if (!matrix.allFinite() || unitarity_defect(matrix) > kUnitarityTolerance) {
        throw std::invalid_argument("gate '" + name + "' is not unitary");
    }
    return {std::move(name), matrix};
}

Gate1 make_gate1(std::string name, const Eigen::Matrix2cd &matrix) {
    if (!matrix.allFinite() || unitarity_defect(matrix) > kUnitarityTolerance) {
        throw std::invalid_argument("gate '" + name + "' is not unitary");
    }
    return {std::move(name), matrix};
}

// Index 2*left + right; 0 is |0> or up, 1 is |1> or down.
Gate2 gate_system_field() { return {"U_si", permutation4({1, 0, 2, 3})}; }

Gate2 gate_field_copy() { return {"U_copy", permutation4({0, 1, 3, 2})}; }

Gate2 gate_field_swap() { return {"U_swap", permutation4({0, 2, 1, 3})}; }

Gate2 gate_identity2() { return {"I2", Eigen::Matrix4cd::Identity()}; }

Gate1 rotation_gate(double theta) {
    if (!std::isfinite(theta)) {
        throw std::invalid_argument("rotation angle must be finite");
    }
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    Eigen::Matrix2cd m;
    m << c, s, -s, c;
    return {"rot(" + std::to_string(theta) + ")", m};
}

Gate1 hadamard_gate() {
    const double h = 1.0 / std::sqrt(2.0);
    Eigen::Matrix2cd m;
    m << h, h, h, -h;
    return {"H", m};
}

Gate1 gate_identity1() { return {"I", Eigen::Matrix2cd::Identity()}; }

Gate2 gate2_by_name(const std::string &name) {
    if (name == "U_si") {
        return gate_system_field();
    }
    if (name == "U_copy") {
        return gate_field_copy();
    }
    if (name == "U_swap") {
        return gate_field_swap();
    }
    if (name == "I2") {
        return gate_identity2();
    }
    throw std::invalid_argument("unknown two-site gate '" + name + "'");
}

Gate1 gate1_by_name(const std::string &name) {
    if (name == "H") {
        return hadamard_gate();
    }
    if (name == "I") {
        return gate_identity1();
    }
    static const std::regex rot(R"(^rot\(\s*([-+0-9.eE]+)\s*\)$)");
    std::smatch m;
    if (std::regex_match(name, m, rot)) {
        std::size_t used = 0;
        const double theta = std::stod(m[1].str(), &used);
        if (used != static_cast<std::size_t>(m[1].length())) {
            throw std::invalid_argument("bad rotation angle in '" + name + "'");
        }
        Gate1 g = rotation_gate(theta);
        g.name = name;
        return g;
    }
    throw std::invalid_argument("unknown single-site gate '" + name + "'");
}

PureState apply_gate2(const PureState &state, const Gate2 &gate, std::pair<SiteId, SiteId> pair) {
    const Lattice &lattice = state.lattice();
    const std::size_t left = lattice.position(pair.first);
    const std::size_t right = lattice.position(pair.second);
    if (left == right) {
        throw std::invalid_argument("two-site gate applied to a single site");
    }

    PureState::TermMap out;
    for (const auto &[key, amp] : state.terms()) {
        const int in = 2 * static_cast<int>(key.get(left)) + static_cast<int>(key.get(right));
        for (int row = 0; row < 4; ++row) {
            const Amplitude u = gate.matrix(row, in);
            if (u == Amplitude{}) {
                continue;
            }
            BasisString k = key;
            k.set(left, (row >> 1) & 1);
            k.set(right, row & 1);
            out[std::move(k)] += u * amp;
        }
    }
    return PureState(lattice, std::move(out));
}

PureState apply_gate1(const PureState &state, const Gate1 &gate, SiteId site) {
    const Lattice &lattice = state.lattice();
    const std::size_t pos = lattice.position(site);

    PureState::TermMap out;
    for (const auto &[key, amp] : state.terms()) {
        const int in = key.get(pos) ? 1 : 0;
        for (int row = 0; row < 2; ++row) {
            const Amplitude u = gate.matrix(row, in);
            if (u == Amplitude{}) {
                continue;
            }
            BasisString k = key;
            k.set(pos, row == 1);
            out[std::move(k)] += u * amp;
        }
    }
    return PureState(lattice, std::move(out));
}

} // namespace branchsim
