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

#include "branchsim/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace branchsim::oracle {

namespace {

std::size_t bit_of(const Lattice &lattice, SiteId id) {
    return lattice.size() - 1 - lattice.position(id);
}

} // namespace

DenseState densify(const PureState &state) {
    const std::size_t n = state.lattice().size();
    if (n > kMaxDenseLatticeSites) {
        throw std::invalid_argument("lattice of " + std::to_string(n) +
                                    " sites is too large for the dense engine");
    }
    DenseState out{state.lattice(), std::vector<Amplitude>(std::size_t{1} << n)};
    for (const auto &[key, amp] : state.terms()) {
        std::size_t index = 0;
        for (std::size_t p = 0; p < n; ++p) {
            index = index * 2 + (key.get(p) ? 1 : 0);
        }
        out.amplitudes[index] = amp;
    }
    return out;
}

PureState sparsify(const DenseState &state) {
    const std::size_t n = state.lattice.size();
    PureState::TermMap terms;
    for (std::size_t index = 0; index < state.amplitudes.size(); ++index) {
        if (state.amplitudes[index] == Amplitude{}) {
            continue;
        }
        BasisString key(n);
        for (std::size_t p = 0; p < n; ++p) {
            key.set(p, (index >> (n - 1 - p)) & 1U);
        }
        terms.emplace_hint(terms.end(), std::move(key), state.amplitudes[index]);
    }
    return PureState(state.lattice, std::move(terms));
}

DenseState dense_apply(const DenseState &state, const Gate2 &gate, std::pair<SiteId, SiteId> pair) {
    const std::size_t bl = bit_of(state.lattice, pair.first);
    const std::size_t br = bit_of(state.lattice, pair.second);
    if (bl == br) {
        throw std::invalid_argument("two-site gate applied to a single site");
    }
    const std::size_t ml = std::size_t{1} << bl;
    const std::size_t mr = std::size_t{1} << br;

    DenseState out{state.lattice, state.amplitudes};
    // Visit each group of four indices once, via its member with both target bits clear.
    for (std::size_t base = 0; base < state.amplitudes.size(); ++base) {
        if (base & (ml | mr)) {
            continue;
        }
        const std::array<std::size_t, 4> idx{base, base | mr, base | ml, base | ml | mr};
        for (int row = 0; row < 4; ++row) {
            Amplitude acc{};
            for (int col = 0; col < 4; ++col) {
                acc += gate.matrix(row, col) * state.amplitudes[idx[col]];
            }
            out.amplitudes[idx[row]] = acc;
        }
    }
    return out;
}

DenseState dense_apply(const DenseState &state, const Gate1 &gate, SiteId site) {
    const std::size_t m = std::size_t{1} << bit_of(state.lattice, site);
    DenseState out{state.lattice, state.amplitudes};
    for (std::size_t base = 0; base < state.amplitudes.size(); ++base) {
        if (base & m) {
            continue;
        }
        const Amplitude a0 = state.amplitudes[base];
        const Amplitude a1 = state.amplitudes[base | m];
        out.amplitudes[base] = gate.matrix(0, 0) * a0 + gate.matrix(0, 1) * a1;
        out.amplitudes[base | m] = gate.matrix(1, 0) * a0 + gate.matrix(1, 1) * a1;
    }
    return out;
}

DensityMatrix dense_rdm(const DenseState &state, const std::vector<SiteId> &keep) {
    const std::size_t n = state.lattice.size();
    std::vector<std::size_t> kept_bits;
    std::size_t kept_mask = 0;
    for (SiteId id : keep) {
        const std::size_t b = bit_of(state.lattice, id);
        if (kept_mask & (std::size_t{1} << b)) {
            throw std::invalid_argument("site listed twice in subsystem");
        }
        kept_bits.push_back(b);
        kept_mask |= std::size_t{1} << b;
    }
    const std::size_t k = kept_bits.size();
    const std::size_t dim = std::size_t{1} << k;
    const std::size_t env_count = std::size_t{1} << (n - k);

    // Enumerate environment configurations by scattering a counter into the non-kept bits.
    std::vector<std::size_t> env_bits;
    for (std::size_t b = 0; b < n; ++b) {
        if (!(kept_mask & (std::size_t{1} << b))) {
            env_bits.push_back(b);
        }
    }
    auto full_index = [&](std::size_t env, std::size_t local) {
        std::size_t idx = 0;
        for (std::size_t e = 0; e < env_bits.size(); ++e) {
            if ((env >> e) & 1U) {
                idx |= std::size_t{1} << env_bits[e];
            }
        }
        for (std::size_t j = 0; j < k; ++j) {
            if ((local >> (k - 1 - j)) & 1U) {
                idx |= std::size_t{1} << kept_bits[j];
            }
        }
        return idx;
    };

    DensityMatrix rho{keep, Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                   static_cast<Eigen::Index>(dim))};
    for (std::size_t env = 0; env < env_count; ++env) {
        for (std::size_t i = 0; i < dim; ++i) {
            const Amplitude ai = state.amplitudes[full_index(env, i)];
            if (ai == Amplitude{}) {
                continue;
            }
            for (std::size_t j = 0; j < dim; ++j) {
                rho.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
                    ai * std::conj(state.amplitudes[full_index(env, j)]);
            }
        }
    }
    return rho;
}

BranchDecomposition dense_branch_decompose(const DenseState &state, double tolerance) {
    const Lattice &lattice = state.lattice;
    const std::size_t n = lattice.size();
    BranchDecomposition out;
    std::vector<std::size_t> support_pos;
    for (std::size_t p = 0; p < n; ++p) {
        const SiteId id = lattice[p].id;
        const Eigen::MatrixXcd m = dense_rdm(state, {id}).matrix;
        const double pur = std::norm(m(0, 0)) + std::norm(m(1, 1)) + 2.0 * std::norm(m(0, 1));
        if (std::abs(1.0 - pur) <= tolerance) {
            out.unbranched.insert(id);
        } else {
            out.support.insert(id);
            support_pos.push_back(p);
        }
    }
    std::map<std::map<SiteId, int>, double> grouped;
    double total = 0.0;
    for (std::size_t index = 0; index < state.amplitudes.size(); ++index) {
        const double w = std::norm(state.amplitudes[index]);
        if (w <= tolerance) {
            continue;
        }
        std::map<SiteId, int> assignment;
        for (std::size_t p : support_pos) {
            assignment[lattice[p].id] = static_cast<int>((index >> (n - 1 - p)) & 1U);
        }
        grouped[assignment] += w;
        total += w;
    }
    for (const auto &[assignment, w] : grouped) {
        out.branches.push_back({w / total, assignment});
    }
    return out;
}

double dense_norm(const DenseState &state) {
    double total = 0.0;
    for (const auto &a : state.amplitudes) {
        total += std::norm(a);
    }
    return total;
}

Amplitude dense_inner_product(const DenseState &a, const DenseState &b) {
    if (a.amplitudes.size() != b.amplitudes.size()) {
        throw std::invalid_argument("dense states have different dimensions");
    }
    Amplitude sum{};
    for (std::size_t i = 0; i < a.amplitudes.size(); ++i) {
        sum += std::conj(a.amplitudes[i]) * b.amplitudes[i];
    }
    return sum;
}

} // namespace branchsim::oracle
