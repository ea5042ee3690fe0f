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

#include "branchsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

namespace branchsim {

namespace {

std::vector<std::size_t> kept_positions(const Lattice &lattice, const std::vector<SiteId> &keep) {
    if (keep.empty()) {
        throw std::invalid_argument("reduced density matrix needs at least one site");
    }
    if (keep.size() > kMaxDenseSites) {
        throw std::invalid_argument("subsystem of " + std::to_string(keep.size()) +
                                    " sites exceeds the dense limit of " +
                                    std::to_string(kMaxDenseSites));
    }
    std::vector<std::size_t> pos;
    for (SiteId id : keep) {
        if (!lattice.contains(id)) {
            throw std::invalid_argument("site " + std::to_string(id.index) +
                                        " is not in the lattice");
        }
        pos.push_back(lattice.position(id));
    }
    auto sorted = pos;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("site listed twice in subsystem");
    }
    return pos;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

std::vector<SiteId> concat(const std::vector<SiteId> &a, const std::vector<SiteId> &b) {
    std::vector<SiteId> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

std::vector<Branch> merge_branches(std::map<std::map<SiteId, int>, double> grouped) {
    std::vector<Branch> out;
    double total = 0.0;
    for (const auto &[assignment, w] : grouped) {
        total += w;
    }
    for (auto &[assignment, w] : grouped) {
        out.push_back({w / total, assignment});
    }
    return out;
}

} // namespace

Eigen::VectorXd DensityMatrix::eigenvalues() const {
    const Eigen::MatrixXcd herm = 0.5 * (matrix + matrix.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

void DensityMatrix::check_invariants(double tol) const {
    if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > tol) {
        throw std::logic_error("density matrix is not Hermitian");
    }
    if (std::abs(trace() - 1.0) > tol) {
        throw std::logic_error("density matrix trace is not 1");
    }
    if (eigenvalues().minCoeff() < -1e-10) {
        throw std::logic_error("density matrix has a negative eigenvalue");
    }
}

DensityMatrix reduced_density_matrix(const PureState &state, const std::vector<SiteId> &keep) {
    const std::vector<std::size_t> pos = kept_positions(state.lattice(), keep);
    const std::size_t k = pos.size();
    const Eigen::Index dim = Eigen::Index{1} << k;

    // Terms that agree on every traced-out site interfere; bucket them by that remainder.
    std::map<BasisString, std::vector<std::pair<Eigen::Index, Amplitude>>> buckets;
    for (const auto &[key, amp] : state.terms()) {
        BasisString env = key;
        Eigen::Index local = 0;
        for (std::size_t j = 0; j < k; ++j) {
            local = (local << 1) | static_cast<Eigen::Index>(key.get(pos[j]));
            env.set(pos[j], false);
        }
        buckets[env].emplace_back(local, amp);
    }

    DensityMatrix rho{keep, Eigen::MatrixXcd::Zero(dim, dim)};
    for (const auto &[_, entries] : buckets) {
        for (const auto &[i, ai] : entries) {
            for (const auto &[j, aj] : entries) {
                rho.matrix(i, j) += ai * std::conj(aj);
            }
        }
    }
    return rho;
}

DensityMatrix change_basis(const DensityMatrix &rho,
                           const std::map<SiteId, Gate1> &per_site_rotations) {
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(1, 1);
    for (SiteId id : rho.sites) {
        auto it = per_site_rotations.find(id);
        if (it == per_site_rotations.end()) {
            throw std::invalid_argument("no basis rotation given for site " +
                                        std::to_string(id.index));
        }
        u = kron(u, it->second.matrix);
    }
    return {rho.sites, u.adjoint() * rho.matrix * u};
}

double coherence(const DensityMatrix &rho) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < rho.matrix.rows(); ++i) {
        for (Eigen::Index j = 0; j < rho.matrix.cols(); ++j) {
            if (i != j) {
                total += std::abs(rho.matrix(i, j));
            }
        }
    }
    return total;
}

double purity(const DensityMatrix &rho) { return (rho.matrix * rho.matrix).trace().real(); }

double von_neumann_entropy(const DensityMatrix &rho) {
    // Eigenvalues within rounding of 0 or 1 contribute nothing.
    double s = 0.0;
    for (double lambda : rho.eigenvalues()) {
        if (lambda > kPruneThreshold && lambda < 1.0 - kPruneThreshold) {
            s -= lambda * std::log(lambda);
        }
    }
    return s;
}

bool is_decohered(const PureState &state, SiteId site, double tolerance) {
    if (tolerance < 0.0) {
        throw std::invalid_argument("tolerance must be non-negative");
    }
    const DensityMatrix rho = reduced_density_matrix(state, {site});
    return coherence(rho) <= tolerance && purity(rho) < 1.0 - tolerance;
}

double entanglement_entropy(const PureState &state, const std::vector<SiteId> &region) {
    return von_neumann_entropy(reduced_density_matrix(state, region));
}

double mutual_information(const PureState &state, const std::vector<SiteId> &a,
                          const std::vector<SiteId> &b) {
    if (a.empty() || b.empty()) {
        throw std::invalid_argument("mutual information needs two nonempty regions");
    }
    for (SiteId x : a) {
        if (std::find(b.begin(), b.end(), x) != b.end()) {
            throw std::invalid_argument("mutual information regions overlap at site " +
                                        std::to_string(x.index));
        }
    }
    const auto ab = concat(a, b);
    return entanglement_entropy(state, a) + entanglement_entropy(state, b) -
           entanglement_entropy(state, ab);
}

BranchDecomposition branch_decompose(const PureState &state, double tolerance) {
    if (!(tolerance > 0.0 && tolerance < 1.0)) {
        throw std::invalid_argument("branch tolerance must lie in (0, 1)");
    }
    const Lattice &lattice = state.lattice();
    BranchDecomposition out;
    std::vector<std::size_t> support_pos;
    for (std::size_t p = 0; p < lattice.size(); ++p) {
        const SiteId id = lattice[p].id;
        if (std::abs(1.0 - purity(reduced_density_matrix(state, {id}))) <= tolerance) {
            out.unbranched.insert(id);
        } else {
            out.support.insert(id);
            support_pos.push_back(p);
        }
    }

    std::map<std::map<SiteId, int>, double> grouped;
    for (const auto &[key, amp] : state.terms()) {
        const double w = std::norm(amp);
        if (w <= tolerance) {
            continue;
        }
        std::map<SiteId, int> assignment;
        for (std::size_t p : support_pos) {
            assignment[lattice[p].id] = key.get(p) ? 1 : 0;
        }
        grouped[assignment] += w;
    }
    out.branches = merge_branches(std::move(grouped));
    return out;
}

BranchClusters extended_branch_clusters(const PureState &state, double tolerance) {
    const BranchDecomposition decomposition = branch_decompose(state, tolerance);
    const std::vector<SiteId> sites(decomposition.support.begin(), decomposition.support.end());

    std::vector<std::size_t> parent(sites.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (std::size_t i = 0; i < sites.size(); ++i) {
        for (std::size_t j = i + 1; j < sites.size(); ++j) {
            if (find(i) == find(j)) {
                continue;
            }
            if (mutual_information(state, {sites[i]}, {sites[j]}) > tolerance) {
                parent[find(i)] = find(j);
            }
        }
    }

    std::map<std::size_t, std::set<SiteId>> components;
    for (std::size_t i = 0; i < sites.size(); ++i) {
        components[find(i)].insert(sites[i]);
    }

    BranchClusters out;
    for (auto &[_, members] : components) {
        std::map<std::map<SiteId, int>, double> grouped;
        for (const auto &branch : decomposition.branches) {
            std::map<SiteId, int> marginal;
            for (SiteId s : members) {
                marginal[s] = branch.assignment.at(s);
            }
            grouped[marginal] += branch.weight;
        }
        out.clusters.push_back({std::move(members), merge_branches(std::move(grouped))});
    }
    std::sort(out.clusters.begin(), out.clusters.end(),
              [](const BranchCluster &x, const BranchCluster &y) {
                  return *x.sites.begin() < *y.sites.begin();
              });
    return out;
}

CorrelationTensor::CorrelationTensor(const PureState &state, SiteId site_a, SiteId site_b) {
    if (site_a == site_b) {
        throw std::invalid_argument("correlation needs two distinct sites");
    }
    const DensityMatrix rho = reduced_density_matrix(state, {site_a, site_b});
    Eigen::Matrix2cd z;
    z << 1, 0, 0, -1;
    Eigen::Matrix2cd x;
    x << 0, 1, 1, 0;
    const std::array<Eigen::Matrix2cd, 2> paulis{z, x};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            t_(i, j) = (rho.matrix * kron(paulis[i], paulis[j])).trace().real();
        }
    }
}

double CorrelationTensor::operator()(double theta_a, double theta_b) const {
    const Eigen::Vector2d na(std::cos(theta_a), std::sin(theta_a));
    const Eigen::Vector2d nb(std::cos(theta_b), std::sin(theta_b));
    return na.dot(t_ * nb);
}

double CorrelationTensor::chsh(const ChshSettings &s) const {
    const CorrelationTensor &e = *this;
    return std::abs(e(s.a, s.b) - e(s.a, s.b_prime) + e(s.a_prime, s.b) +
                    e(s.a_prime, s.b_prime));
}

double correlation(const PureState &state, const MeasurementSetting &s1,
                   const MeasurementSetting &s2) {
    return CorrelationTensor(state, s1.site, s2.site)(s1.theta, s2.theta);
}

double chsh(const PureState &state, SiteId site_a, SiteId site_b, const ChshSettings &settings) {
    return CorrelationTensor(state, site_a, site_b).chsh(settings);
}

ChshScanResult chsh_scan(const PureState &state, SiteId site_a, SiteId site_b,
                         double resolution_deg, bool keep_rows) {
    if (!(resolution_deg > 0.0 && resolution_deg <= 90.0)) {
        throw std::invalid_argument("CHSH scan resolution must lie in (0, 90] degrees");
    }
    const CorrelationTensor e(state, site_a, site_b);
    const auto n = static_cast<std::size_t>(std::floor(360.0 / resolution_deg + 1e-9));
    const double step = resolution_deg * std::numbers::pi / 180.0;
    std::vector<double> angle(n);
    for (std::size_t k = 0; k < n; ++k) {
        angle[k] = static_cast<double>(k) * step;
    }
    std::vector<double> table(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            table[i * n + j] = e(angle[i], angle[j]);
        }
    }

    ChshScanResult result;
    result.resolution_deg = resolution_deg;
    result.grid_max = -1.0;
    // For fixed (a, a') the b and b' maximizations decouple:
    // S = [E(a,b) + E(a',b)] + [E(a',b') - E(a,b')].
    for (std::size_t i = 0; i < n; ++i) {
        const double *row_a = &table[i * n];
        for (std::size_t ip = 0; ip < n; ++ip) {
            const double *row_ap = &table[ip * n];
            double sum_max = -1e300, sum_min = 1e300, diff_max = -1e300, diff_min = 1e300;
            std::size_t sum_arg_max = 0, sum_arg_min = 0, diff_arg_max = 0, diff_arg_min = 0;
            for (std::size_t j = 0; j < n; ++j) {
                const double sum = row_a[j] + row_ap[j];
                const double diff = row_ap[j] - row_a[j];
                if (sum > sum_max) { sum_max = sum; sum_arg_max = j; }
                if (sum < sum_min) { sum_min = sum; sum_arg_min = j; }
                if (diff > diff_max) { diff_max = diff; diff_arg_max = j; }
                if (diff < diff_min) { diff_min = diff; diff_arg_min = j; }
            }
            ChshScanRow row{angle[i], angle[ip], 0.0, 0.0, 0.0};
            if (sum_max + diff_max >= -(sum_min + diff_min)) {
                row.value = sum_max + diff_max;
                row.best_b = angle[sum_arg_max];
                row.best_b_prime = angle[diff_arg_max];
            } else {
                row.value = -(sum_min + diff_min);
                row.best_b = angle[sum_arg_min];
                row.best_b_prime = angle[diff_arg_min];
            }
            if (row.value > result.grid_max) {
                result.grid_max = row.value;
                result.grid_best = {row.a, row.a_prime, row.best_b, row.best_b_prime};
            }
            if (keep_rows) {
                result.rows.push_back(row);
            }
        }
    }

    // Compass search from the best grid point.
    std::array<double, 4> x{result.grid_best.a, result.grid_best.a_prime, result.grid_best.b,
                            result.grid_best.b_prime};
    auto objective = [&](const std::array<double, 4> &v) {
        return e.chsh({v[0], v[1], v[2], v[3]});
    };
    double best = objective(x);
    for (double h = step / 2.0; h > 1e-12; h /= 2.0) {
        bool improved = true;
        while (improved) {
            improved = false;
            for (int d = 0; d < 4; ++d) {
                for (double sign : {1.0, -1.0}) {
                    auto trial = x;
                    trial[d] += sign * h;
                    const double v = objective(trial);
                    if (v > best + 1e-15) {
                        best = v;
                        x = trial;
                        improved = true;
                    }
                }
            }
        }
    }
    result.refined_best = {x[0], x[1], x[2], x[3]};
    result.refined_max = best;
    return result;
}

double outcome_probability(const PureState &state, const MeasurementSetting &setting) {
    const PureState rotated = apply_gate1(state, rotation_gate(setting.theta), setting.site);
    const std::size_t pos = rotated.lattice().position(setting.site);
    double p0 = 0.0;
    for (const auto &[key, amp] : rotated.terms()) {
        if (!key.get(pos)) {
            p0 += std::norm(amp);
        }
    }
    return p0 / norm(rotated);
}

MeasurementOutcome sample_measurement(const PureState &state, const MeasurementSetting &setting,
                                      std::uint64_t seed) {
    const Gate1 rot = rotation_gate(setting.theta);
    const PureState rotated = apply_gate1(state, rot, setting.site);
    const std::size_t pos = rotated.lattice().position(setting.site);
    const double total = norm(rotated);
    double p0 = 0.0;
    for (const auto &[key, amp] : rotated.terms()) {
        if (!key.get(pos)) {
            p0 += std::norm(amp);
        }
    }
    p0 /= total;

    std::mt19937_64 rng(seed);
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const int outcome = u < p0 ? 0 : 1;
    const double p = outcome == 0 ? p0 : 1.0 - p0;

    PureState::TermMap kept;
    const double scale = 1.0 / std::sqrt(p * total);
    for (const auto &[key, amp] : rotated.terms()) {
        if (static_cast<int>(key.get(pos)) == outcome) {
            kept.emplace_hint(kept.end(), key, amp * scale);
        }
    }
    const Gate1 undo{"rot^-1", rot.matrix.adjoint()};
    PureState post = apply_gate1(PureState(rotated.lattice(), std::move(kept)), undo, setting.site);
    return {outcome, p, std::move(post)};
}

} // namespace branchsim
