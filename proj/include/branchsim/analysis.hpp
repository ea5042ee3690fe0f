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

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "branchsim/gates.hpp"
#include "branchsim/state.hpp"

namespace branchsim {

/// Upper bound on the number of sites kept in a dense reduced matrix.
inline constexpr std::size_t kMaxDenseSites = 12;

/// Default tolerance for decoherence, branch, and cluster decisions.
inline constexpr double kDefaultTolerance = 1e-9;

/**
 * Reduced state of a few sites. Row/column index bits follow the order of
 * `sites`, first site most significant.
 */
struct DensityMatrix {
    std::vector<SiteId> sites;
    Eigen::MatrixXcd matrix;

    double trace() const { return matrix.trace().real(); }
    /// Ascending eigenvalues of the Hermitian part.
    Eigen::VectorXd eigenvalues() const;
    /// Throws std::logic_error if not Hermitian, unit-trace, and positive within tolerance.
    void check_invariants(double tol = 1e-12) const;
};

DensityMatrix reduced_density_matrix(const PureState &state, const std::vector<SiteId> &keep);

/// Re-expresses rho in the basis given by the columns of each site's unitary: (xU)^dag rho (xU).
DensityMatrix change_basis(const DensityMatrix &rho,
                           const std::map<SiteId, Gate1> &per_site_rotations);

/// Sum of moduli of the off-diagonal entries in the matrix's current basis.
double coherence(const DensityMatrix &rho);
double purity(const DensityMatrix &rho);
/// von Neumann entropy in nats, with 0 ln 0 = 0.
double von_neumann_entropy(const DensityMatrix &rho);

/// Single-site reduced state is diagonal in the pointer basis and mixed.
bool is_decohered(const PureState &state, SiteId site, double tolerance = kDefaultTolerance);

double entanglement_entropy(const PureState &state, const std::vector<SiteId> &region);

/// S(a) + S(b) - S(ab) in nats.
double mutual_information(const PureState &state, const std::vector<SiteId> &a,
                          const std::vector<SiteId> &b);

struct Branch {
    double weight = 0.0;
    /// Pointer-basis value of each supported site.
    std::map<SiteId, int> assignment;
};

struct BranchDecomposition {
    std::string basis = "Z";
    std::vector<Branch> branches;
    /// Sites carrying branch structure (mixed single-site reduced state).
    std::set<SiteId> support;
    /// Sites whose reduced state is pure; they factor out of every branch.
    std::set<SiteId> unbranched;
};

BranchDecomposition branch_decompose(const PureState &state, double tolerance = kDefaultTolerance);

struct BranchCluster {
    std::set<SiteId> sites;
    std::vector<Branch> branches;
};

struct BranchClusters {
    std::vector<BranchCluster> clusters;
};

/**
 * Groups branched sites into extended branches: sites are linked when their
 * pairwise mutual information exceeds `tolerance`, and each connected
 * component carries the global branches marginalized onto it.
 */
BranchClusters extended_branch_clusters(const PureState &state,
                                        double tolerance = kDefaultTolerance);

/// Measurement of cos(theta) Z + sin(theta) X on one site.
struct MeasurementSetting {
    SiteId site;
    double theta = 0.0;
};

/// Expectation of the product observable on two distinct sites.
double correlation(const PureState &state, const MeasurementSetting &s1,
                   const MeasurementSetting &s2);

struct ChshSettings {
    double a = 0.0;
    double a_prime = 0.0;
    double b = 0.0;
    double b_prime = 0.0;
};

/// |E(a,b) - E(a,b') + E(a',b) + E(a',b')|.
double chsh(const PureState &state, SiteId site_a, SiteId site_b, const ChshSettings &settings);

/**
 * Two-site correlator E(theta_a, theta_b) = n(theta_a)^T T n(theta_b) with
 * n = (cos, sin) over (Z, X). Built once from the two-site reduced state so
 * that angle scans do not touch the full state.
 */
class CorrelationTensor {
  public:
    CorrelationTensor(const PureState &state, SiteId site_a, SiteId site_b);
    double operator()(double theta_a, double theta_b) const;
    double chsh(const ChshSettings &s) const;
    const Eigen::Matrix2d &matrix() const { return t_; }

  private:
    Eigen::Matrix2d t_;
};

struct ChshScanRow {
    double a = 0.0;
    double a_prime = 0.0;
    double best_b = 0.0;
    double best_b_prime = 0.0;
    double value = 0.0;
};

struct ChshScanResult {
    double resolution_deg = 1.0;
    std::vector<ChshScanRow> rows;   // one per (a, a') grid pair
    ChshSettings grid_best;
    double grid_max = 0.0;
    ChshSettings refined_best;
    double refined_max = 0.0;
};

/// Exhaustive grid maximum over all four angles followed by local refinement.
ChshScanResult chsh_scan(const PureState &state, SiteId site_a, SiteId site_b,
                         double resolution_deg, bool keep_rows = false);

struct MeasurementOutcome {
    int outcome = 0;
    double probability = 0.0;
    PureState post_state;
};

/// Born-rule projective measurement; the post-state is expressed in the original basis.
MeasurementOutcome sample_measurement(const PureState &state, const MeasurementSetting &setting,
                                      std::uint64_t seed);

/// Probability of outcome 0 for the given setting.
double outcome_probability(const PureState &state, const MeasurementSetting &setting);

} // namespace branchsim
