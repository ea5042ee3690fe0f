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
#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "branchsim/lattice.hpp"

namespace branchsim {

using Amplitude = std::complex<double>;

/// Two components in the site's own basis: (|0> or up, |1> or down).
using SingleSiteState = std::array<Amplitude, 2>;

/// Amplitudes with modulus below this are treated as floating-point dust and dropped.
inline constexpr double kPruneThreshold = 1e-14;

/// Tolerance used when validating normalization of user-supplied states.
inline constexpr double kNormTolerance = 1e-12;

inline SingleSiteState spin_up() { return {Amplitude{1.0}, Amplitude{0.0}}; }
inline SingleSiteState spin_down() { return {Amplitude{0.0}, Amplitude{1.0}}; }

/**
 * Sparse pure state of the whole lattice: a map from product-basis strings
 * to complex amplitudes. Values are immutable once built; every operation
 * that changes a state returns a new one.
 */
class PureState {
  public:
    using TermMap = std::map<BasisString, Amplitude>;

    PureState() = default;
    /// Takes the terms as given (no renormalization) and prunes dust.
    PureState(Lattice lattice, TermMap terms);

    const Lattice &lattice() const { return lattice_; }
    const TermMap &terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }

    Amplitude amplitude(const BasisString &basis) const;

    /// Multiplies every amplitude by `factor`.
    PureState scaled(Amplitude factor) const;

  private:
    Lattice lattice_;
    TermMap terms_;
};

PureState new_product_state(const Lattice &lattice,
                            const std::map<SiteId, SingleSiteState> &site_states);

PureState new_entangled_state(const Lattice &lattice,
                              const std::vector<std::pair<BasisString, Amplitude>> &terms);

/// Sum of squared moduli.
double norm(const PureState &state);

/// <a|b>. Throws std::invalid_argument when the lattices differ.
Amplitude inner_product(const PureState &a, const PureState &b);

/// Parses a '0'/'1' digit string and checks it against the lattice size.
BasisString basis(const Lattice &lattice, std::string_view digits);

// Structured-text serialization. Doubles are written in shortest round-trip
// form so that reading back reproduces every amplitude bit for bit.
nlohmann::json lattice_to_json(const Lattice &lattice);
Lattice lattice_from_json(const nlohmann::json &doc);
nlohmann::json state_to_json(const PureState &state);
PureState state_from_json(const nlohmann::json &doc);

} // namespace branchsim
