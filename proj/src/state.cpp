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

#include "branchsim/state.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace branchsim {

PureState::PureState(Lattice lattice, TermMap terms) : lattice_(std::move(lattice)) {
    for (auto &[key, amp] : terms) {
        if (key.size() != lattice_.size()) {
            throw std::invalid_argument("basis string '" + key.to_string() +
                                        "' does not match lattice size " +
                                        std::to_string(lattice_.size()));
        }
        if (std::abs(amp) >= kPruneThreshold) {
            terms_.emplace_hint(terms_.end(), key, amp);
        }
    }
}

Amplitude PureState::amplitude(const BasisString &basis) const {
    auto it = terms_.find(basis);
    return it == terms_.end() ? Amplitude{} : it->second;
}

PureState PureState::scaled(Amplitude factor) const {
    TermMap out;
    for (const auto &[key, amp] : terms_) {
        out.emplace_hint(out.end(), key, amp * factor);
    }
    return PureState(lattice_, std::move(out));
}

PureState new_product_state(const Lattice &lattice,
                            const std::map<SiteId, SingleSiteState> &site_states) {
    for (const auto &[id, _] : site_states) {
        if (!lattice.contains(id)) {
            throw std::invalid_argument("state given for site " + std::to_string(id.index) +
                                        " which is not in the lattice");
        }
    }

    PureState::TermMap terms{{BasisString(lattice.size()), Amplitude{1.0}}};
    for (std::size_t pos = 0; pos < lattice.size(); ++pos) {
        const SiteId id = lattice[pos].id;
        auto it = site_states.find(id);
        if (it == site_states.end()) {
            throw std::invalid_argument("no state assigned to site " + std::to_string(id.index));
        }
        const SingleSiteState &v = it->second;
        const double n = std::norm(v[0]) + std::norm(v[1]);
        if (std::abs(n - 1.0) > kNormTolerance) {
            throw std::invalid_argument("state at site " + std::to_string(id.index) +
                                        " is not normalized");
        }

        PureState::TermMap next;
        for (const auto &[key, amp] : terms) {
            for (int bit = 0; bit < 2; ++bit) {
                if (v[bit] == Amplitude{}) {
                    continue;
                }
                BasisString k = key;
                k.set(pos, bit == 1);
                next.emplace(std::move(k), amp * v[bit]);
            }
        }
        terms = std::move(next);
    }
    return PureState(lattice, std::move(terms));
}

PureState new_entangled_state(const Lattice &lattice,
                              const std::vector<std::pair<BasisString, Amplitude>> &terms) {
    if (terms.empty()) {
        throw std::invalid_argument("entangled state needs at least one term");
    }
    PureState::TermMap map;
    double total = 0.0;
    for (const auto &[key, amp] : terms) {
        if (key.size() != lattice.size()) {
            throw std::invalid_argument("basis string '" + key.to_string() +
                                        "' does not match lattice size");
        }
        if (!map.emplace(key, amp).second) {
            throw std::invalid_argument("duplicate basis string '" + key.to_string() + "'");
        }
        total += std::norm(amp);
    }
    if (total <= 0.0) {
        throw std::invalid_argument("entangled state has zero norm");
    }
    const double scale = 1.0 / std::sqrt(total);
    for (auto &[_, amp] : map) {
        amp *= scale;
    }
    return PureState(lattice, std::move(map));
}

double norm(const PureState &state) {
    double total = 0.0;
    for (const auto &[_, amp] : state.terms()) {
        total += std::norm(amp);
    }
    return total;
}

Amplitude inner_product(const PureState &a, const PureState &b) {
    if (!(a.lattice() == b.lattice())) {
        throw std::invalid_argument("inner product of states on different lattices");
    }
    // Merge-walk the two sorted supports.
    Amplitude sum{};
    auto ia = a.terms().begin();
    auto ib = b.terms().begin();
    while (ia != a.terms().end() && ib != b.terms().end()) {
        if (ia->first < ib->first) {
            ++ia;
        } else if (ib->first < ia->first) {
            ++ib;
        } else {
            sum += std::conj(ia->second) * ib->second;
            ++ia;
            ++ib;
        }
    }
    return sum;
}

BasisString basis(const Lattice &lattice, std::string_view digits) {
    if (digits.size() != lattice.size()) {
        throw std::invalid_argument("basis string '" + std::string(digits) + "' has length " +
                                    std::to_string(digits.size()) + ", lattice has " +
                                    std::to_string(lattice.size()) + " sites");
    }
    return BasisString::from_string(digits);
}

nlohmann::json lattice_to_json(const Lattice &lattice) {
    nlohmann::json sites = nlohmann::json::array();
    for (const auto &s : lattice.sites()) {
        sites.push_back({{"index", s.id.index}, {"kind", std::string(to_string(s.kind))}});
    }
    return sites;
}

Lattice lattice_from_json(const nlohmann::json &doc) {
    std::vector<Site> sites;
    for (const auto &entry : doc) {
        sites.push_back({SiteId{entry.at("index").get<int>()},
                         site_kind_from_string(entry.at("kind").get<std::string>())});
    }
    return Lattice(std::move(sites));
}

nlohmann::json state_to_json(const PureState &state) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto &[key, amp] : state.terms()) {
        terms.push_back({key.to_string(), amp.real(), amp.imag()});
    }
    return {{"lattice", lattice_to_json(state.lattice())}, {"terms", std::move(terms)}};
}

PureState state_from_json(const nlohmann::json &doc) {
    Lattice lattice = lattice_from_json(doc.at("lattice"));
    PureState::TermMap terms;
    for (const auto &t : doc.at("terms")) {
        BasisString key = basis(lattice, t.at(0).get<std::string>());
        if (!terms.emplace(std::move(key), Amplitude{t.at(1).get<double>(), t.at(2).get<double>()})
                 .second) {
            throw std::invalid_argument("duplicate basis string in serialized state");
        }
    }
    return PureState(std::move(lattice), std::move(terms));
}

} // namespace branchsim
