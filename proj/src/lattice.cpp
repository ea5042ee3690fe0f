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

#include "branchsim/lattice.hpp"

#include <algorithm>
#include <stdexcept>

namespace branchsim {

std::string_view to_string(SiteKind kind) {
    return kind == SiteKind::System ? "system" : "field";
}

SiteKind site_kind_from_string(std::string_view name) {
    if (name == "system") {
        return SiteKind::System;
    }
    if (name == "field") {
        return SiteKind::Field;
    }
    throw std::invalid_argument("unknown site kind '" + std::string(name) + "'");
}

Lattice::Lattice(std::vector<Site> sites) : sites_(std::move(sites)) {
    if (sites_.empty()) {
        throw std::invalid_argument("lattice must have at least one site");
    }
    for (std::size_t i = 1; i < sites_.size(); ++i) {
        if (!(sites_[i - 1].id < sites_[i].id)) {
            throw std::invalid_argument("lattice site indices must be strictly increasing");
        }
    }
    // The system qubit owns the origin; no field spin is co-located with it.
    for (const auto &s : sites_) {
        if (s.id.index == 0 && s.kind == SiteKind::Field) {
            throw std::invalid_argument("site 0 is reserved for a system qubit");
        }
    }
}

Lattice Lattice::with_systems(int lo, int hi, const std::vector<int> &system_indices) {
    std::vector<Site> sites;
    for (int i = lo; i <= hi; ++i) {
        const bool is_system =
            std::find(system_indices.begin(), system_indices.end(), i) != system_indices.end();
        sites.push_back({SiteId{i}, is_system ? SiteKind::System : SiteKind::Field});
    }
    return Lattice(std::move(sites));
}

bool Lattice::contains(SiteId id) const {
    return std::binary_search(sites_.begin(), sites_.end(), Site{id, SiteKind::Field},
                              [](const Site &a, const Site &b) { return a.id < b.id; });
}

std::size_t Lattice::position(SiteId id) const {
    auto it = std::lower_bound(sites_.begin(), sites_.end(), id,
                               [](const Site &s, SiteId v) { return s.id < v; });
    if (it == sites_.end() || it->id != id) {
        throw std::out_of_range("site " + std::to_string(id.index) + " is not in the lattice");
    }
    return static_cast<std::size_t>(it - sites_.begin());
}

SiteKind Lattice::kind(SiteId id) const { return sites_[position(id)].kind; }

BasisString::BasisString(std::size_t length) : size_(length), words_((length + 63) / 64, 0) {}

BasisString BasisString::from_string(std::string_view digits) {
    BasisString b(digits.size());
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (digits[i] == '1') {
            b.set(i, true);
        } else if (digits[i] != '0') {
            throw std::invalid_argument("basis string may only contain '0' and '1'");
        }
    }
    return b;
}

BasisString BasisString::from_index(std::uint64_t index, std::size_t length) {
    if (length > 64) {
        throw std::invalid_argument("from_index supports at most 64 sites");
    }
    BasisString b(length);
    for (std::size_t i = 0; i < length; ++i) {
        b.set(i, (index >> (length - 1 - i)) & 1U);
    }
    return b;
}

std::string BasisString::to_string() const {
    std::string out(size_, '0');
    for (std::size_t i = 0; i < size_; ++i) {
        if (get(i)) {
            out[i] = '1';
        }
    }
    return out;
}

std::uint64_t BasisString::to_index() const {
    if (size_ > 64) {
        throw std::length_error("basis string longer than 64 sites has no 64-bit index");
    }
    if (size_ == 0) {
        return 0;
    }
    return words_[0] >> (64 - size_);
}

} // namespace branchsim
