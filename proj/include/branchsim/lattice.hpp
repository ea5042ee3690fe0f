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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace branchsim {

/// Signed lattice coordinate. The system qubit conventionally sits at 0.
struct SiteId {
    int index = 0;

    constexpr SiteId() = default;
    constexpr explicit SiteId(int i) : index(i) {}

    friend constexpr auto operator<=>(SiteId, SiteId) = default;
};

enum class SiteKind { System, Field };

std::string_view to_string(SiteKind kind);
SiteKind site_kind_from_string(std::string_view name);

struct Site {
    SiteId id;
    SiteKind kind = SiteKind::Field;

    friend bool operator==(const Site &, const Site &) = default;
};

/**
 * Finite one-dimensional lattice of two-level sites, ordered by strictly
 * increasing index. The ordering fixes the tensor-product convention: the
 * leftmost site is the most significant digit of a basis string.
 */
class Lattice {
  public:
    Lattice() = default;
    explicit Lattice(std::vector<Site> sites);

    /// Contiguous field sites lo..hi with system qubits at the given indices.
    static Lattice with_systems(int lo, int hi, const std::vector<int> &system_indices);

    std::size_t size() const { return sites_.size(); }
    const std::vector<Site> &sites() const { return sites_; }
    const Site &operator[](std::size_t pos) const { return sites_[pos]; }

    bool contains(SiteId id) const;
    /// Position of `id` in lattice order; throws std::out_of_range if absent.
    std::size_t position(SiteId id) const;
    SiteKind kind(SiteId id) const;

    friend bool operator==(const Lattice &, const Lattice &) = default;

  private:
    std::vector<Site> sites_;
};

/**
 * One product-basis configuration: a bit per site, 0 for |0> or up and 1 for
 * |1> or down. Bits are packed most-significant-first so that the default
 * ordering equals lexicographic order of the digit string.
 */
class BasisString {
  public:
    BasisString() = default;
    explicit BasisString(std::size_t length);

    static BasisString from_string(std::string_view digits);
    static BasisString from_index(std::uint64_t index, std::size_t length);

    std::size_t size() const { return size_; }

    bool get(std::size_t pos) const {
        return (words_[pos / 64] >> (63 - pos % 64)) & 1U;
    }
    void set(std::size_t pos, bool value) {
        const std::uint64_t mask = std::uint64_t{1} << (63 - pos % 64);
        if (value) {
            words_[pos / 64] |= mask;
        } else {
            words_[pos / 64] &= ~mask;
        }
    }

    std::string to_string() const;
    /// Binary value with position 0 as the most significant bit. Requires size() <= 64.
    std::uint64_t to_index() const;

    friend auto operator<=>(const BasisString &, const BasisString &) = default;
    friend bool operator==(const BasisString &, const BasisString &) = default;

  private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace branchsim
