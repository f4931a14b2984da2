// Copyright 2026 The lopsim Authors
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

#include <complex>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace lopsim {

using Complex = std::complex<double>;

/// Amplitudes with magnitude at or below this value are dropped from sparse states.
inline constexpr double kPruneThreshold = 1e-12;

/// Photon counts per optical mode. Ordered lexicographically by occupation vector.
class FockBasisState {
   public:
    FockBasisState() = default;
    explicit FockBasisState(std::vector<int> occupations);

    const std::vector<int> &occupations() const { return occ_; }
    std::size_t mode_count() const { return occ_.size(); }
    int operator[](std::size_t mode) const { return occ_[mode]; }
    int photon_number() const;

    friend bool operator==(const FockBasisState &, const FockBasisState &) = default;
    friend auto operator<=>(const FockBasisState &, const FockBasisState &) = default;

   private:
    std::vector<int> occ_;
};

/// Sparse superposition of Fock basis states over a fixed number of modes.
///
/// Values are immutable once built; every operation returns a new state. Terms are
/// kept in lexicographic occupation order, which fixes serialization order.
class PhotonicState {
   public:
    using TermMap = std::map<FockBasisState, Complex>;

    /// The zero vector on `mode_count` modes (no terms).
    explicit PhotonicState(std::size_t mode_count = 0) : modes_(mode_count) {}

    /// Builds a state from raw terms; prunes small amplitudes and merges nothing
    /// (keys are unique). Throws std::domain_error on a mode count mismatch.
    PhotonicState(std::size_t mode_count, TermMap terms);

    std::size_t mode_count() const { return modes_; }
    const TermMap &terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    /// Amplitude of a basis state, zero if absent.
    Complex amplitude(const FockBasisState &basis) const;
    Complex amplitude(const std::vector<int> &occupations) const;

    double norm_squared() const;
    double norm() const;

    /// Returns this state scaled to unit norm. Throws std::domain_error for the zero state.
    PhotonicState normalized() const;
    PhotonicState scaled(Complex factor) const;

   private:
    std::size_t modes_ = 0;
    TermMap terms_;
};

/// Single-term state with amplitude 1. Throws std::domain_error on a negative count.
PhotonicState make_basis_state(std::vector<int> occupations);

/// Vacuum on `mode_count` modes.
PhotonicState vacuum(std::size_t mode_count);

/// ca*a + cb*b, termwise, with pruning.
PhotonicState superpose(const PhotonicState &a, Complex ca, const PhotonicState &b, Complex cb);

/// <a|b>, conjugate-linear in the first argument.
Complex inner_product(const PhotonicState &a, const PhotonicState &b);

/// a (x) b. Modes of `b` follow the modes of `a`.
PhotonicState tensor(const PhotonicState &a, const PhotonicState &b);

/// Common photon number of all terms, or nullopt when the state spans several
/// photon-number sectors. The zero state reports 0.
std::optional<int> total_photon_number(const PhotonicState &s);

/// Removes `modes` from every term. Each term must carry the same occupation on
/// those modes (the state factorizes); otherwise throws std::domain_error.
PhotonicState discard_modes(const PhotonicState &s, std::span<const int> modes);

/// Keeps only terms whose occupation on `modes` equals `counts`.
PhotonicState project_modes(const PhotonicState &s, std::span<const int> modes,
                            std::span<const int> counts);

}  // namespace lopsim
