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

#include "lopsim/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace lopsim {

FockBasisState::FockBasisState(std::vector<int> occupations) : occ_(std::move(occupations)) {
    for (int n : occ_) {
        if (n < 0) {
            throw std::domain_error("negative occupation " + std::to_string(n));
        }
    }
}

int FockBasisState::photon_number() const {
    return std::accumulate(occ_.begin(), occ_.end(), 0);
}

PhotonicState::PhotonicState(std::size_t mode_count, TermMap terms) : modes_(mode_count) {
    for (auto &[basis, amp] : terms) {
        if (basis.mode_count() != mode_count) {
            throw std::domain_error("basis state has " + std::to_string(basis.mode_count()) +
                                    " modes, expected " + std::to_string(mode_count));
        }
        if (std::abs(amp) > kPruneThreshold) {
            terms_.emplace(basis, amp);
        }
    }
}

Complex PhotonicState::amplitude(const FockBasisState &basis) const {
    auto it = terms_.find(basis);
    return it == terms_.end() ? Complex{} : it->second;
}

Complex PhotonicState::amplitude(const std::vector<int> &occupations) const {
    return amplitude(FockBasisState(occupations));
}

double PhotonicState::norm_squared() const {
    double total = 0;
    for (const auto &[basis, amp] : terms_) {
        total += std::norm(amp);
    }
    return total;
}

double PhotonicState::norm() const { return std::sqrt(norm_squared()); }

PhotonicState PhotonicState::normalized() const {
    double n = norm();
    if (n == 0) {
        throw std::domain_error("cannot normalize the zero state");
    }
    return scaled(1.0 / n);
}

PhotonicState PhotonicState::scaled(Complex factor) const {
    TermMap out;
    for (const auto &[basis, amp] : terms_) {
        out.emplace(basis, amp * factor);
    }
    return PhotonicState(modes_, std::move(out));
}

PhotonicState make_basis_state(std::vector<int> occupations) {
    std::size_t m = occupations.size();
    PhotonicState::TermMap terms;
    terms.emplace(FockBasisState(std::move(occupations)), Complex{1.0, 0.0});
    return PhotonicState(m, std::move(terms));
}

PhotonicState vacuum(std::size_t mode_count) {
    return make_basis_state(std::vector<int>(mode_count, 0));
}

namespace {

void require_same_modes(const PhotonicState &a, const PhotonicState &b) {
    if (a.mode_count() != b.mode_count()) {
        throw std::domain_error("mode count mismatch: " + std::to_string(a.mode_count()) +
                                " vs " + std::to_string(b.mode_count()));
    }
}

}  // namespace

PhotonicState superpose(const PhotonicState &a, Complex ca, const PhotonicState &b, Complex cb) {
    require_same_modes(a, b);
    PhotonicState::TermMap out;
    for (const auto &[basis, amp] : a.terms()) {
        out[basis] += ca * amp;
    }
    for (const auto &[basis, amp] : b.terms()) {
        out[basis] += cb * amp;
    }
    return PhotonicState(a.mode_count(), std::move(out));
}

Complex inner_product(const PhotonicState &a, const PhotonicState &b) {
    require_same_modes(a, b);
    Complex total{};
    // Walk the smaller map and look up in the larger one.
    const auto &small = a.size() <= b.size() ? a : b;
    const auto &large = a.size() <= b.size() ? b : a;
    for (const auto &[basis, amp] : small.terms()) {
        auto it = large.terms().find(basis);
        if (it == large.terms().end()) {
            continue;
        }
        const Complex &av = (&small == &a) ? amp : it->second;
        const Complex &bv = (&small == &a) ? it->second : amp;
        total += std::conj(av) * bv;
    }
    return total;
}

PhotonicState tensor(const PhotonicState &a, const PhotonicState &b) {
    PhotonicState::TermMap out;
    for (const auto &[ba, aa] : a.terms()) {
        for (const auto &[bb, ab] : b.terms()) {
            std::vector<int> occ = ba.occupations();
            occ.insert(occ.end(), bb.occupations().begin(), bb.occupations().end());
            out.emplace(FockBasisState(std::move(occ)), aa * ab);
        }
    }
    return PhotonicState(a.mode_count() + b.mode_count(), std::move(out));
}

std::optional<int> total_photon_number(const PhotonicState &s) {
    std::optional<int> n;
    for (const auto &[basis, amp] : s.terms()) {
        int k = basis.photon_number();
        if (n && *n != k) {
            return std::nullopt;
        }
        n = k;
    }
    return n.value_or(0);
}

namespace {

void check_modes(const PhotonicState &s, std::span<const int> modes) {
    for (int m : modes) {
        if (m < 0 || static_cast<std::size_t>(m) >= s.mode_count()) {
            throw std::domain_error("mode " + std::to_string(m) + " out of range for " +
                                    std::to_string(s.mode_count()) + "-mode state");
        }
    }
}

}  // namespace

PhotonicState discard_modes(const PhotonicState &s, std::span<const int> modes) {
    check_modes(s, modes);
    std::vector<bool> drop(s.mode_count(), false);
    for (int m : modes) {
        drop[m] = true;
    }
    std::size_t kept = static_cast<std::size_t>(std::count(drop.begin(), drop.end(), false));

    std::optional<std::vector<int>> fixed;
    PhotonicState::TermMap out;
    for (const auto &[basis, amp] : s.terms()) {
        std::vector<int> dropped;
        std::vector<int> rest;
        for (std::size_t m = 0; m < s.mode_count(); ++m) {
            (drop[m] ? dropped : rest).push_back(basis[m]);
        }
        if (fixed && *fixed != dropped) {
            throw std::domain_error("state is entangled with the discarded modes");
        }
        fixed = std::move(dropped);
        out.emplace(FockBasisState(std::move(rest)), amp);
    }
    return PhotonicState(kept, std::move(out));
}

PhotonicState project_modes(const PhotonicState &s, std::span<const int> modes,
                            std::span<const int> counts) {
    check_modes(s, modes);
    if (modes.size() != counts.size()) {
        throw std::domain_error("modes and counts differ in length");
    }
    PhotonicState::TermMap out;
    for (const auto &[basis, amp] : s.terms()) {
        bool match = true;
        for (std::size_t i = 0; i < modes.size() && match; ++i) {
            match = basis[modes[i]] == counts[i];
        }
        if (match) {
            out.emplace(basis, amp);
        }
    }
    return PhotonicState(s.mode_count(), std::move(out));
}

}  // namespace lopsim
