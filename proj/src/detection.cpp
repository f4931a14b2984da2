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

#include "lopsim/detection.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lopsim {

namespace {

double binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0.0;
    }
    double c = 1;
    for (int i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
    }
    return c;
}

constexpr double kNormTolerance = 1e-10;

}  // namespace

void DetectorModel::validate() const {
    if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
        throw std::domain_error("detector efficiency must lie in [0, 1]");
    }
}

double DetectorModel::response(int photons, int reported) const {
    const double loss = 1.0 - efficiency;
    if (number_resolving) {
        if (reported < 0 || reported > photons) {
            return 0.0;
        }
        return binomial(photons, reported) * std::pow(efficiency, reported) *
               std::pow(loss, photons - reported);
    }
    const double dark = std::pow(loss, photons);
    return reported == 0 ? dark : 1.0 - dark;
}

std::vector<int> HeraldPattern::modes() const {
    std::vector<int> out;
    for (const auto &[m, c] : counts) {
        out.push_back(m);
    }
    return out;
}

std::vector<int> HeraldPattern::values() const {
    std::vector<int> out;
    for (const auto &[m, c] : counts) {
        out.push_back(c);
    }
    return out;
}

DetectionRecord herald(const PhotonicState &s, const HeraldPattern &pattern,
                       const DetectorModel &d) {
    d.validate();
    if (pattern.counts.empty()) {
        throw std::domain_error("herald pattern is empty");
    }
    for (const auto &[mode, count] : pattern.counts) {
        if (mode < 0 || static_cast<std::size_t>(mode) >= s.mode_count()) {
            throw std::domain_error("herald mode " + std::to_string(mode) + " out of range");
        }
        if (count < 0) {
            throw std::domain_error("herald count must be non-negative");
        }
        if (!d.number_resolving && count > 1) {
            throw std::domain_error("threshold detectors only report 0 or 1 (click)");
        }
    }

    int heralded_photons = 0;
    for (const auto &[mode, count] : pattern.counts) {
        heralded_photons += count;
    }
    const double all_registered = std::pow(d.efficiency, heralded_photons);

    DetectionRecord rec;
    rec.outcome = pattern.counts;
    PhotonicState::TermMap kept;
    for (const auto &[basis, amp] : s.terms()) {
        double weight = 1.0;
        bool exact = true;
        for (const auto &[mode, count] : pattern.counts) {
            weight *= d.response(basis[mode], count);
            exact = exact && basis[mode] == count;
        }
        if (weight <= 0.0) {
            continue;
        }
        const double p = std::norm(amp);
        rec.probability += weight * p;
        if (exact) {
            rec.exact_probability += all_registered * p;
        }
        kept.emplace(basis, amp * std::sqrt(weight));
    }
    PhotonicState projected(s.mode_count(), std::move(kept));
    rec.residual = rec.probability > 0.0 && !projected.empty() ? projected.normalized()
                                                                : PhotonicState(s.mode_count());
    if (rec.residual.empty()) {
        rec.probability = 0.0;
        rec.exact_probability = 0.0;
    }
    return rec;
}

MeasurementSample measure_all(const PhotonicState &s, Rng &rng) {
    const double total = s.norm_squared();
    if (std::abs(total - 1.0) > kNormTolerance) {
        throw std::domain_error("measure_all needs a normalized state (norm^2 = " +
                                std::to_string(total) + ")");
    }
    const double u = rng.uniform() * total;
    double acc = 0;
    const auto *last = &*s.terms().rbegin();
    for (const auto &term : s.terms()) {
        acc += std::norm(term.second);
        if (u < acc) {
            return {term.first, std::norm(term.second)};
        }
    }
    return {last->first, std::norm(last->second)};
}

MeasurementSample measure_all(const PhotonicState &s, std::uint64_t seed) {
    Rng rng(seed);
    return measure_all(s, rng);
}

std::map<int, int> observe(const FockBasisState &occupation, std::span<const int> modes,
                           const DetectorModel &d, Rng &rng) {
    d.validate();
    std::map<int, int> out;
    for (int m : modes) {
        if (m < 0 || static_cast<std::size_t>(m) >= occupation.mode_count()) {
            throw std::domain_error("observed mode out of range");
        }
        int registered = 0;
        for (int k = 0; k < occupation[m]; ++k) {
            registered += rng.bernoulli(d.efficiency) ? 1 : 0;
        }
        out[m] = d.number_resolving ? registered : (registered > 0 ? 1 : 0);
    }
    return out;
}

std::map<std::vector<int>, double> outcome_distribution(const PhotonicState &s,
                                                        std::span<const int> modes) {
    std::map<std::vector<int>, double> out;
    for (const auto &[basis, amp] : s.terms()) {
        std::vector<int> key;
        key.reserve(modes.size());
        for (int m : modes) {
            if (m < 0 || static_cast<std::size_t>(m) >= s.mode_count()) {
                throw std::domain_error("mode out of range");
            }
            key.push_back(basis[m]);
        }
        out[key] += std::norm(amp);
    }
    return out;
}

}  // namespace lopsim
