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

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "lopsim/fock.hpp"
#include "lopsim/rng.hpp"

namespace lopsim {

/// Photon counter with a lumped efficiency. Threshold detectors report only
/// click (1) or no click (0).
struct DetectorModel {
    double efficiency = 1.0;
    bool number_resolving = true;

    static DetectorModel ideal() { return {}; }
    static DetectorModel threshold(double efficiency = 1.0) { return {efficiency, false}; }

    /// Throws std::domain_error unless efficiency lies in [0, 1].
    void validate() const;

    /// Probability that `photons` photons in one mode produce the reading `reported`.
    double response(int photons, int reported) const;

    friend bool operator==(const DetectorModel &, const DetectorModel &) = default;
};

/// Required reading per measured mode. For threshold detectors 1 means "click".
struct HeraldPattern {
    std::map<int, int> counts;

    std::vector<int> modes() const;
    std::vector<int> values() const;
    friend bool operator==(const HeraldPattern &, const HeraldPattern &) = default;
};

/// Result of conditioning a state on a detector reading.
///
/// `residual` keeps every mode: measured modes carry the photons consistent with the
/// reading, weighted by the square root of the detector response (the Luders update).
/// With ideal detectors this is the plain projection. `exact_probability` is the part
/// of `probability` where each measured mode held exactly the reported count and every
/// photon registered.
struct DetectionRecord {
    std::map<int, int> outcome;
    double probability = 0.0;
    double exact_probability = 0.0;
    PhotonicState residual;

    /// False when the reading cannot occur; the residual is then the zero state.
    bool possible() const { return probability > 0.0; }
};

/// Conditions `s` on the reading `pattern` under detector model `d`.
/// Throws std::domain_error for an empty pattern or out-of-range modes.
DetectionRecord herald(const PhotonicState &s, const HeraldPattern &pattern,
                       const DetectorModel &d = DetectorModel::ideal());

struct MeasurementSample {
    FockBasisState outcome;
    double probability = 0.0;
};

/// Samples a full photon-number measurement. Throws std::domain_error unless `s` is
/// normalized within 1e-10.
MeasurementSample measure_all(const PhotonicState &s, std::uint64_t seed);
MeasurementSample measure_all(const PhotonicState &s, Rng &rng);

/// Detector readings for a true occupation, drawing photon losses from `rng`.
std::map<int, int> observe(const FockBasisState &occupation, std::span<const int> modes,
                           const DetectorModel &d, Rng &rng);

/// Marginal distribution of ideal number-resolving readings on `modes`.
std::map<std::vector<int>, double> outcome_distribution(const PhotonicState &s,
                                                        std::span<const int> modes);

}  // namespace lopsim
