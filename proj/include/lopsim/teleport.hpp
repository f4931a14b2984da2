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
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lopsim/fock.hpp"
#include "lopsim/interferometer.hpp"
#include "lopsim/qubit.hpp"

namespace lopsim {

/// Bell basis. The enumerator value is the pair of bits (2*b1 + b2) read out after
/// CNOT(q1, q2) and H(q1).
enum class BellLabel { phi_plus = 0, psi_plus = 1, phi_minus = 2, psi_minus = 3 };

inline constexpr BellLabel kAllBellLabels[] = {BellLabel::phi_plus, BellLabel::psi_plus, BellLabel::phi_minus,
                                               BellLabel::psi_minus};

std::string_view to_string(BellLabel label);
/// Inverse of to_string; throws std::domain_error on an unknown name.
BellLabel bell_label_from_string(std::string_view name);

/// Two-qubit Bell state for `label`.
LogicalState bell_state(BellLabel label);
/// (|00> + |11>) / sqrt2.
LogicalState bell_pair();

/// X^x_flip Z^z_flip byproduct, or the operator that removes it. Composition is XOR.
struct PauliCorrection {
    bool x_flip = false;
    bool z_flip = false;

    PauliCorrection operator^(const PauliCorrection &o) const { return {x_flip != o.x_flip, z_flip != o.z_flip}; }
    friend bool operator==(const PauliCorrection &, const PauliCorrection &) = default;

    bool trivial() const { return !x_flip && !z_flip; }
    /// Z^z X^x: X acts first.
    Eigen::Matrix2cd matrix() const;
};

/// Correction that undoes the byproduct left by teleporting through outcome `label`.
PauliCorrection teleport_correction(BellLabel label);

struct ResourceTally {
    std::int64_t entangled_pairs_consumed = 0;
    std::int64_t attempts = 0;
    friend bool operator==(const ResourceTally &, const ResourceTally &) = default;
};

struct BellOutcome {
    BellLabel label = BellLabel::phi_plus;
    double probability = 0.0;
    /// Input collapsed onto the outcome; the measured pair is left in the Bell state.
    LogicalState state;
};

/// Projective Bell measurement of qubits (q1, q2). Throws std::domain_error for
/// invalid or repeated indices.
BellOutcome bell_measure_ideal(const LogicalState &s, int q1, int q2, std::uint64_t seed);
/// Same, conditioned on `label`. Throws std::domain_error when that outcome has zero
/// probability.
BellOutcome bell_measure_forced(const LogicalState &s, int q1, int q2, BellLabel label);

/// What a linear-optics Bell analyzer reports: a Psi label, or the computational
/// bits of both qubits when it fails on the Phi subspace.
struct BellReading {
    std::optional<BellLabel> label;
    std::optional<std::pair<int, int>> failure;

    bool success() const { return label.has_value(); }
    friend auto operator<=>(const BellReading &, const BellReading &) = default;
};

struct LinearOpticsBellOutcome {
    BellReading reading;
    double probability = 0.0;
    LogicalState state;
};

/// Partial Bell measurement with outcome projectors |Psi+>, |Psi->, |00>, |11>.
LinearOpticsBellOutcome bell_measure_linear_optics(const LogicalState &s, int q1, int q2, std::uint64_t seed);

/// Outcome distribution of bell_measure_linear_optics; readings that cannot occur are
/// left out.
std::map<BellReading, double> linear_optics_bell_distribution(const LogicalState &s, int q1, int q2);

/// Photonic analyzer for two polarization qubits on spatial modes 0 and 1 (Fock
/// modes H0, V0, H1, V1): one balanced beamsplitter per polarization.
std::vector<OpticalElement> bell_analyzer_network();

/// Interprets a polarization-resolved photon count behind bell_analyzer_network.
/// Throws std::domain_error for readings that cannot come from two logical photons.
BellReading classify_bell_reading(const FockBasisState &counts);

/// Distribution of readings from a full Fock-space simulation of the analyzer with
/// the two-qubit state encoded in polarization.
std::map<BellReading, double> photonic_bell_distribution(const LogicalState &two_qubits);

struct TeleportResult {
    LogicalState output;
    /// Output before the correction was applied.
    LogicalState uncorrected;
    BellLabel outcome = BellLabel::phi_plus;
    PauliCorrection correction;
    double probability = 0.0;
};

/// Teleports one qubit through a fresh Bell pair with an ideal Bell measurement.
TeleportResult teleport_qubit(const LogicalState &input, std::uint64_t seed);
TeleportResult teleport_qubit_forced(const LogicalState &input, BellLabel outcome);

struct TeleportedCnotOptions {
    /// Skip the repeat-until-herald loop and take the first attempt as successful.
    bool force_first_attempt = false;
    std::optional<BellLabel> control_outcome;
    std::optional<BellLabel> target_outcome;
};

struct TeleportedCnotResult {
    LogicalState output;
    ResourceTally tally;
    BellLabel control_outcome = BellLabel::phi_plus;
    BellLabel target_outcome = BellLabel::phi_plus;
    PauliCorrection control_correction;
    PauliCorrection target_correction;
};

/// Heralded success operator of klm_cnot on the logical subspace, from exact photonic
/// evolution. Computed once.
const Eigen::Matrix4cd &heralded_cnot_kraus();

/// CNOT by gate teleportation: the heralded gate is tried on halves of two fresh Bell
/// pairs until it succeeds, then both qubits are teleported through the gated pairs and
/// the commuted corrections are applied. `input` is |control target>.
TeleportedCnotResult teleported_cnot(const LogicalState &input, std::uint64_t seed,
                                     const TeleportedCnotOptions &options = {});
TeleportedCnotResult teleported_cnot(const LogicalState &control, const LogicalState &target,
                                     std::uint64_t seed, const TeleportedCnotOptions &options = {});

struct TeleportedCnotBatch {
    std::vector<ResourceTally> trials;
    double mean_pairs = 0.0;
    double mean_attempts = 0.0;
    /// Smallest |<CNOT input|output>| over all trials.
    double min_overlap = 1.0;
};

/// Independent trials; trial i is seeded with derive_seed(seed, i).
TeleportedCnotBatch run_teleported_cnot_trials(const LogicalState &input, std::int64_t trials,
                                               std::uint64_t seed);

}  // namespace lopsim
