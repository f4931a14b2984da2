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

#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "lopsim/detection.hpp"
#include "lopsim/encoding.hpp"
#include "lopsim/interferometer.hpp"

namespace lopsim {

/// A linear-optical network that works only when its ancilla detectors show the
/// herald pattern.
///
/// Modes [0, signal_modes) carry the input; ancilla modes follow and start in
/// `ancilla_input`. `logical_io` is empty for gates that act on raw Fock modes.
struct HeraldedGate {
    std::vector<OpticalElement> network;
    int signal_modes = 0;
    std::vector<int> ancilla_input;
    HeraldPattern herald;
    QubitEncoding logical_io;

    int total_modes() const { return signal_modes + static_cast<int>(ancilla_input.size()); }
    std::vector<int> ancilla_modes() const;
    ModeUnitary unitary() const { return compose(network, total_modes()); }
};

/// Nonlinear sign gate on mode 0: a|0> + b|1> + c|2> -> a|0> + b|1> - c|2>, heralded by
/// one photon in mode 1 and none in mode 2, with probability 1/4.
HeraldedGate ns_gate();

/// Controlled-Z on dual-rail qubits (0,1) and (2,3): the |1> rails meet on a balanced
/// beamsplitter, pass through one NS gate each and are recombined. Succeeds with
/// probability 1/16.
HeraldedGate klm_cz();

/// CNOT: klm_cz conjugated by Hadamards on the target pair.
HeraldedGate klm_cnot();

/// Feeds a Fock-space signal into the gate and conditions on the herald.
DetectionRecord apply_heralded(const HeraldedGate &g, const PhotonicState &signal,
                               const DetectorModel &d = DetectorModel::ideal());

struct GateRunResult {
    bool success = false;
    /// Probability that the gate truly worked and every herald photon registered.
    double probability = 0.0;
    /// Probability that the detectors show the herald although the gate failed
    /// (lost or unresolved photons). Zero for ideal number-resolving detectors.
    double false_herald_probability = 0.0;
    std::optional<LogicalState> logical_action;
    double leakage = 0.0;
    /// Ideal readings on the ancilla modes other than the herald, with probabilities.
    std::map<std::vector<int>, double> failure_outcomes;
    /// Unnormalized output component outside the herald branch.
    PhotonicState failure_state;
};

/// encode -> add ancillas -> evolve -> herald -> decode.
GateRunResult run_heralded(const HeraldedGate &g, const LogicalState &input,
                           const DetectorModel &d = DetectorModel::ideal());

/// Success-branch operator on the logical subspace, columns indexed by computational
/// input. For klm_cnot this is CNOT / 4.
Eigen::MatrixXcd logical_kraus(const HeraldedGate &g);

}  // namespace lopsim
