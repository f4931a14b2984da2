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

#include "lopsim/heralded.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lopsim {

namespace {

constexpr double kPi = std::numbers::pi;

// Three-mode NS transfer matrix (signal, ancilla photon, ancilla vacuum).
Eigen::Matrix3cd ns_transfer_matrix() {
    const double s2 = std::numbers::sqrt2;
    const double q = std::pow(2.0, -0.25);
    const double c = std::sqrt(3.0 / s2 - 2.0);
    Eigen::Matrix3cd u;
    u << 1.0 - s2, q, c,
         q, 0.5, 0.5 - 1.0 / s2,
         c, 0.5 - 1.0 / s2, s2 - 0.5;
    return u;
}

// Real Hadamard on a dual-rail pair from a balanced beamsplitter and two phases.
void append_hadamard(std::vector<OpticalElement> &out, int zero_rail, int one_rail) {
    out.emplace_back(PhaseShift{one_rail, -kPi / 2});
    out.emplace_back(BeamSplitter{zero_rail, one_rail, 0.5});
    out.emplace_back(PhaseShift{one_rail, -kPi / 2});
}

void append_elements(std::vector<OpticalElement> &out, const std::vector<OpticalElement> &more) {
    out.insert(out.end(), more.begin(), more.end());
}

PhotonicState with_ancillas(const HeraldedGate &g, const PhotonicState &signal) {
    if (static_cast<int>(signal.mode_count()) != g.signal_modes) {
        throw std::domain_error("gate expects " + std::to_string(g.signal_modes) + " signal modes, got " +
                                std::to_string(signal.mode_count()));
    }
    if (g.ancilla_input.empty()) {
        return signal;
    }
    return tensor(signal, make_basis_state(g.ancilla_input));
}

}  // namespace

std::vector<int> HeraldedGate::ancilla_modes() const {
    std::vector<int> out;
    for (int m = signal_modes; m < total_modes(); ++m) {
        out.push_back(m);
    }
    return out;
}

HeraldedGate ns_gate() {
    HeraldedGate g;
    g.network = synthesize_network(ns_transfer_matrix());
    g.signal_modes = 1;
    g.ancilla_input = {1, 0};
    g.herald.counts = {{1, 1}, {2, 0}};
    return g;
}

HeraldedGate klm_cz() {
    const HeraldedGate ns = ns_gate();
    HeraldedGate g;
    g.signal_modes = 4;
    g.ancilla_input = {1, 0, 1, 0};
    g.herald.counts = {{4, 1}, {5, 0}, {6, 1}, {7, 0}};
    g.logical_io.pairs = {{0, 1}, {2, 3}};
    g.logical_io.flavor = EncodingFlavor::path;

    g.network.emplace_back(BeamSplitter{1, 3, 0.5});
    const std::vector<int> on_control = {1, 4, 5};
    const std::vector<int> on_target = {3, 6, 7};
    append_elements(g.network, remap_modes(ns.network, on_control));
    append_elements(g.network, remap_modes(ns.network, on_target));
    // Inverse of the first beamsplitter.
    g.network.emplace_back(PhaseShift{3, kPi});
    g.network.emplace_back(BeamSplitter{1, 3, 0.5});
    g.network.emplace_back(PhaseShift{3, kPi});
    return g;
}

HeraldedGate klm_cnot() {
    HeraldedGate g = klm_cz();
    std::vector<OpticalElement> network;
    append_hadamard(network, 2, 3);
    append_elements(network, g.network);
    append_hadamard(network, 2, 3);
    g.network = std::move(network);
    return g;
}

DetectionRecord apply_heralded(const HeraldedGate &g, const PhotonicState &signal, const DetectorModel &d) {
    const PhotonicState out = apply(g.unitary(), with_ancillas(g, signal));
    return herald(out, g.herald, d);
}

GateRunResult run_heralded(const HeraldedGate &g, const LogicalState &input, const DetectorModel &d) {
    if (g.logical_io.qubits() == 0) {
        throw std::domain_error("gate has no logical interface");
    }
    if (input.qubits() != g.logical_io.qubits()) {
        throw std::domain_error("gate acts on " + std::to_string(g.logical_io.qubits()) + " qubits, input has " +
                                std::to_string(input.qubits()));
    }
    const PhotonicState signal = encode(input, g.logical_io, g.signal_modes);
    const PhotonicState out = apply(g.unitary(), with_ancillas(g, signal));
    const DetectionRecord rec = herald(out, g.herald, d);

    const std::vector<int> herald_modes = g.herald.modes();
    const std::vector<int> herald_values = g.herald.values();
    const PhotonicState success_branch = project_modes(out, herald_modes, herald_values);

    GateRunResult r;
    r.probability = rec.exact_probability;
    r.false_herald_probability = std::max(0.0, rec.probability - rec.exact_probability);
    r.success = r.probability > 0.0;
    if (!success_branch.empty()) {
        const DecodeResult decoded = decode(discard_modes(success_branch, g.ancilla_modes()), g.logical_io);
        r.logical_action = decoded.state;
        r.leakage = decoded.leakage;
    } else {
        r.leakage = 1.0;
    }
    r.failure_outcomes = outcome_distribution(out, herald_modes);
    r.failure_outcomes.erase(herald_values);
    r.failure_state = superpose(out, 1.0, success_branch, -1.0);
    return r;
}

Eigen::MatrixXcd logical_kraus(const HeraldedGate &g) {
    const int n = g.logical_io.qubits();
    if (n == 0) {
        throw std::domain_error("gate has no logical interface");
    }
    const std::size_t dim = std::size_t{1} << n;
    const ModeUnitary u = g.unitary();
    const std::vector<int> herald_modes = g.herald.modes();
    const std::vector<int> herald_values = g.herald.values();
    Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t col = 0; col < dim; ++col) {
        const PhotonicState signal = encode(LogicalState::basis(n, col), g.logical_io, g.signal_modes);
        const PhotonicState out = apply(u, with_ancillas(g, signal));
        const PhotonicState branch = project_modes(out, herald_modes, herald_values);
        if (branch.empty()) {
            continue;
        }
        const PhotonicState kept = discard_modes(branch, g.ancilla_modes());
        for (std::size_t row = 0; row < dim; ++row) {
            const PhotonicState target = encode(LogicalState::basis(n, row), g.logical_io, g.signal_modes);
            k(row, col) = inner_product(target, kept);
        }
    }
    return k;
}

}  // namespace lopsim
