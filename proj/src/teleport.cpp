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

#include "lopsim/teleport.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "lopsim/encoding.hpp"
#include "lopsim/heralded.hpp"
#include "lopsim/rng.hpp"

namespace lopsim {

namespace {

void check_pair(const LogicalState &s, int q1, int q2) {
    const int n = s.qubits();
    if (q1 < 0 || q2 < 0 || q1 >= n || q2 >= n || q1 == q2) {
        throw std::domain_error("Bell measurement needs two distinct qubits of the state");
    }
}

// (|v><v| on (q1, q2)) applied to s, unnormalized. v is indexed by |q1 q2>.
std::vector<Complex> project_pair(const LogicalState &s, int q1, int q2, const Eigen::Vector4cd &v) {
    const int n = s.qubits();
    const std::uint64_t b1 = std::uint64_t{1} << (n - 1 - q1);
    const std::uint64_t b2 = std::uint64_t{1} << (n - 1 - q2);
    const std::uint64_t offset[4] = {0, b2, b1, b1 | b2};
    std::vector<Complex> out(s.dimension());
    for (std::uint64_t i = 0; i < s.dimension(); ++i) {
        if (i & (b1 | b2)) {
            continue;
        }
        Complex c{};
        for (int k = 0; k < 4; ++k) {
            c += std::conj(v(k)) * s[i | offset[k]];
        }
        for (int k = 0; k < 4; ++k) {
            out[i | offset[k]] = v(k) * c;
        }
    }
    return out;
}

double squared_norm(const std::vector<Complex> &v) {
    double t = 0;
    for (const auto &a : v) {
        t += std::norm(a);
    }
    return t;
}

Eigen::Vector4cd bell_vector(BellLabel label) {
    const LogicalState b = bell_state(label);
    const auto &a = b.amplitudes();
    return Eigen::Vector4cd(a[0], a[1], a[2], a[3]);
}

Eigen::Vector4cd basis_vector(int index) {
    Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
    v(index) = 1.0;
    return v;
}

// Outcomes of the partial analyzer in a fixed order.
std::vector<std::pair<BellReading, Eigen::Vector4cd>> analyzer_projectors() {
    return {
        {BellReading{BellLabel::psi_plus, std::nullopt}, bell_vector(BellLabel::psi_plus)},
        {BellReading{BellLabel::psi_minus, std::nullopt}, bell_vector(BellLabel::psi_minus)},
        {BellReading{std::nullopt, std::pair{0, 0}}, basis_vector(0)},
        {BellReading{std::nullopt, std::pair{1, 1}}, basis_vector(3)},
    };
}

LogicalState corrected(const LogicalState &s, const PauliCorrection &c) {
    QubitRegister r(s);
    r.apply(0, c.matrix());
    return r.state();
}

}  // namespace

std::string_view to_string(BellLabel label) {
    switch (label) {
        case BellLabel::phi_plus:
            return "phi+";
        case BellLabel::psi_plus:
            return "psi+";
        case BellLabel::phi_minus:
            return "phi-";
        case BellLabel::psi_minus:
            return "psi-";
    }
    return "?";
}

BellLabel bell_label_from_string(std::string_view name) {
    for (BellLabel l : kAllBellLabels) {
        if (to_string(l) == name) {
            return l;
        }
    }
    throw std::domain_error("unknown Bell label '" + std::string(name) + "'");
}

LogicalState bell_state(BellLabel label) {
    const double h = 1.0 / std::numbers::sqrt2;
    switch (label) {
        case BellLabel::phi_plus:
            return LogicalState::from_amplitudes({h, 0, 0, h});
        case BellLabel::psi_plus:
            return LogicalState::from_amplitudes({0, h, h, 0});
        case BellLabel::phi_minus:
            return LogicalState::from_amplitudes({h, 0, 0, -h});
        case BellLabel::psi_minus:
            return LogicalState::from_amplitudes({0, h, -h, 0});
    }
    throw std::domain_error("bad Bell label");
}

LogicalState bell_pair() { return bell_state(BellLabel::phi_plus); }

Eigen::Matrix2cd PauliCorrection::matrix() const {
    Eigen::Matrix2cd m = gates::identity();
    if (x_flip) {
        m = gates::pauli_x() * m;
    }
    if (z_flip) {
        m = gates::pauli_z() * m;
    }
    return m;
}

PauliCorrection teleport_correction(BellLabel label) {
    const int bits = static_cast<int>(label);
    return {(bits & 1) != 0, (bits & 2) != 0};
}

BellOutcome bell_measure_forced(const LogicalState &s, int q1, int q2, BellLabel label) {
    check_pair(s, q1, q2);
    std::vector<Complex> amps = project_pair(s, q1, q2, bell_vector(label));
    const double p = squared_norm(amps);
    if (p <= 1e-24) {
        throw std::domain_error("Bell outcome " + std::string(to_string(label)) + " has zero probability");
    }
    return {label, p, LogicalState::normalized(std::move(amps))};
}

BellOutcome bell_measure_ideal(const LogicalState &s, int q1, int q2, std::uint64_t seed) {
    check_pair(s, q1, q2);
    Rng rng(seed);
    const double u = rng.uniform();
    double acc = 0;
    std::optional<BellOutcome> last;
    for (BellLabel label : kAllBellLabels) {
        std::vector<Complex> amps = project_pair(s, q1, q2, bell_vector(label));
        const double p = squared_norm(amps);
        if (p <= 1e-24) {
            continue;
        }
        acc += p;
        last = BellOutcome{label, p, LogicalState::normalized(std::move(amps))};
        if (u < acc) {
            break;
        }
    }
    return *last;
}

std::map<BellReading, double> linear_optics_bell_distribution(const LogicalState &s, int q1, int q2) {
    check_pair(s, q1, q2);
    std::map<BellReading, double> out;
    for (const auto &[reading, v] : analyzer_projectors()) {
        const double p = squared_norm(project_pair(s, q1, q2, v));
        if (p > 1e-24) {
            out[reading] = p;
        }
    }
    return out;
}

LinearOpticsBellOutcome bell_measure_linear_optics(const LogicalState &s, int q1, int q2, std::uint64_t seed) {
    check_pair(s, q1, q2);
    Rng rng(seed);
    const double u = rng.uniform();
    double acc = 0;
    std::optional<LinearOpticsBellOutcome> last;
    for (const auto &[reading, v] : analyzer_projectors()) {
        std::vector<Complex> amps = project_pair(s, q1, q2, v);
        const double p = squared_norm(amps);
        if (p <= 1e-24) {
            continue;
        }
        acc += p;
        last = LinearOpticsBellOutcome{reading, p, LogicalState::normalized(std::move(amps))};
        if (u < acc) {
            break;
        }
    }
    return *last;
}

std::vector<OpticalElement> bell_analyzer_network() {
    return {BeamSplitter{0, 2, 0.5}, BeamSplitter{1, 3, 0.5}};
}

BellReading classify_bell_reading(const FockBasisState &counts) {
    if (counts.mode_count() != 4 || counts.photon_number() != 2) {
        throw std::domain_error("analyzer reading must hold two photons on four modes");
    }
    const int h = counts[0] + counts[2];
    const int v = counts[1] + counts[3];
    if (h == 2) {
        return {std::nullopt, std::pair{0, 0}};
    }
    if (v == 2) {
        return {std::nullopt, std::pair{1, 1}};
    }
    const bool same_port = counts[0] + counts[1] == 2 || counts[2] + counts[3] == 2;
    return {same_port ? BellLabel::psi_plus : BellLabel::psi_minus, std::nullopt};
}

std::map<BellReading, double> photonic_bell_distribution(const LogicalState &two_qubits) {
    if (two_qubits.qubits() != 2) {
        throw std::domain_error("analyzer takes two qubits");
    }
    const QubitEncoding e = QubitEncoding::consecutive(2, EncodingFlavor::polarization);
    const PhotonicState out = apply(compose(bell_analyzer_network(), 4), encode(two_qubits, e));
    std::map<BellReading, double> dist;
    for (const auto &[basis, amp] : out.terms()) {
        dist[classify_bell_reading(basis)] += std::norm(amp);
    }
    return dist;
}

namespace {

TeleportResult finish_teleport(const BellOutcome &m) {
    const std::vector<int> keep = {2};
    TeleportResult r;
    r.outcome = m.label;
    r.probability = m.probability;
    r.correction = teleport_correction(m.label);
    r.uncorrected = extract_factor(m.state, keep);
    r.output = corrected(r.uncorrected, r.correction);
    return r;
}

LogicalState teleport_register(const LogicalState &input) {
    if (input.qubits() != 1) {
        throw std::domain_error("teleport_qubit takes a single qubit");
    }
    return tensor(input, bell_pair());
}

}  // namespace

TeleportResult teleport_qubit(const LogicalState &input, std::uint64_t seed) {
    return finish_teleport(bell_measure_ideal(teleport_register(input), 0, 1, seed));
}

TeleportResult teleport_qubit_forced(const LogicalState &input, BellLabel outcome) {
    return finish_teleport(bell_measure_forced(teleport_register(input), 0, 1, outcome));
}

const Eigen::Matrix4cd &heralded_cnot_kraus() {
    static const Eigen::Matrix4cd k = logical_kraus(klm_cnot());
    return k;
}

TeleportedCnotResult teleported_cnot(const LogicalState &input, std::uint64_t seed,
                                     const TeleportedCnotOptions &options) {
    if (input.qubits() != 2) {
        throw std::domain_error("teleported_cnot takes two qubits");
    }
    Rng rng(seed);

    // Every attempt starts from the same two fresh pairs, so the heralded branch is
    // computed once and only the herald is drawn per attempt. Qubits: a1 a2 b1 b2; the
    // gate acts on a2 (control) and b2 (target).
    QubitRegister pairs(tensor(bell_pair(), bell_pair()));
    pairs.apply(1, 3, heralded_cnot_kraus());
    const double p_success = pairs.norm_squared();
    if (!(p_success > 0.0)) {
        throw std::logic_error("heralded CNOT never succeeds");
    }

    TeleportedCnotResult r;
    while (true) {
        ++r.tally.attempts;
        r.tally.entangled_pairs_consumed += 2;
        if (options.force_first_attempt || rng.bernoulli(p_success)) {
            break;
        }
    }

    // Qubits: c t a1 a2 b1 b2.
    const LogicalState full = tensor(input, pairs.state());
    const BellOutcome mc = options.control_outcome ? bell_measure_forced(full, 0, 2, *options.control_outcome)
                                                   : bell_measure_ideal(full, 0, 2, rng.next());
    const BellOutcome mt = options.target_outcome ? bell_measure_forced(mc.state, 1, 4, *options.target_outcome)
                                                  : bell_measure_ideal(mc.state, 1, 4, rng.next());
    r.control_outcome = mc.label;
    r.target_outcome = mt.label;

    // Byproducts X^xc Z^zc (control) and X^xt Z^zt (target) pass through the CNOT as
    // X_c -> X_c X_t and Z_t -> Z_c Z_t.
    const PauliCorrection c = teleport_correction(mc.label);
    const PauliCorrection t = teleport_correction(mt.label);
    r.control_correction = {c.x_flip, c.z_flip != t.z_flip};
    r.target_correction = {c.x_flip != t.x_flip, t.z_flip};

    const std::vector<int> keep = {3, 5};
    QubitRegister out(extract_factor(mt.state, keep));
    out.apply(0, r.control_correction.matrix());
    out.apply(1, r.target_correction.matrix());
    r.output = out.state();
    return r;
}

TeleportedCnotResult teleported_cnot(const LogicalState &control, const LogicalState &target, std::uint64_t seed,
                                     const TeleportedCnotOptions &options) {
    if (control.qubits() != 1 || target.qubits() != 1) {
        throw std::domain_error("control and target must be single qubits");
    }
    return teleported_cnot(tensor(control, target), seed, options);
}

TeleportedCnotBatch run_teleported_cnot_trials(const LogicalState &input, std::int64_t trials, std::uint64_t seed) {
    if (trials <= 0) {
        throw std::domain_error("trial count must be positive");
    }
    QubitRegister ideal(input);
    ideal.cnot(0, 1);
    const LogicalState expected = ideal.state();

    TeleportedCnotBatch b;
    b.trials.reserve(static_cast<std::size_t>(trials));
    double pairs = 0;
    double attempts = 0;
    for (std::int64_t i = 0; i < trials; ++i) {
        const TeleportedCnotResult r = teleported_cnot(input, derive_seed(seed, static_cast<std::uint64_t>(i)));
        b.trials.push_back(r.tally);
        pairs += static_cast<double>(r.tally.entangled_pairs_consumed);
        attempts += static_cast<double>(r.tally.attempts);
        b.min_overlap = std::min(b.min_overlap, overlap(expected, r.output));
    }
    b.mean_pairs = pairs / static_cast<double>(trials);
    b.mean_attempts = attempts / static_cast<double>(trials);
    return b;
}

}  // namespace lopsim
