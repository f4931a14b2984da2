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

#include "lopsim/encoding.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <tuple>

namespace lopsim {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

QubitEncoding QubitEncoding::consecutive(int qubits, EncodingFlavor flavor) {
    QubitEncoding e;
    e.flavor = flavor;
    for (int k = 0; k < qubits; ++k) {
        e.pairs.push_back(polarization_pair(k));
    }
    return e;
}

int QubitEncoding::mode_count() const {
    int m = 0;
    for (const auto &p : pairs) {
        m = std::max({m, p.first + 1, p.second + 1});
    }
    return m;
}

void QubitEncoding::validate() const {
    std::set<int> seen;
    for (const auto &p : pairs) {
        for (int mode : {p.first, p.second}) {
            if (mode < 0) {
                throw std::domain_error("negative rail index");
            }
            if (!seen.insert(mode).second) {
                throw std::domain_error("mode " + std::to_string(mode) + " used by two rails");
            }
        }
    }
}

PhotonicState encode(const LogicalState &l, const QubitEncoding &e, int total_modes) {
    e.validate();
    if (l.qubits() != e.qubits()) {
        throw std::domain_error("state has " + std::to_string(l.qubits()) + " qubits, encoding has " +
                                std::to_string(e.qubits()));
    }
    const int modes = std::max(total_modes, e.mode_count());
    const int n = l.qubits();
    PhotonicState::TermMap terms;
    for (std::size_t idx = 0; idx < l.dimension(); ++idx) {
        if (l[idx] == Complex{}) {
            continue;
        }
        std::vector<int> occ(modes, 0);
        for (int q = 0; q < n; ++q) {
            const bool one = (idx >> (n - 1 - q)) & 1;
            occ[one ? e.pairs[q].second : e.pairs[q].first] = 1;
        }
        terms.emplace(FockBasisState(std::move(occ)), l[idx]);
    }
    return PhotonicState(modes, std::move(terms));
}

DecodeResult decode(const PhotonicState &p, const QubitEncoding &e) {
    e.validate();
    if (e.mode_count() > static_cast<int>(p.mode_count())) {
        throw std::domain_error("encoding refers to modes beyond the state");
    }
    const int n = e.qubits();
    std::vector<bool> rail(p.mode_count(), false);
    for (const auto &pair : e.pairs) {
        rail[pair.first] = rail[pair.second] = true;
    }

    const double total = p.norm_squared();
    std::vector<Complex> amps(std::size_t{1} << n);
    double inside = 0;
    for (const auto &[basis, amp] : p.terms()) {
        bool logical = true;
        for (std::size_t m = 0; m < p.mode_count() && logical; ++m) {
            logical = rail[m] || basis[m] == 0;
        }
        std::size_t idx = 0;
        for (int q = 0; q < n && logical; ++q) {
            const int zero = basis[e.pairs[q].first];
            const int one = basis[e.pairs[q].second];
            logical = zero + one == 1;
            idx = (idx << 1) | static_cast<std::size_t>(one);
        }
        if (logical) {
            amps[idx] += amp;
            inside += std::norm(amp);
        }
    }
    DecodeResult r;
    if (total == 0.0 || inside == 0.0) {
        return r;
    }
    r.leakage = std::max(0.0, 1.0 - inside / total);
    r.state = LogicalState::normalized(std::move(amps));
    return r;
}

double BlochVector::length() const { return std::sqrt(x * x + y * y + z * z); }

BlochVector marginal_bloch(const LogicalState &l, int q) {
    const int n = l.qubits();
    if (q < 0 || q >= n) {
        throw std::domain_error("qubit out of range");
    }
    const std::size_t bit = std::size_t{1} << (n - 1 - q);
    double p0 = 0;
    double p1 = 0;
    Complex coherence{};  // rho_10
    for (std::size_t i = 0; i < l.dimension(); ++i) {
        if (i & bit) {
            p1 += std::norm(l[i]);
            coherence += l[i] * std::conj(l[i & ~bit]);
        } else {
            p0 += std::norm(l[i]);
        }
    }
    return {2 * coherence.real(), 2 * coherence.imag(), p0 - p1};
}

BlochVector bloch(const LogicalState &l) {
    if (l.qubits() != 1) {
        throw std::domain_error("Bloch vector needs a single-qubit state");
    }
    return marginal_bloch(l, 0);
}

Eigen::Matrix2cd waveplate_sequence(const WaveplateAngles &a) {
    return quarter_wave_jones(a.last_quarter) * half_wave_jones(a.half) *
           quarter_wave_jones(a.first_quarter);
}

double phase_insensitive_distance(const Eigen::Matrix2cd &a, const Eigen::Matrix2cd &b) {
    const Complex t = (b.adjoint() * a).trace();
    const Complex phase = std::abs(t) > 0 ? t / std::abs(t) : Complex{1.0, 0.0};
    return (a - phase * b).cwiseAbs().maxCoeff();
}

namespace {

double wrap_half_turn(double angle) {
    double r = std::fmod(angle, kPi);
    if (r < 0) {
        r += kPi;
    }
    if (kPi - r < 1e-12 || r == 0.0) {
        r = 0.0;
    }
    return r;
}

// Rotation of the Poincare sphere induced by u: R_ij = tr(s_i u s_j u^dag) / 2.
Eigen::Matrix3d sphere_rotation(const Eigen::Matrix2cd &u) {
    const std::array<Eigen::Matrix2cd, 3> sigma = {gates::pauli_x(), gates::pauli_y(), gates::pauli_z()};
    Eigen::Matrix3d r;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            r(i, j) = 0.5 * (sigma[i] * u * sigma[j] * u.adjoint()).trace().real();
        }
    }
    return r;
}

}  // namespace

WaveplateAngles decompose_su2(const Eigen::Matrix2cd &target) {
    if ((target * target.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > 1e-10) {
        throw std::domain_error("target is not unitary");
    }
    // The plate sequence equals Ry(2 last) Rx(2 first + 2 last - 4 half) Ry(-2 first) on the
    // sphere, so a Y-X-Y Euler decomposition of the target fixes the angles.
    const Eigen::Matrix3d r = sphere_rotation(target);
    const double sb = std::hypot(r(0, 1), r(2, 1));
    const double beta = std::atan2(sb, r(1, 1));
    // Near beta = 0 or pi only alpha +- gamma is defined and the generic formulas amplify
    // round-off, so both parametrizations are tried and checked against the target.
    std::vector<std::tuple<double, double, double>> euler;
    if (sb > 0.0) {
        euler.emplace_back(std::atan2(r(0, 1), r(2, 1)), beta, std::atan2(r(1, 0), -r(1, 2)));
    }
    if (r(1, 1) > 0) {
        euler.emplace_back(std::atan2(r(0, 2), r(0, 0)), 0.0, 0.0);
    } else {
        euler.emplace_back(std::atan2(-r(0, 2), r(0, 0)), kPi, 0.0);
    }

    std::vector<WaveplateAngles> candidates;
    for (const auto &[alpha, b0, gamma] : euler) {
        for (const auto &[a, b, c] : {std::tuple{alpha, b0, gamma}, std::tuple{alpha + kPi, -b0, gamma + kPi}}) {
            for (int k = 0; k < 4; ++k) {
                candidates.push_back({wrap_half_turn(-c / 2), wrap_half_turn((a - c - b) / 4 + k * kPi / 2),
                                      wrap_half_turn(a / 2)});
            }
        }
    }
    auto key = [](const WaveplateAngles &w) {
        auto q = [](double v) { return std::llround(v * 1e10); };
        return std::tuple{q(w.first_quarter), q(w.half), q(w.last_quarter)};
    };
    std::optional<WaveplateAngles> best;
    for (const auto &w : candidates) {
        if (phase_insensitive_distance(waveplate_sequence(w), target) > 1e-8) {
            continue;
        }
        if (!best || key(w) < key(*best)) {
            best = w;
        }
    }
    if (!best) {
        throw std::logic_error("waveplate decomposition failed to reconstruct the target");
    }
    return *best;
}

PathConversion pbs_convert(const PhotonicState &p, const QubitEncoding &e) {
    e.validate();
    if (e.flavor != EncodingFlavor::polarization) {
        throw std::domain_error("pbs_convert needs a polarization encoding");
    }
    if (e.mode_count() > static_cast<int>(p.mode_count())) {
        throw std::domain_error("encoding refers to modes beyond the state");
    }
    const int base = static_cast<int>(p.mode_count());
    const int total = base + 2 * e.qubits();
    PathConversion out;
    out.encoding.flavor = EncodingFlavor::path;
    for (int q = 0; q < e.qubits(); ++q) {
        const ModePair arm{base + 2 * q, base + 2 * q + 1};
        out.elements.emplace_back(PolarizingBeamSplitter{e.pairs[q], arm});
        out.elements.emplace_back(HalfWavePlate{arm, kPi / 4});
        out.encoding.pairs.push_back({e.pairs[q].first, arm.first});
    }
    const PhotonicState widened = tensor(p, vacuum(total - base));
    out.state = apply(compose(out.elements, total), widened);
    return out;
}

}  // namespace lopsim
