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

#include "lopsim/interferometer.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "lopsim/permanent.hpp"

namespace lopsim {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_mode(int mode, int total_modes) {
    if (mode < 0 || mode >= total_modes) {
        throw std::domain_error("mode index " + std::to_string(mode) + " out of range [0, " +
                                std::to_string(total_modes) + ")");
    }
}

void check_distinct(std::initializer_list<int> modes) {
    for (auto i = modes.begin(); i != modes.end(); ++i) {
        for (auto j = std::next(i); j != modes.end(); ++j) {
            if (*i == *j) {
                throw std::domain_error("element uses mode " + std::to_string(*i) + " twice");
            }
        }
    }
}

void check_finite(double v, const char *what) {
    if (!std::isfinite(v)) {
        throw std::domain_error(std::string(what) + " must be finite");
    }
}

void embed(Eigen::MatrixXcd &m, ModePair p, const Eigen::Matrix2cd &block) {
    m(p.first, p.first) = block(0, 0);
    m(p.first, p.second) = block(0, 1);
    m(p.second, p.first) = block(1, 0);
    m(p.second, p.second) = block(1, 1);
}

double factorial(int n) {
    double f = 1;
    for (int k = 2; k <= n; ++k) {
        f *= k;
    }
    return f;
}

double occupation_factorials(const std::vector<int> &occ) {
    double f = 1;
    for (int n : occ) {
        f *= factorial(n);
    }
    return f;
}

// Mode index repeated once per photon.
std::vector<int> photon_modes(const std::vector<int> &occ) {
    std::vector<int> out;
    for (std::size_t m = 0; m < occ.size(); ++m) {
        out.insert(out.end(), occ[m], static_cast<int>(m));
    }
    return out;
}

}  // namespace

ModeUnitary::ModeUnitary(Eigen::MatrixXcd matrix) : m_(std::move(matrix)) {
    if (m_.rows() != m_.cols()) {
        throw std::domain_error("mode unitary must be square");
    }
    Eigen::MatrixXcd gram = m_ * m_.adjoint();
    gram -= Eigen::MatrixXcd::Identity(m_.rows(), m_.cols());
    if (m_.size() > 0 && gram.cwiseAbs().maxCoeff() > kUnitarityTolerance) {
        throw std::domain_error("matrix is not unitary (max |UU^dag - I| = " +
                                std::to_string(gram.cwiseAbs().maxCoeff()) + ")");
    }
}

ModeUnitary ModeUnitary::identity(int modes) {
    return ModeUnitary(Eigen::MatrixXcd::Identity(modes, modes));
}

ModeUnitary ModeUnitary::after(const ModeUnitary &first) const {
    if (first.modes() != modes()) {
        throw std::domain_error("composing unitaries of different dimension");
    }
    return ModeUnitary(m_ * first.m_);
}

Eigen::Matrix2cd half_wave_jones(double theta) {
    double c = std::cos(2 * theta);
    double s = std::sin(2 * theta);
    Eigen::Matrix2cd j;
    j << c, s, s, -c;
    return j;
}

Eigen::Matrix2cd quarter_wave_jones(double theta) {
    double c = std::cos(theta);
    double s = std::sin(theta);
    Complex off = c * s * Complex(1.0, -1.0);
    Eigen::Matrix2cd j;
    j << Complex(c * c, s * s), off, off, Complex(s * s, c * c);
    return j;
}

ModeUnitary element_unitary(const OpticalElement &e, int total_modes) {
    if (total_modes < 0) {
        throw std::domain_error("negative mode count");
    }
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(total_modes, total_modes);
    std::visit(
        [&](const auto &el) {
            using T = std::decay_t<decltype(el)>;
            if constexpr (std::is_same_v<T, BeamSplitter>) {
                check_mode(el.a, total_modes);
                check_mode(el.b, total_modes);
                check_distinct({el.a, el.b});
                if (!(el.reflectivity >= 0.0 && el.reflectivity <= 1.0)) {
                    throw std::domain_error("reflectivity must lie in [0, 1]");
                }
                double t = std::sqrt(1.0 - el.reflectivity);
                double r = std::sqrt(el.reflectivity);
                Eigen::Matrix2cd block;
                block << t, kI * r, kI * r, t;
                embed(m, {el.a, el.b}, block);
            } else if constexpr (std::is_same_v<T, PhaseShift>) {
                check_mode(el.mode, total_modes);
                check_finite(el.phi, "phase");
                m(el.mode, el.mode) = std::polar(1.0, el.phi);
            } else if constexpr (std::is_same_v<T, HalfWavePlate> ||
                                 std::is_same_v<T, QuarterWavePlate>) {
                check_mode(el.pair.first, total_modes);
                check_mode(el.pair.second, total_modes);
                check_distinct({el.pair.first, el.pair.second});
                check_finite(el.theta, "waveplate angle");
                embed(m, el.pair,
                      std::is_same_v<T, HalfWavePlate> ? half_wave_jones(el.theta)
                                                       : quarter_wave_jones(el.theta));
            } else if constexpr (std::is_same_v<T, PolarizingBeamSplitter>) {
                for (int mode : {el.first.first, el.first.second, el.second.first, el.second.second}) {
                    check_mode(mode, total_modes);
                }
                check_distinct({el.first.first, el.first.second, el.second.first, el.second.second});
                // V of each input leaves through the other port; H is untouched.
                int v1 = el.first.second;
                int v2 = el.second.second;
                m(v1, v1) = 0;
                m(v2, v2) = 0;
                m(v1, v2) = 1;
                m(v2, v1) = 1;
            } else if constexpr (std::is_same_v<T, ModeSwap>) {
                check_mode(el.a, total_modes);
                check_mode(el.b, total_modes);
                check_distinct({el.a, el.b});
                m(el.a, el.a) = 0;
                m(el.b, el.b) = 0;
                m(el.a, el.b) = 1;
                m(el.b, el.a) = 1;
            }
        },
        e);
    return ModeUnitary(std::move(m));
}

ModeUnitary compose(std::span<const OpticalElement> elements, int total_modes) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(total_modes, total_modes);
    for (const auto &e : elements) {
        m = element_unitary(e, total_modes).matrix() * m;
    }
    return ModeUnitary(std::move(m));
}

std::vector<OpticalElement> remap_modes(std::span<const OpticalElement> elements,
                                        std::span<const int> mapping) {
    auto map = [&](int mode) {
        if (mode < 0 || static_cast<std::size_t>(mode) >= mapping.size()) {
            throw std::domain_error("mode " + std::to_string(mode) + " has no mapping");
        }
        return mapping[mode];
    };
    auto map_pair = [&](ModePair p) { return ModePair{map(p.first), map(p.second)}; };
    std::vector<OpticalElement> out;
    out.reserve(elements.size());
    for (const auto &e : elements) {
        out.push_back(std::visit(
            [&](auto el) -> OpticalElement {
                using T = decltype(el);
                if constexpr (std::is_same_v<T, BeamSplitter> || std::is_same_v<T, ModeSwap>) {
                    el.a = map(el.a);
                    el.b = map(el.b);
                } else if constexpr (std::is_same_v<T, PhaseShift>) {
                    el.mode = map(el.mode);
                } else if constexpr (std::is_same_v<T, PolarizingBeamSplitter>) {
                    el.first = map_pair(el.first);
                    el.second = map_pair(el.second);
                } else {
                    el.pair = map_pair(el.pair);
                }
                return el;
            },
            e));
    }
    return out;
}

std::vector<OpticalElement> synthesize_network(const Eigen::MatrixXcd &u) {
    ModeUnitary checked(u);
    const int n = checked.modes();
    Eigen::MatrixXcd w = u;

    struct Nulling {
        int a;
        int b;
        double reflectivity;
        double phi;
    };
    std::vector<Nulling> steps;

    // Left-multiply by T = BS(a,b,R) * P_a(phi) until w is diagonal.
    for (int c = 0; c + 1 < n; ++c) {
        for (int j = n - 1; j > c; --j) {
            Complex va = w(c, c);
            Complex vb = w(j, c);
            if (std::abs(vb) < 1e-15) {
                continue;
            }
            double rho2 = std::norm(va) + std::norm(vb);
            double refl = std::norm(vb) / rho2;
            double phi = std::abs(va) < 1e-15 ? 0.0 : std::arg(vb) - std::arg(va) + std::numbers::pi / 2;
            Eigen::MatrixXcd t = (element_unitary(BeamSplitter{c, j, refl}, n).matrix() *
                                  element_unitary(PhaseShift{c, phi}, n).matrix());
            w = t * w;
            w(j, c) = 0;
            steps.push_back({c, j, refl, phi});
        }
    }

    std::vector<OpticalElement> out;
    for (int m = 0; m < n; ++m) {
        double phase = std::arg(w(m, m));
        if (std::abs(phase) > 0) {
            out.emplace_back(PhaseShift{m, phase});
        }
    }
    // u = T_1^-1 ... T_K^-1 D, and T^-1 = P_a(-phi) P_b(pi) BS P_b(pi).
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
        out.emplace_back(PhaseShift{it->b, std::numbers::pi});
        out.emplace_back(BeamSplitter{it->a, it->b, it->reflectivity});
        out.emplace_back(PhaseShift{it->b, std::numbers::pi});
        if (it->phi != 0.0) {
            out.emplace_back(PhaseShift{it->a, -it->phi});
        }
    }
    return out;
}

std::vector<std::vector<int>> compositions(int photons, int modes) {
    std::vector<std::vector<int>> out;
    if (modes <= 0) {
        if (photons == 0) {
            out.emplace_back();
        }
        return out;
    }
    std::vector<int> current(modes, 0);
    // Depth-first with increasing count in each leading mode gives lexicographic order.
    auto recurse = [&](auto &&self, int mode, int remaining) -> void {
        if (mode == modes - 1) {
            current[mode] = remaining;
            out.push_back(current);
            return;
        }
        for (int k = 0; k <= remaining; ++k) {
            current[mode] = k;
            self(self, mode + 1, remaining - k);
        }
    };
    recurse(recurse, 0, photons);
    return out;
}

PhotonicState apply(const ModeUnitary &u, const PhotonicState &s) {
    if (static_cast<std::size_t>(u.modes()) != s.mode_count()) {
        throw std::domain_error("unitary acts on " + std::to_string(u.modes()) +
                                " modes but state has " + std::to_string(s.mode_count()));
    }
    const int m = u.modes();
    std::unordered_map<int, std::vector<std::vector<int>>> sectors;
    PhotonicState::TermMap out;
    for (const auto &[input, coeff] : s.terms()) {
        const int n = input.photon_number();
        auto it = sectors.find(n);
        if (it == sectors.end()) {
            it = sectors.emplace(n, compositions(n, m)).first;
        }
        const std::vector<int> cols = photon_modes(input.occupations());
        const double in_norm = occupation_factorials(input.occupations());
        Eigen::MatrixXcd sub(n, n);
        for (const auto &output : it->second) {
            const std::vector<int> rows = photon_modes(output);
            for (int r = 0; r < n; ++r) {
                for (int c = 0; c < n; ++c) {
                    sub(r, c) = u(rows[r], cols[c]);
                }
            }
            Complex amp = permanent(sub) / std::sqrt(in_norm * occupation_factorials(output));
            if (amp != Complex{}) {
                out[FockBasisState(output)] += coeff * amp;
            }
        }
    }
    return PhotonicState(s.mode_count(), std::move(out));
}

std::map<FockBasisState, double> distinguishable_distribution(const ModeUnitary &u,
                                                              const FockBasisState &input) {
    if (static_cast<std::size_t>(u.modes()) != input.mode_count()) {
        throw std::domain_error("unitary and input differ in mode count");
    }
    const int n = input.photon_number();
    const std::vector<int> cols = photon_modes(input.occupations());
    Eigen::MatrixXcd sub(n, n);
    std::map<FockBasisState, double> out;
    for (const auto &output : compositions(n, u.modes())) {
        const std::vector<int> rows = photon_modes(output);
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c) {
                sub(r, c) = std::norm(u(rows[r], cols[c]));
            }
        }
        double p = permanent(sub).real() / occupation_factorials(output);
        if (p > 0) {
            out.emplace(FockBasisState(output), p);
        }
    }
    return out;
}

double hom_coincidence(double reflectivity, double overlap) {
    if (!(reflectivity >= 0.0 && reflectivity <= 1.0)) {
        throw std::domain_error("reflectivity must lie in [0, 1]");
    }
    if (!(overlap >= 0.0 && overlap <= 1.0)) {
        throw std::domain_error("overlap must lie in [0, 1]");
    }
    const double r2 = reflectivity;
    const double t2 = 1.0 - reflectivity;
    const double x2 = overlap * overlap;
    const double indistinguishable = (t2 - r2) * (t2 - r2);
    const double distinguishable = t2 * t2 + r2 * r2;
    return x2 * indistinguishable + (1.0 - x2) * distinguishable;
}

}  // namespace lopsim
