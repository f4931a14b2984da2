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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits nonzero if any
// criterion fails or exceeds its time budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "lopsim/cluster.hpp"
#include "lopsim/encoding.hpp"
#include "lopsim/heralded.hpp"
#include "lopsim/interferometer.hpp"
#include "lopsim/permanent.hpp"
#include "lopsim/teleport.hpp"

namespace {

using namespace lopsim;

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool ok = false;
    std::string detail;
};

std::string fmt(const char *f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

Eigen::MatrixXcd random_unitary(std::mt19937_64 &eng, int n) {
    std::normal_distribution<double> nd;
    Eigen::MatrixXcd m(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            m(r, c) = {nd(eng), nd(eng)};
        }
    }
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
    Eigen::MatrixXcd q = qr.householderQ();
    for (int i = 0; i < n; ++i) {
        const Complex d = qr.matrixQR()(i, i);
        q.col(i) *= d / std::abs(d);
    }
    return q;
}

LogicalState random_qubits(std::mt19937_64 &eng, int n) {
    std::normal_distribution<double> nd;
    std::vector<Complex> a(std::size_t{1} << n);
    for (auto &x : a) {
        x = {nd(eng), nd(eng)};
    }
    return LogicalState::normalized(std::move(a));
}

Outcome hom_null() {
    const PhotonicState out = apply(element_unitary(BeamSplitter{0, 1, 0.5}, 2), make_basis_state({1, 1}));
    const double p = herald(out, {{{0, 1}, {1, 1}}}).probability;
    const double classical = hom_coincidence(0.5, 0.0);
    double dist = 0;
    for (const auto &[occ, q] : distinguishable_distribution(element_unitary(BeamSplitter{0, 1, 0.5}, 2), FockBasisState({1, 1}))) {
        if (occ == FockBasisState({1, 1})) {
            dist = q;
        }
    }
    return {std::abs(p) <= 1e-12 && std::abs(classical - 0.5) <= 1e-12 && std::abs(dist - 0.5) <= 1e-12,
            fmt("P(1,1)=%.3g, x=0 closed form %.15g, distinguishable %.15g", p, classical, dist)};
}

Outcome klm_cnot_check() {
    const HeraldedGate g = klm_cnot();
    double worst_p = 0;
    double worst_overlap = 1;
    for (std::uint64_t in = 0; in < 4; ++in) {
        const LogicalState l = LogicalState::basis(2, in);
        const GateRunResult r = run_heralded(g, l);
        worst_p = std::max(worst_p, std::abs(r.probability - 1.0 / 16));
        QubitRegister want(l);
        want.cnot(0, 1);
        worst_overlap = std::min(worst_overlap, r.logical_action ? overlap(*r.logical_action, want.state()) : 0.0);
    }
    return {worst_p <= 1e-9 && worst_overlap >= 1 - 1e-10,
            fmt("max |P - 1/16| = %.3g, min CNOT overlap 1 - %.3g (8 modes, 4 photons)", worst_p, 1 - worst_overlap)};
}

Outcome ns_check() {
    const HeraldedGate g = ns_gate();
    const PhotonicState in = PhotonicState(1, {{FockBasisState({0}), 0.6}, {FockBasisState({1}), Complex(0, 0.48)},
                                               {FockBasisState({2}), 0.64}});
    const DetectionRecord r = apply_heralded(g, in);
    const std::vector<int> anc = {1, 2};
    const PhotonicState out = discard_modes(r.residual, anc);
    const Complex ratio0 = out.amplitude({0}) / 0.6;
    const Complex ratio2 = out.amplitude({2}) / 0.64;
    const Complex ratio1 = out.amplitude({1}) / Complex(0, 0.48);
    const double flip = std::max(std::abs(ratio2 + ratio0), std::abs(ratio1 - ratio0));
    return {std::abs(r.probability - 0.25) <= 1e-9 && flip <= 1e-10,
            fmt("P = %.15g, |c2'/c2 + c0'/c0| and |c1'/c1 - c0'/c0| <= %.3g", r.probability, flip)};
}

Outcome teleported_cnot_check() {
    const TeleportedCnotBatch b = run_teleported_cnot_trials(LogicalState::from_bits("10"), 100000, 20040101);
    return {b.mean_pairs >= 31.5 && b.mean_pairs <= 32.5 && b.min_overlap >= 1 - 1e-10,
            fmt("mean pairs %.4f over 1e5 trials (mean attempts %.4f), min overlap 1 - %.3g", b.mean_pairs,
                b.mean_attempts, 1 - b.min_overlap)};
}

Outcome teleport_check() {
    std::mt19937_64 eng(5);
    double worst = 1;
    for (int i = 0; i < 100; ++i) {
        const LogicalState in = random_qubits(eng, 1);
        for (BellLabel l : kAllBellLabels) {
            worst = std::min(worst, overlap(teleport_qubit_forced(in, l).output, in));
        }
    }
    return {worst >= 1 - 1e-12, fmt("400 cases, min corrected overlap 1 - %.3g", 1 - worst)};
}

Outcome cluster_check() {
    std::mt19937_64 eng(6);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    auto rz = [](double t) {
        Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
        m(0, 0) = std::polar(1.0, -t / 2);
        m(1, 1) = std::polar(1.0, t / 2);
        return m;
    };
    auto rx = [](double t) {
        Eigen::Matrix2cd m;
        m << std::cos(t / 2), Complex(0, -std::sin(t / 2)), Complex(0, -std::sin(t / 2)), std::cos(t / 2);
        return m;
    };
    double worst = 1;
    for (int trial = 0; trial < 20; ++trial) {
        const double a = ang(eng);
        const double b = ang(eng);
        const double c = ang(eng);
        const Eigen::Vector2cd v = rz(-c) * rx(-b) * rz(-a) * Eigen::Vector2cd(1, 1) / std::sqrt(2.0);
        const LogicalState want = LogicalState::normalized({v(0), v(1)});
        std::vector<MeasurementInstruction> schedule(4);
        const double angles[] = {-a, -b, -c, 0.0};
        for (int i = 0; i < 4; ++i) {
            schedule[static_cast<std::size_t>(i)].node = i;
            schedule[static_cast<std::size_t>(i)].angle = angles[i];
        }
        for (int bits = 0; bits < 16; ++bits) {
            ForcedOutcomes f;
            for (int i = 0; i < 4; ++i) {
                f[i] = (bits >> i) & 1;
            }
            worst = std::min(worst, overlap(run_pattern(linear_cluster(5), schedule, 0, f).output, want));
        }
    }
    int grow_ok = 0;
    std::uniform_int_distribution<int> len(3, 12);
    std::uniform_int_distribution<int> look(0, 3);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = len(eng);
        const ClusterGraph g = linear_cluster(n);
        std::vector<MeasurementInstruction> schedule(static_cast<std::size_t>(n - 1));
        for (int i = 0; i < n - 1; ++i) {
            schedule[static_cast<std::size_t>(i)].node = i;
            schedule[static_cast<std::size_t>(i)].angle = ang(eng);
        }
        const std::uint64_t seed = eng();
        const PatternResult whole = run_pattern(g, schedule, seed);
        const PatternResult grown = grow_while_measuring(g, interleave_schedule(g, schedule, look(eng)), seed);
        bool same = overlap(whole.output, grown.output) >= 1 - 1e-10 && whole.transcript.size() == grown.transcript.size();
        for (std::size_t i = 0; same && i < whole.transcript.size(); ++i) {
            same = whole.transcript[i].raw_outcome == grown.transcript[i].raw_outcome;
        }
        grow_ok += same ? 1 : 0;
    }
    return {worst >= 1 - 1e-10 && grow_ok == 50,
            fmt("20 triples x 16 branches min overlap 1 - %.3g; grow == monolithic on %.0f/50", 1 - worst, grow_ok)};
}

Complex naive_permanent(const Eigen::MatrixXcd &m) {
    std::vector<int> p(static_cast<std::size_t>(m.rows()));
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = static_cast<int>(i);
    }
    Complex total = 0;
    do {
        Complex t = 1;
        for (std::size_t i = 0; i < p.size(); ++i) {
            t *= m(static_cast<Eigen::Index>(i), p[i]);
        }
        total += t;
    } while (std::next_permutation(p.begin(), p.end()));
    return total;
}

Outcome permanent_check() {
    std::mt19937_64 eng(7);
    std::normal_distribution<double> nd;
    std::uniform_int_distribution<int> size(1, 6);
    double worst = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = size(eng);
        Eigen::MatrixXcd m(n, n);
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c) {
                m(r, c) = {nd(eng), nd(eng)};
            }
        }
        const Complex want = naive_permanent(m);
        worst = std::max(worst, std::abs(permanent(m) - want) / std::abs(want));
    }
    double norm_err = 0;
    std::uniform_int_distribution<int> photons(1, 4);
    for (int trial = 0; trial < 20; ++trial) {
        const int k = photons(eng);
        const auto all = compositions(k, 8);
        PhotonicState::TermMap t;
        for (int i = 0; i < 5; ++i) {
            t[FockBasisState(all[eng() % all.size()])] += Complex(nd(eng), nd(eng));
        }
        const PhotonicState in = PhotonicState(8, t).normalized();
        norm_err = std::max(norm_err, std::abs(apply(ModeUnitary(random_unitary(eng, 8)), in).norm_squared() - 1));
    }
    return {worst <= 1e-10 && norm_err <= 1e-10,
            fmt("200 matrices max relative error %.3g; 8-mode norm drift %.3g", worst, norm_err)};
}

Outcome waveplate_check() {
    const double h = phase_insensitive_distance(half_wave_jones(22.5 * kPi / 180), gates::hadamard());
    const double x = phase_insensitive_distance(half_wave_jones(45 * kPi / 180), gates::pauli_x());
    std::mt19937_64 eng(8);
    double worst = 0;
    for (int i = 0; i < 50; ++i) {
        const Eigen::Matrix2cd u = random_unitary(eng, 2);
        worst = std::max(worst, phase_insensitive_distance(waveplate_sequence(decompose_su2(u)), u));
    }
    return {h <= 1e-12 && x <= 1e-12 && worst < 1e-8,
            fmt("hwp(22.5) vs H %.3g, hwp(45) vs X %.3g, QHQ reconstruction max %.3g", h, x, worst)};
}

}  // namespace

int main() {
    struct Criterion {
        const char *name;
        double budget_s;
        std::function<Outcome()> check;
    };
    const Criterion criteria[] = {
        {"1 HOM null", 1, hom_null},
        {"2 KLM CNOT", 10, klm_cnot_check},
        {"3 NS gate", 1, ns_check},
        {"4 teleported CNOT resources", 60, teleported_cnot_check},
        {"5 teleportation", 5, teleport_check},
        {"6 cluster equivalence", 30, cluster_check},
        {"7 permanent engine", 10, permanent_check},
        {"8 waveplate algebra", 1, waveplate_check},
    };
    int failed = 0;
    for (const auto &c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool ok = o.ok && secs < c.budget_s;
        failed += ok ? 0 : 1;
        std::printf("%s  %-30s %s [%.3f s, budget %.0f s]\n", ok ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs,
                    c.budget_s);
    }
    std::printf("%d/8 criteria passed\n", 8 - failed);
    return failed == 0 ? 0 : 1;
}
