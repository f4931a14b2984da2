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

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "lopsim/interferometer.hpp"
#include "test_support.hpp"

namespace lopsim {
namespace {

using testing::Gen;

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXcd hermitian_exp(const Eigen::MatrixXcd &h) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::VectorXcd phases = (Complex(0, 1) * es.eigenvalues().cast<Complex>()).array().exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// exp(i sum_ij H_ij a_i^dag a_j) on the N-photon sector, built from creation and
// annihilation operators in the occupation basis.
Eigen::MatrixXcd fock_space_unitary(const Eigen::MatrixXcd &h, int photons, std::vector<std::vector<int>> &basis) {
    const int modes = static_cast<int>(h.rows());
    basis = compositions(photons, modes);
    std::map<std::vector<int>, int> index;
    for (std::size_t k = 0; k < basis.size(); ++k) {
        index[basis[k]] = static_cast<int>(k);
    }
    const auto dim = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXcd hf = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index s = 0; s < dim; ++s) {
        for (int i = 0; i < modes; ++i) {
            for (int j = 0; j < modes; ++j) {
                std::vector<int> occ = basis[static_cast<std::size_t>(s)];
                if (occ[static_cast<std::size_t>(j)] == 0) {
                    continue;
                }
                double amp = std::sqrt(occ[static_cast<std::size_t>(j)]);
                --occ[static_cast<std::size_t>(j)];
                ++occ[static_cast<std::size_t>(i)];
                amp *= std::sqrt(occ[static_cast<std::size_t>(i)]);
                hf(index.at(occ), s) += h(i, j) * amp;
            }
        }
    }
    return hermitian_exp(hf);
}

TEST(BeamSplitter, SinglePhotonConvention) {
    const double r = 0.3;
    const PhotonicState out = apply(element_unitary(BeamSplitter{0, 1, r}, 2), make_basis_state({1, 0}));
    EXPECT_NEAR(std::abs(out.amplitude({1, 0}) - std::sqrt(1 - r)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(out.amplitude({0, 1}) - Complex(0, std::sqrt(r))), 0.0, 1e-14);
}

TEST(BeamSplitter, HongOuMandelBunching) {
    const PhotonicState out = apply(element_unitary(BeamSplitter{0, 1, 0.5}, 2), make_basis_state({1, 1}));
    EXPECT_NEAR(std::abs(out.amplitude({1, 1})), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(out.amplitude({2, 0}) - Complex(0, std::sqrt(0.5))), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(out.amplitude({0, 2}) - Complex(0, std::sqrt(0.5))), 0.0, 1e-14);
}

TEST(BeamSplitter, TwoPhotonsMatchGeneratorExponential) {
    // A beamsplitter of reflectivity sin^2(t) is exp(i t (a^dag b + b^dag a)).
    for (double t : {0.1, 0.4, kPi / 4, 1.2}) {
        Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2, 2);
        h(0, 1) = h(1, 0) = t;
        std::vector<std::vector<int>> basis;
        const Eigen::MatrixXcd uf = fock_space_unitary(h, 2, basis);
        const ModeUnitary u = element_unitary(BeamSplitter{0, 1, std::sin(t) * std::sin(t)}, 2);
        const PhotonicState out = apply(u, make_basis_state({2, 0}));
        const auto col = static_cast<Eigen::Index>(std::find(basis.begin(), basis.end(), std::vector<int>{2, 0}) - basis.begin());
        for (std::size_t k = 0; k < basis.size(); ++k) {
            EXPECT_NEAR(std::abs(out.amplitude(basis[k]) - uf(static_cast<Eigen::Index>(k), col)), 0.0, 1e-12)
                << "t=" << t;
        }
    }
}

TEST(Interferometer, RandomNetworksMatchGeneratorExponential) {
    Gen gen(11);
    for (int trial = 0; trial < 12; ++trial) {
        const int modes = gen.integer(2, 4);
        const int photons = gen.integer(1, 3);
        Eigen::MatrixXcd h = gen.complex_matrix(modes);
        h = (h + h.adjoint()).eval() / 2.0;
        std::vector<std::vector<int>> basis;
        const Eigen::MatrixXcd uf = fock_space_unitary(h, photons, basis);
        const ModeUnitary u(hermitian_exp(h));
        for (std::size_t s = 0; s < basis.size(); ++s) {
            const PhotonicState out = apply(u, make_basis_state(basis[s]));
            for (std::size_t t = 0; t < basis.size(); ++t) {
                EXPECT_NEAR(std::abs(out.amplitude(basis[t]) -
                                     uf(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(s))),
                            0.0, 1e-10);
            }
        }
    }
}

TEST(Interferometer, PreservesNormAndPhotonNumber) {
    Gen gen(12);
    for (int trial = 0; trial < 20; ++trial) {
        const int photons = gen.integer(1, 4);
        const PhotonicState in = gen.photonic(8, photons, 6);
        const PhotonicState out = apply(ModeUnitary(gen.unitary(8)), in);
        EXPECT_NEAR(out.norm_squared(), 1.0, 1e-10);
        EXPECT_EQ(total_photon_number(out), photons);
    }
}

TEST(Interferometer, PreservesInnerProducts) {
    Gen gen(13);
    for (int trial = 0; trial < 10; ++trial) {
        const ModeUnitary u(gen.unitary(5));
        const PhotonicState a = gen.photonic(5, 3, 5);
        const PhotonicState b = gen.photonic(5, 3, 5);
        EXPECT_NEAR(std::abs(inner_product(apply(u, a), apply(u, b)) - inner_product(a, b)), 0.0, 1e-10);
    }
}

TEST(Interferometer, ComposeAppliesFirstElementFirst) {
    const std::vector<OpticalElement> seq = {PhaseShift{0, 0.7}, BeamSplitter{0, 1, 0.3}};
    const Eigen::MatrixXcd want = element_unitary(seq[1], 2).matrix() * element_unitary(seq[0], 2).matrix();
    EXPECT_LT((compose(seq, 2).matrix() - want).cwiseAbs().maxCoeff(), 1e-14);
    const ModeUnitary a = element_unitary(seq[0], 2);
    const ModeUnitary b = element_unitary(seq[1], 2);
    EXPECT_LT((b.after(a).matrix() - want).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Interferometer, EvolvingTwiceEqualsComposedEvolution) {
    Gen gen(14);
    const ModeUnitary a(gen.unitary(4));
    const ModeUnitary b(gen.unitary(4));
    const PhotonicState in = gen.photonic(4, 3, 4);
    const PhotonicState twice = apply(b, apply(a, in));
    const PhotonicState once = apply(b.after(a), in);
    EXPECT_NEAR(std::abs(inner_product(twice, once)), 1.0, 1e-10);
}

TEST(ModeUnitary, RejectsNonUnitary) {
    EXPECT_THROW(ModeUnitary(Eigen::MatrixXcd::Ones(2, 2)), std::domain_error);
    EXPECT_THROW(ModeUnitary(Eigen::MatrixXcd::Identity(2, 3)), std::domain_error);
}

TEST(Elements, BadParametersRejected) {
    EXPECT_THROW(element_unitary(BeamSplitter{0, 0, 0.5}, 2), std::domain_error);
    EXPECT_THROW(element_unitary(BeamSplitter{0, 2, 0.5}, 2), std::domain_error);
    EXPECT_THROW(element_unitary(BeamSplitter{0, 1, 1.5}, 2), std::domain_error);
    EXPECT_THROW(element_unitary(PhaseShift{-1, 0.0}, 2), std::domain_error);
}

TEST(Waveplates, HalfWaveAtEighthTurnIsHadamard) {
    const Eigen::Matrix2cd hwp = element_unitary(HalfWavePlate{{0, 1}, kPi / 8}, 2).matrix();
    EXPECT_LT(testing::distance_up_to_phase(hwp, gates::hadamard()), 1e-12);
    const Eigen::Matrix2cd x = element_unitary(HalfWavePlate{{0, 1}, kPi / 4}, 2).matrix();
    EXPECT_LT(testing::distance_up_to_phase(x, gates::pauli_x()), 1e-12);
}

TEST(Waveplates, QuarterWaveAtZeroIsPhaseGate) {
    EXPECT_LT(testing::distance_up_to_phase(quarter_wave_jones(0.0), gates::phase(kPi / 2)), 1e-14);
    // Two quarter-wave plates at the same angle make a half-wave plate.
    for (double t : {0.1, 0.5, 1.3}) {
        EXPECT_LT(testing::distance_up_to_phase(quarter_wave_jones(t) * quarter_wave_jones(t), half_wave_jones(t)),
                  1e-12);
    }
}

TEST(PolarizingBeamSplitter, TransmitsHReflectsV) {
    const ModeUnitary u = element_unitary(PolarizingBeamSplitter{polarization_pair(0), polarization_pair(1)}, 4);
    const PhotonicState h = apply(u, make_basis_state({1, 0, 0, 0}));
    EXPECT_NEAR(std::abs(h.amplitude({1, 0, 0, 0})), 1.0, 1e-14);
    const PhotonicState v = apply(u, make_basis_state({0, 1, 0, 0}));
    EXPECT_NEAR(std::abs(v.amplitude({0, 0, 0, 1})), 1.0, 1e-14);
}

TEST(Swap, ExchangesModes) {
    const PhotonicState out = apply(element_unitary(ModeSwap{0, 2}, 3), make_basis_state({2, 1, 0}));
    EXPECT_NEAR(std::abs(out.amplitude({0, 1, 2})), 1.0, 1e-14);
}

TEST(Synthesis, ReproducesRandomUnitaries) {
    Gen gen(15);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = gen.integer(1, 7);
        const Eigen::MatrixXcd u = gen.unitary(n);
        const auto network = synthesize_network(u);
        for (const auto &e : network) {
            EXPECT_TRUE(std::holds_alternative<BeamSplitter>(e) || std::holds_alternative<PhaseShift>(e));
        }
        EXPECT_LT((compose(network, n).matrix() - u).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(Remap, RenamesModes) {
    const std::vector<OpticalElement> seq = {BeamSplitter{0, 1, 0.2}, PhaseShift{1, 0.3}};
    const std::vector<int> map = {2, 0, 1};
    const auto moved = remap_modes(seq, map);
    const Eigen::MatrixXcd a = compose(moved, 3).matrix();
    const Eigen::MatrixXcd b = compose(seq, 3).matrix();
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            EXPECT_NEAR(std::abs(a(map[r], map[c]) - b(r, c)), 0.0, 1e-14);
        }
    }
}

TEST(Compositions, CountIsStarsAndBars) {
    EXPECT_EQ(compositions(3, 4).size(), 20u);
    EXPECT_EQ(compositions(0, 3).size(), 1u);
    const auto c = compositions(2, 2);
    ASSERT_EQ(c.size(), 3u);
    EXPECT_EQ(c.front(), (std::vector<int>{0, 2}));
    EXPECT_EQ(c.back(), (std::vector<int>{2, 0}));
}

TEST(Distinguishable, MatchesClassicalBeamSplitter) {
    const auto d = distinguishable_distribution(element_unitary(BeamSplitter{0, 1, 0.5}, 2), FockBasisState({1, 1}));
    EXPECT_NEAR(d.at(FockBasisState({1, 1})), 0.5, 1e-12);
    EXPECT_NEAR(d.at(FockBasisState({2, 0})), 0.25, 1e-12);
    EXPECT_NEAR(d.at(FockBasisState({0, 2})), 0.25, 1e-12);
}

TEST(Distinguishable, SumsToOne) {
    Gen gen(16);
    for (int trial = 0; trial < 10; ++trial) {
        const ModeUnitary u(gen.unitary(4));
        double total = 0;
        for (const auto &[occ, p] : distinguishable_distribution(u, FockBasisState({1, 0, 2, 1}))) {
            EXPECT_EQ(occ.photon_number(), 4);
            total += p;
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

// Partial distinguishability modelled with a second time bin: photon A in (mode 0,
// bin 0), photon B in (mode 1, x bin 0 + sqrt(1-x^2) bin 1). Modes 0..1 are bin 0,
// modes 2..3 are bin 1; the beamsplitter acts on both bins.
double two_bin_coincidence(double reflectivity, double x) {
    const std::vector<OpticalElement> net = {BeamSplitter{0, 1, reflectivity}, BeamSplitter{2, 3, reflectivity}};
    const PhotonicState in = superpose(make_basis_state({1, 1, 0, 0}), x, make_basis_state({1, 0, 0, 1}),
                                       std::sqrt(1 - x * x));
    const PhotonicState out = apply(compose(net, 4), in);
    double p = 0;
    for (const auto &[basis, amp] : out.terms()) {
        if (basis[0] + basis[2] == 1 && basis[1] + basis[3] == 1) {
            p += std::norm(amp);
        }
    }
    return p;
}

TEST(Hom, ClosedFormMatchesTimeBinModel) {
    for (double r : {0.5, 0.3, 0.9}) {
        for (int k = 0; k <= 10; ++k) {
            const double x = k / 10.0;
            EXPECT_NEAR(hom_coincidence(r, x), two_bin_coincidence(r, x), 1e-12) << "R=" << r << " x=" << x;
        }
    }
    EXPECT_NEAR(hom_coincidence(0.5, 1.0), 0.0, 1e-15);
    EXPECT_NEAR(hom_coincidence(0.5, 0.0), 0.5, 1e-15);
}

}  // namespace
}  // namespace lopsim
