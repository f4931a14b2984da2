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

#include <stdexcept>
#include <vector>

#include "lopsim/fock.hpp"
#include "test_support.hpp"

namespace lopsim {
namespace {

TEST(FockBasisState, PhotonNumberAndOrder) {
    const FockBasisState a({1, 0, 2});
    EXPECT_EQ(a.photon_number(), 3);
    EXPECT_EQ(a.mode_count(), 3u);
    EXPECT_LT(FockBasisState({0, 2}), FockBasisState({1, 0}));
    EXPECT_LT(FockBasisState({1, 0}), FockBasisState({1, 1}));
}

TEST(FockBasisState, NegativeCountRejected) {
    EXPECT_THROW(make_basis_state({1, -1}), std::domain_error);
}

TEST(PhotonicState, BasisAndVacuum) {
    const PhotonicState s = make_basis_state({1, 1});
    EXPECT_EQ(s.size(), 1u);
    EXPECT_EQ(s.amplitude({1, 1}), Complex(1.0));
    EXPECT_EQ(s.amplitude({2, 0}), Complex(0.0));
    const PhotonicState v = vacuum(3);
    EXPECT_EQ(v.amplitude({0, 0, 0}), Complex(1.0));
    EXPECT_EQ(total_photon_number(v), 0);
}

TEST(PhotonicState, PrunesTinyAmplitudes) {
    PhotonicState::TermMap t;
    t[FockBasisState({1, 0})] = 1.0;
    t[FockBasisState({0, 1})] = 1e-13;
    const PhotonicState s(2, t);
    EXPECT_EQ(s.size(), 1u);
}

TEST(PhotonicState, ModeMismatchRejected) {
    PhotonicState::TermMap t;
    t[FockBasisState({1, 0, 0})] = 1.0;
    EXPECT_THROW(PhotonicState(2, t), std::domain_error);
}

TEST(PhotonicState, NormalizeAndScale) {
    const PhotonicState s = superpose(make_basis_state({1, 0}), 3.0, make_basis_state({0, 1}), Complex(0, 4));
    EXPECT_NEAR(s.norm(), 5.0, 1e-14);
    const PhotonicState n = s.normalized();
    EXPECT_NEAR(n.norm_squared(), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(n.amplitude({0, 1}) - Complex(0, 0.8)), 0.0, 1e-14);
    EXPECT_THROW(PhotonicState(2).normalized(), std::domain_error);
    EXPECT_NEAR(std::abs(n.scaled(Complex(0, 1)).amplitude({1, 0}) - Complex(0, 0.6)), 0.0, 1e-14);
}

TEST(PhotonicState, SuperposeCancels) {
    const PhotonicState a = make_basis_state({1, 0});
    EXPECT_TRUE(superpose(a, 1.0, a, -1.0).empty());
}

TEST(PhotonicState, InnerProductIsConjugateLinearInFirst) {
    const PhotonicState a = make_basis_state({1, 0}).scaled(Complex(0, 1));
    const PhotonicState b = make_basis_state({1, 0});
    EXPECT_EQ(inner_product(a, b), Complex(0, -1));
    EXPECT_EQ(inner_product(a, make_basis_state({0, 1})), Complex(0));
}

TEST(PhotonicState, TensorAppendsModes) {
    const PhotonicState a = superpose(make_basis_state({1}), 1.0, make_basis_state({0}), 1.0).normalized();
    const PhotonicState t = tensor(a, make_basis_state({0, 2}));
    EXPECT_EQ(t.mode_count(), 3u);
    EXPECT_NEAR(std::abs(t.amplitude({1, 0, 2})), std::sqrt(0.5), 1e-14);
    EXPECT_NEAR(t.norm_squared(), 1.0, 1e-14);
    EXPECT_EQ(total_photon_number(t), std::nullopt);
}

TEST(PhotonicState, DiscardNeedsFactorization) {
    const PhotonicState s =
        superpose(make_basis_state({1, 0, 1}), 1.0, make_basis_state({0, 1, 1}), 1.0).normalized();
    const std::vector<int> last = {2};
    const PhotonicState d = discard_modes(s, last);
    EXPECT_EQ(d.mode_count(), 2u);
    EXPECT_NEAR(std::abs(d.amplitude({1, 0})), std::sqrt(0.5), 1e-14);
    const std::vector<int> first = {0};
    EXPECT_THROW(discard_modes(s, first), std::domain_error);
}

TEST(PhotonicState, ProjectKeepsMatchingTerms) {
    const PhotonicState s =
        superpose(make_basis_state({1, 0, 1}), 1.0, make_basis_state({0, 1, 1}), 1.0).normalized();
    const std::vector<int> modes = {0};
    const std::vector<int> counts = {1};
    const PhotonicState p = project_modes(s, modes, counts);
    EXPECT_EQ(p.size(), 1u);
    EXPECT_NEAR(p.norm_squared(), 0.5, 1e-14);
}

TEST(PhotonicState, RandomTensorNormsMultiply) {
    testing::Gen gen(3);
    for (int i = 0; i < 30; ++i) {
        const PhotonicState a = gen.photonic(gen.integer(1, 3), gen.integer(0, 3), 4).scaled(gen.uniform(0.5, 2));
        const PhotonicState b = gen.photonic(gen.integer(1, 3), gen.integer(0, 3), 4).scaled(gen.uniform(0.5, 2));
        EXPECT_NEAR(tensor(a, b).norm_squared(), a.norm_squared() * b.norm_squared(), 1e-12);
    }
}

}  // namespace
}  // namespace lopsim
