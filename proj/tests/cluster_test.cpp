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
#include <numbers>
#include <stdexcept>

#include "lopsim/cluster.hpp"
#include "test_support.hpp"

namespace lopsim {
namespace {

using testing::Gen;

constexpr double kPi = std::numbers::pi;

// Measuring a chain node at angle a in the basis (|0> +- e^{-ia}|1>)/sqrt2 sends its
// state psi to X^s H diag(1, e^{ia}) psi on the next node. Without byproducts four
// measurements give H P(a3) H P(a2) H P(a1) H P(a0) |+>.
LogicalState chain_oracle(const std::vector<double> &angles) {
    Eigen::Vector2cd v(1 / std::sqrt(2.0), 1 / std::sqrt(2.0));
    for (double a : angles) {
        v = gates::hadamard() * gates::phase(a) * v;
    }
    return LogicalState::normalized({v(0), v(1)});
}

std::vector<MeasurementInstruction> chain_schedule(const std::vector<double> &angles) {
    std::vector<MeasurementInstruction> s;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        MeasurementInstruction m;
        m.node = static_cast<int>(i);
        m.angle = angles[i];
        s.push_back(m);
    }
    return s;
}

ForcedOutcomes branch(int bits, int count) {
    ForcedOutcomes f;
    for (int i = 0; i < count; ++i) {
        f[i] = (bits >> i) & 1;
    }
    return f;
}

TEST(ClusterGraph, Validation) {
    const ClusterGraph g = linear_cluster(4);
    EXPECT_EQ(g.edges.size(), 3u);
    EXPECT_TRUE(g.has_edge(2, 1));
    EXPECT_EQ(g.neighbors(1), (std::vector<int>{0, 2}));
    EXPECT_THROW((ClusterGraph{2, {{0, 0}}, {}}).validate(), std::domain_error);
    EXPECT_THROW((ClusterGraph{2, {{0, 1}, {1, 0}}, {}}).validate(), std::domain_error);
    EXPECT_THROW((ClusterGraph{2, {{0, 2}}, {}}).validate(), std::domain_error);
}

TEST(ClusterGraph, BuildMatchesCzOnPlusStates) {
    const LogicalState s = build_cluster(linear_cluster(3));
    QubitRegister r(3);
    for (int q = 0; q < 3; ++q) {
        r.h(q);
    }
    r.cz(0, 1);
    r.cz(1, 2);
    EXPECT_NEAR(overlap(s, r.state()), 1.0, 1e-14);
}

TEST(PauliFrame, XorAndApply) {
    PauliFrame a(3);
    a.flip_x(0);
    a.flip_z(2);
    PauliFrame b(3);
    b.flip_x(0);
    EXPECT_FALSE(a.trivial());
    EXPECT_TRUE((a ^ a).trivial());
    EXPECT_TRUE((a ^ b)[0].trivial());
    Gen gen(71);
    const LogicalState s = gen.logical(3);
    const std::vector<int> nodes = {0, 1, 2};
    EXPECT_NEAR(overlap(apply_frame(apply_frame(s, nodes, a), nodes, a), s), 1.0, 1e-14);
}

TEST(Cluster, LinearRotationAllBranches) {
    Gen gen(72);
    for (int trial = 0; trial < 20; ++trial) {
        const std::vector<double> angles = {gen.uniform(-kPi, kPi), gen.uniform(-kPi, kPi), gen.uniform(-kPi, kPi),
                                            gen.uniform(-kPi, kPi)};
        const LogicalState want = chain_oracle(angles);
        for (int bits = 0; bits < 16; ++bits) {
            const PatternResult r = run_pattern(linear_cluster(5), chain_schedule(angles), 1, branch(bits, 4));
            ASSERT_EQ(r.output_nodes, std::vector<int>{4});
            EXPECT_GE(overlap(r.output, want), 1 - 1e-10) << "trial " << trial << " branch " << bits;
            for (const auto &m : r.transcript) {
                EXPECT_NEAR(m.probability, 0.5, 1e-10);
            }
        }
    }
}

TEST(Cluster, EulerRotationMatchesCircuit) {
    // Angles (-a, -b, -c, 0) give Rz(-c) Rx(-b) Rz(-a) |+> with Rz, Rx the usual
    // exp(-i t sigma / 2) rotations.
    const double a = 0.3;
    const double b = -1.1;
    const double c = 2.0;
    auto rz = [](double t) { return Eigen::Matrix2cd(gates::phase(t) * std::polar(1.0, -t / 2)); };
    auto rx = [&](double t) { return Eigen::Matrix2cd(gates::hadamard() * rz(t) * gates::hadamard()); };
    const Eigen::Vector2cd v = rz(-c) * rx(-b) * rz(-a) * Eigen::Vector2cd(1, 1) / std::sqrt(2.0);
    const LogicalState want = LogicalState::normalized({v(0), v(1)});
    for (int bits = 0; bits < 16; ++bits) {
        const PatternResult r = run_pattern(linear_cluster(5), chain_schedule({-a, -b, -c, 0.0}), 0, branch(bits, 4));
        EXPECT_GE(overlap(r.output, want), 1 - 1e-10);
    }
}

TEST(Cluster, AdaptationIsNeeded) {
    // Without sign adaptation the odd branches leave the wrong rotation.
    const std::vector<double> angles = {0.4, 0.9, -0.7, 0.0};
    auto schedule = chain_schedule(angles);
    for (auto &m : schedule) {
        m.adapt = AdaptMode::none;
    }
    const PatternResult r = run_pattern(linear_cluster(5), schedule, 0, branch(0b0011, 4));
    EXPECT_LT(overlap(r.output, chain_oracle(angles)), 1 - 1e-3);
}

TEST(Cluster, OutcomeAdaptationMatchesFrame) {
    const std::vector<double> angles = {0.4, 0.9, -0.7, 0.2};
    auto schedule = chain_schedule(angles);
    // With referred outcomes the X byproduct on node k is the outcome of node k-1.
    for (int k = 1; k < 4; ++k) {
        schedule[static_cast<std::size_t>(k)].adapt = AdaptMode::outcomes;
        schedule[static_cast<std::size_t>(k)].adapt_on = {k - 1};
    }
    for (int bits = 0; bits < 16; ++bits) {
        const PatternResult r = run_pattern(linear_cluster(5), schedule, 0, branch(bits, 4));
        EXPECT_GE(overlap(r.output, chain_oracle(angles)), 1 - 1e-10) << bits;
    }
}

TEST(Cluster, HorseshoeIsControlledZAfterHadamards) {
    Gen gen(73);
    for (int trial = 0; trial < 10; ++trial) {
        const LogicalState a = gen.logical(1);
        const LogicalState b = gen.logical(1);
        ClusterGraph g = linear_cluster(4);
        g.init[0] = a;
        g.init[3] = b;
        MeasurementInstruction m0;
        m0.node = 0;
        m0.successor = 1;
        MeasurementInstruction m3;
        m3.node = 3;
        m3.successor = 2;
        Eigen::Matrix4cd hh;
        const Eigen::Matrix2cd h = gates::hadamard();
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) {
                hh(r, c) = h(r / 2, c / 2) * h(r % 2, c % 2);
            }
        }
        const LogicalState want = testing::apply_matrix(gates::cz() * hh, tensor(a, b));
        for (int bits = 0; bits < 4; ++bits) {
            const PatternResult r = run_pattern(g, {m0, m3}, 0, {{0, bits & 1}, {3, bits >> 1}});
            ASSERT_EQ(r.output_nodes, (std::vector<int>{1, 2}));
            EXPECT_GE(overlap(r.output, want), 1 - 1e-10);
        }
    }
}

TEST(Cluster, ComputationalMeasurementCutsChain) {
    // Z on node 2 of a 4-chain leaves nodes 0-1 and node 3 disentangled.
    const ClusterGraph g = linear_cluster(4);
    MeasurementInstruction z;
    z.node = 2;
    z.basis = MeasurementBasis::computational;
    for (int s = 0; s < 2; ++s) {
        const PatternResult r = run_pattern(g, {z}, 0, {{2, s}});
        const LogicalState want = tensor(build_cluster(linear_cluster(2)), LogicalState::normalized({1.0, 1.0}));
        EXPECT_GE(overlap(r.output, want), 1 - 1e-12);
        EXPECT_EQ(r.transcript.front().basis, MeasurementBasis::computational);
    }
}

TEST(Cluster, ForcedImpossibleOutcomeThrows) {
    ClusterGraph g{2, {}, {{0, LogicalState::from_bits("0")}}};
    MeasurementInstruction z;
    z.node = 0;
    z.basis = MeasurementBasis::computational;
    z.successor = std::nullopt;
    EXPECT_THROW(run_pattern(g, {z}, 0, {{0, 1}}), std::domain_error);
}

TEST(Cluster, SampledOutcomesReproducible) {
    const auto schedule = chain_schedule({0.1, 0.2, 0.3, 0.4});
    const PatternResult a = run_pattern(linear_cluster(5), schedule, 99);
    const PatternResult b = run_pattern(linear_cluster(5), schedule, 99);
    EXPECT_EQ(a.transcript, b.transcript);
    EXPECT_EQ(a.frame, b.frame);
}

TEST(ClusterSession, MeasuringBeforeBondIsAnError) {
    ClusterSession s(linear_cluster(3));
    s.add_node(0);
    s.add_node(1);
    Rng rng(1);
    MeasurementInstruction m;
    m.node = 0;
    EXPECT_THROW(s.measure(m, rng), ClusterOrderError);
    EXPECT_THROW(grow_while_measuring(linear_cluster(3), {AddNode{0}, m}, 0), ClusterOrderError);
    EXPECT_THROW(s.add_bond(0, 2), std::domain_error);
}

TEST(ClusterSession, LiveQubitCap) {
    ClusterSession s(linear_cluster(kMaxLiveQubits + 1));
    EXPECT_THROW(s.build_all(), std::domain_error);
    // Growing a long chain keeps only a few nodes live.
    const int n = 60;
    std::vector<double> angles(static_cast<std::size_t>(n - 1), 0.3);
    const auto events = interleave_schedule(linear_cluster(n), chain_schedule(angles), 2);
    const PatternResult r = grow_while_measuring(linear_cluster(n), events, 4);
    EXPECT_EQ(r.output_nodes, std::vector<int>{n - 1});
    EXPECT_EQ(static_cast<int>(r.transcript.size()), n - 1);
}

TEST(ClusterSession, BondAfterXByproductBecomesZ) {
    // Grow 0-1, measure 0, then attach node 2: the result must match the monolithic run.
    const ClusterGraph g = linear_cluster(3);
    MeasurementInstruction m;
    m.node = 0;
    m.angle = 0.7;
    const std::vector<GrowEvent> events = {AddNode{0}, AddNode{1}, AddBond{0, 1}, m, AddNode{2}, AddBond{1, 2}};
    for (int s = 0; s < 2; ++s) {
        const PatternResult grown = grow_while_measuring(g, events, 0, {{0, s}});
        const PatternResult whole = run_pattern(g, {m}, 0, {{0, s}});
        EXPECT_GE(overlap(grown.output, whole.output), 1 - 1e-12);
        ASSERT_EQ(grown.transcript.size(), 1u);
        EXPECT_EQ(grown.transcript[0].raw_outcome, whole.transcript[0].raw_outcome);
        EXPECT_EQ(grown.transcript[0].outcome, whole.transcript[0].outcome);
        EXPECT_EQ(grown.transcript[0].angle, whole.transcript[0].angle);
        EXPECT_NEAR(grown.transcript[0].probability, whole.transcript[0].probability, 1e-12);
    }
}

TEST(ClusterSession, GrowthMatchesMonolithicOnRandomCases) {
    Gen gen(74);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = gen.integer(3, 12);
        const bool horseshoe = trial % 5 == 4;
        ClusterGraph g = linear_cluster(n);
        std::vector<MeasurementInstruction> schedule;
        if (horseshoe) {
            g = linear_cluster(4);
            g.init[0] = gen.logical(1);
            g.init[3] = gen.logical(1);
            MeasurementInstruction a;
            a.node = 0;
            a.angle = gen.uniform(-kPi, kPi);
            a.successor = 1;
            MeasurementInstruction b;
            b.node = 3;
            b.angle = gen.uniform(-kPi, kPi);
            b.successor = 2;
            schedule = {a, b};
        } else {
            std::vector<double> angles;
            for (int i = 0; i < n - 1; ++i) {
                angles.push_back(gen.uniform(-kPi, kPi));
            }
            schedule = chain_schedule(angles);
        }
        ForcedOutcomes forced;
        for (const auto &m : schedule) {
            if (gen.uniform() < 0.5) {
                forced[m.node] = gen.integer(0, 1);
            }
        }
        const std::uint64_t seed = gen.u64();
        const PatternResult whole = run_pattern(g, schedule, seed, forced);
        const PatternResult grown =
            grow_while_measuring(g, interleave_schedule(g, schedule, gen.integer(0, 3)), seed, forced);
        ASSERT_EQ(grown.output_nodes, whole.output_nodes) << "trial " << trial;
        EXPECT_GE(overlap(grown.output, whole.output), 1 - 1e-10) << "trial " << trial;
        ASSERT_EQ(grown.transcript.size(), whole.transcript.size());
        for (std::size_t i = 0; i < whole.transcript.size(); ++i) {
            EXPECT_EQ(grown.transcript[i].raw_outcome, whole.transcript[i].raw_outcome);
            EXPECT_EQ(grown.transcript[i].outcome, whole.transcript[i].outcome);
            EXPECT_NEAR(grown.transcript[i].angle, whole.transcript[i].angle, 1e-15);
            EXPECT_NEAR(grown.transcript[i].probability, whole.transcript[i].probability, 1e-10);
        }
    }
}

}  // namespace
}  // namespace lopsim
