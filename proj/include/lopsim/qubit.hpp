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
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lopsim/fock.hpp"
#include "lopsim/rng.hpp"

namespace lopsim {

/// Normalized dense state of n qubits. Qubit 0 is the most significant bit of the
/// basis index, so index 0b10 of a two-qubit state is |10> (qubit 0 set).
class LogicalState {
   public:
    static constexpr double kNormTolerance = 1e-10;

    LogicalState() : LogicalState(0, {Complex{1.0, 0.0}}) {}

    /// Amplitudes in binary order; their norm must be 1 within kNormTolerance.
    static LogicalState from_amplitudes(std::vector<Complex> amplitudes);
    /// Rescales any nonzero vector to unit norm.
    static LogicalState normalized(std::vector<Complex> amplitudes);
    static LogicalState basis(int qubits, std::uint64_t index);
    /// "10" -> |10>.
    static LogicalState from_bits(std::string_view bits);

    int qubits() const { return n_; }
    std::size_t dimension() const { return amps_.size(); }
    const std::vector<Complex> &amplitudes() const { return amps_; }
    Complex operator[](std::size_t index) const { return amps_[index]; }

   private:
    LogicalState(int n, std::vector<Complex> amps) : n_(n), amps_(std::move(amps)) {}
    int n_;
    std::vector<Complex> amps_;
};

/// <a|b>.
Complex inner_product(const LogicalState &a, const LogicalState &b);
/// |<a|b>|, which ignores global phase.
double overlap(const LogicalState &a, const LogicalState &b);
LogicalState tensor(const LogicalState &a, const LogicalState &b);

/// Qubit `keep` order of a product state; throws std::domain_error when the kept
/// qubits are entangled with the rest.
LogicalState extract_factor(const LogicalState &s, std::span<const int> keep);

namespace gates {
Eigen::Matrix2cd identity();
Eigen::Matrix2cd hadamard();
Eigen::Matrix2cd pauli_x();
Eigen::Matrix2cd pauli_y();
Eigen::Matrix2cd pauli_z();
/// diag(1, exp(i theta)).
Eigen::Matrix2cd phase(double theta);
/// Basis order |control target>.
Eigen::Matrix4cd cnot();
Eigen::Matrix4cd cz();
}  // namespace gates

/// Mutable dense simulator used by the teleportation and cluster layers. Unlike
/// LogicalState it may hold unnormalized (post-selected) vectors.
class QubitRegister {
   public:
    explicit QubitRegister(int qubits);
    explicit QubitRegister(const LogicalState &s);

    int qubits() const { return n_; }
    const std::vector<Complex> &amplitudes() const { return amps_; }
    double norm_squared() const;

    void apply(int q, const Eigen::Matrix2cd &u);
    /// `u` acts on the pair in basis order |q1 q2>.
    void apply(int q1, int q2, const Eigen::Matrix4cd &u);
    void x(int q) { apply(q, gates::pauli_x()); }
    void z(int q) { apply(q, gates::pauli_z()); }
    void h(int q) { apply(q, gates::hadamard()); }
    void cz(int a, int b);
    void cnot(int control, int target);

    /// Squared norm of the component with qubit q equal to `bit`.
    double probability(int q, int bit) const;
    /// Zeroes the component with qubit q != bit, without renormalizing.
    void project(int q, int bit);
    /// Projective Z measurement; collapses and renormalizes.
    int measure(int q, Rng &rng);

    /// Contracts qubit q with <ket| and removes it from the register.
    void contract(int q, const Eigen::Vector2cd &ket);
    /// Appends the qubits of `s` after the existing ones.
    void append(const LogicalState &s);

    void normalize();
    LogicalState state() const;

   private:
    void check_qubit(int q) const;
    std::uint64_t mask(int q) const { return std::uint64_t{1} << (n_ - 1 - q); }

    int n_;
    std::vector<Complex> amps_;
};

}  // namespace lopsim
