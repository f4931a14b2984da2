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

#include "lopsim/qubit.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lopsim {

namespace {

int log2_exact(std::size_t dim) {
    int n = 0;
    while ((std::size_t{1} << n) < dim) {
        ++n;
    }
    if ((std::size_t{1} << n) != dim) {
        throw std::domain_error("amplitude count " + std::to_string(dim) + " is not a power of two");
    }
    return n;
}

double squared_norm(const std::vector<Complex> &v) {
    double total = 0;
    for (const auto &a : v) {
        total += std::norm(a);
    }
    return total;
}

}  // namespace

LogicalState LogicalState::from_amplitudes(std::vector<Complex> amplitudes) {
    const int n = log2_exact(amplitudes.size());
    const double norm2 = squared_norm(amplitudes);
    if (std::abs(norm2 - 1.0) > kNormTolerance) {
        throw std::domain_error("logical state is not normalized (norm^2 = " + std::to_string(norm2) + ")");
    }
    const double scale = 1.0 / std::sqrt(norm2);
    for (auto &a : amplitudes) {
        a *= scale;
    }
    return LogicalState(n, std::move(amplitudes));
}

LogicalState LogicalState::normalized(std::vector<Complex> amplitudes) {
    const int n = log2_exact(amplitudes.size());
    const double norm2 = squared_norm(amplitudes);
    if (norm2 == 0.0) {
        throw std::domain_error("cannot normalize the zero vector");
    }
    const double scale = 1.0 / std::sqrt(norm2);
    for (auto &a : amplitudes) {
        a *= scale;
    }
    return LogicalState(n, std::move(amplitudes));
}

LogicalState LogicalState::basis(int qubits, std::uint64_t index) {
    if (qubits < 0 || qubits > 30) {
        throw std::domain_error("unsupported qubit count");
    }
    std::vector<Complex> amps(std::size_t{1} << qubits);
    if (index >= amps.size()) {
        throw std::domain_error("basis index out of range");
    }
    amps[index] = 1.0;
    return LogicalState(qubits, std::move(amps));
}

LogicalState LogicalState::from_bits(std::string_view bits) {
    std::uint64_t index = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw std::domain_error("basis string may only contain 0 and 1");
        }
        index = (index << 1) | static_cast<std::uint64_t>(c - '0');
    }
    return basis(static_cast<int>(bits.size()), index);
}

Complex inner_product(const LogicalState &a, const LogicalState &b) {
    if (a.qubits() != b.qubits()) {
        throw std::domain_error("qubit count mismatch");
    }
    Complex total{};
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        total += std::conj(a[i]) * b[i];
    }
    return total;
}

double overlap(const LogicalState &a, const LogicalState &b) { return std::abs(inner_product(a, b)); }

LogicalState tensor(const LogicalState &a, const LogicalState &b) {
    std::vector<Complex> amps;
    amps.reserve(a.dimension() * b.dimension());
    for (const auto &x : a.amplitudes()) {
        for (const auto &y : b.amplitudes()) {
            amps.push_back(x * y);
        }
    }
    return LogicalState::normalized(std::move(amps));
}

LogicalState extract_factor(const LogicalState &s, std::span<const int> keep) {
    const int n = s.qubits();
    std::vector<bool> kept(n, false);
    for (int q : keep) {
        if (q < 0 || q >= n || kept[q]) {
            throw std::domain_error("invalid qubit list for factor extraction");
        }
        kept[q] = true;
    }
    std::vector<int> rest;
    for (int q = 0; q < n; ++q) {
        if (!kept[q]) {
            rest.push_back(q);
        }
    }
    const std::size_t dk = std::size_t{1} << keep.size();
    const std::size_t dr = std::size_t{1} << rest.size();
    auto global_index = [&](std::size_t r, std::size_t k) {
        std::uint64_t idx = 0;
        for (std::size_t i = 0; i < keep.size(); ++i) {
            if ((k >> (keep.size() - 1 - i)) & 1) {
                idx |= std::uint64_t{1} << (n - 1 - keep[i]);
            }
        }
        for (std::size_t i = 0; i < rest.size(); ++i) {
            if ((r >> (rest.size() - 1 - i)) & 1) {
                idx |= std::uint64_t{1} << (n - 1 - rest[i]);
            }
        }
        return idx;
    };

    // Rank-1 check on the rest x keep reshaping.
    Eigen::MatrixXcd m(dr, dk);
    for (std::size_t r = 0; r < dr; ++r) {
        for (std::size_t k = 0; k < dk; ++k) {
            m(r, k) = s[global_index(r, k)];
        }
    }
    Eigen::Index best = 0;
    m.rowwise().squaredNorm().maxCoeff(&best);
    Eigen::RowVectorXcd factor = m.row(best).normalized();
    Eigen::MatrixXcd residual = m - (m * factor.adjoint()) * factor;
    if (residual.norm() > 1e-8) {
        throw std::domain_error("qubits are entangled with the rest of the register");
    }
    std::vector<Complex> amps(factor.data(), factor.data() + factor.size());
    return LogicalState::normalized(std::move(amps));
}

namespace gates {

Eigen::Matrix2cd identity() { return Eigen::Matrix2cd::Identity(); }

Eigen::Matrix2cd hadamard() {
    Eigen::Matrix2cd m;
    m << 1, 1, 1, -1;
    return m / std::numbers::sqrt2;
}

Eigen::Matrix2cd pauli_x() {
    Eigen::Matrix2cd m;
    m << 0, 1, 1, 0;
    return m;
}

Eigen::Matrix2cd pauli_y() {
    Eigen::Matrix2cd m;
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

Eigen::Matrix2cd pauli_z() {
    Eigen::Matrix2cd m;
    m << 1, 0, 0, -1;
    return m;
}

Eigen::Matrix2cd phase(double theta) {
    Eigen::Matrix2cd m;
    m << 1, 0, 0, std::polar(1.0, theta);
    return m;
}

Eigen::Matrix4cd cnot() {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = m(1, 1) = 1;
    m(2, 3) = m(3, 2) = 1;
    return m;
}

Eigen::Matrix4cd cz() {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
    m(3, 3) = -1;
    return m;
}

}  // namespace gates

QubitRegister::QubitRegister(int qubits) : n_(qubits) {
    if (qubits < 0 || qubits > 30) {
        throw std::domain_error("unsupported qubit count");
    }
    amps_.assign(std::size_t{1} << qubits, Complex{});
    amps_[0] = 1.0;
}

QubitRegister::QubitRegister(const LogicalState &s) : n_(s.qubits()), amps_(s.amplitudes()) {}

double QubitRegister::norm_squared() const { return squared_norm(amps_); }

void QubitRegister::check_qubit(int q) const {
    if (q < 0 || q >= n_) {
        throw std::domain_error("qubit " + std::to_string(q) + " out of range for " +
                                std::to_string(n_) + "-qubit register");
    }
}

void QubitRegister::apply(int q, const Eigen::Matrix2cd &u) {
    check_qubit(q);
    const std::uint64_t bit = mask(q);
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
        if (i & bit) {
            continue;
        }
        const Complex a0 = amps_[i];
        const Complex a1 = amps_[i | bit];
        amps_[i] = u(0, 0) * a0 + u(0, 1) * a1;
        amps_[i | bit] = u(1, 0) * a0 + u(1, 1) * a1;
    }
}

void QubitRegister::apply(int q1, int q2, const Eigen::Matrix4cd &u) {
    check_qubit(q1);
    check_qubit(q2);
    if (q1 == q2) {
        throw std::domain_error("two-qubit gate on a single qubit");
    }
    const std::uint64_t b1 = mask(q1);
    const std::uint64_t b2 = mask(q2);
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
        if (i & (b1 | b2)) {
            continue;
        }
        const std::uint64_t idx[4] = {i, i | b2, i | b1, i | b1 | b2};
        Complex in[4];
        for (int k = 0; k < 4; ++k) {
            in[k] = amps_[idx[k]];
        }
        for (int r = 0; r < 4; ++r) {
            Complex acc{};
            for (int c = 0; c < 4; ++c) {
                acc += u(r, c) * in[c];
            }
            amps_[idx[r]] = acc;
        }
    }
}

void QubitRegister::cz(int a, int b) {
    check_qubit(a);
    check_qubit(b);
    if (a == b) {
        throw std::domain_error("CZ needs two distinct qubits");
    }
    const std::uint64_t both = mask(a) | mask(b);
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
        if ((i & both) == both) {
            amps_[i] = -amps_[i];
        }
    }
}

void QubitRegister::cnot(int control, int target) { apply(control, target, gates::cnot()); }

double QubitRegister::probability(int q, int bit) const {
    check_qubit(q);
    const std::uint64_t b = mask(q);
    double p = 0;
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
        if (((i & b) != 0) == (bit != 0)) {
            p += std::norm(amps_[i]);
        }
    }
    return p;
}

void QubitRegister::project(int q, int bit) {
    check_qubit(q);
    const std::uint64_t b = mask(q);
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
        if (((i & b) != 0) != (bit != 0)) {
            amps_[i] = 0;
        }
    }
}

int QubitRegister::measure(int q, Rng &rng) {
    const double p1 = probability(q, 1) / norm_squared();
    const int bit = rng.uniform() < p1 ? 1 : 0;
    project(q, bit);
    normalize();
    return bit;
}

void QubitRegister::contract(int q, const Eigen::Vector2cd &ket) {
    check_qubit(q);
    const int low = n_ - 1 - q;  // bit position of q
    std::vector<Complex> out(amps_.size() / 2);
    for (std::uint64_t r = 0; r < out.size(); ++r) {
        const std::uint64_t hi = (r >> low) << (low + 1);
        const std::uint64_t lo = r & ((std::uint64_t{1} << low) - 1);
        const std::uint64_t i0 = hi | lo;
        const std::uint64_t i1 = i0 | (std::uint64_t{1} << low);
        out[r] = std::conj(ket(0)) * amps_[i0] + std::conj(ket(1)) * amps_[i1];
    }
    amps_ = std::move(out);
    --n_;
}

void QubitRegister::append(const LogicalState &s) {
    if (n_ + s.qubits() > 30) {
        throw std::domain_error("register too large");
    }
    std::vector<Complex> out;
    out.reserve(amps_.size() * s.dimension());
    for (const auto &x : amps_) {
        for (const auto &y : s.amplitudes()) {
            out.push_back(x * y);
        }
    }
    amps_ = std::move(out);
    n_ += s.qubits();
}

void QubitRegister::normalize() {
    const double norm2 = norm_squared();
    if (norm2 == 0.0) {
        throw std::domain_error("cannot normalize the zero vector");
    }
    const double scale = 1.0 / std::sqrt(norm2);
    for (auto &a : amps_) {
        a *= scale;
    }
}

LogicalState QubitRegister::state() const { return LogicalState::normalized(amps_); }

}  // namespace lopsim
