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

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "lopsim/fock.hpp"
#include "lopsim/interferometer.hpp"
#include "lopsim/qubit.hpp"

namespace lopsim {

enum class EncodingFlavor { path, polarization };

/// Logical qubit i is one photon shared by pairs[i] = (|0> rail, |1> rail).
/// For polarization the rails are the H and V modes of one spatial mode.
struct QubitEncoding {
    std::vector<ModePair> pairs;
    EncodingFlavor flavor = EncodingFlavor::path;

    /// Qubit k on modes (2k, 2k+1).
    static QubitEncoding consecutive(int qubits, EncodingFlavor flavor = EncodingFlavor::path);

    int qubits() const { return static_cast<int>(pairs.size()); }
    /// One past the largest mode index used.
    int mode_count() const;
    /// Throws std::domain_error when rails overlap or are negative.
    void validate() const;
};

/// Maps basis string b_1..b_n to one photon in rail b_i of each pair. The result has
/// max(total_modes, e.mode_count()) modes.
PhotonicState encode(const LogicalState &l, const QubitEncoding &e, int total_modes = 0);

struct DecodeResult {
    /// Empty when nothing of the input lies in the dual-rail subspace.
    std::optional<LogicalState> state;
    /// Fraction of the squared norm outside the dual-rail subspace.
    double leakage = 1.0;
};

/// Projects onto one-photon-per-pair configurations with every other mode empty.
DecodeResult decode(const PhotonicState &p, const QubitEncoding &e);

struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double length() const;
};

/// |0> -> +z, (|0>+|1>)/sqrt2 -> +x, (|0>+i|1>)/sqrt2 -> +y.
/// Throws std::domain_error unless `l` holds exactly one qubit.
BlochVector bloch(const LogicalState &l);

/// Bloch vector of the reduced state of qubit q; shorter than 1 when q is
/// entangled with the rest.
BlochVector marginal_bloch(const LogicalState &l, int q);

/// Plate orientations (radians) for quarter-wave, half-wave, quarter-wave in the
/// order the light meets them.
struct WaveplateAngles {
    double first_quarter = 0.0;
    double half = 0.0;
    double last_quarter = 0.0;
};

/// Jones matrix of the sequence: Q(last) * H(half) * Q(first).
Eigen::Matrix2cd waveplate_sequence(const WaveplateAngles &angles);

/// Finds plate angles reproducing `target` up to global phase. Among all solutions in
/// [0, pi) it returns the lexicographically smallest (first, half, last).
/// Throws std::domain_error when `target` is not unitary within 1e-10.
WaveplateAngles decompose_su2(const Eigen::Matrix2cd &target);

/// min over phi of max |a - e^{i phi} b|.
double phase_insensitive_distance(const Eigen::Matrix2cd &a, const Eigen::Matrix2cd &b);

struct PathConversion {
    PhotonicState state;
    QubitEncoding encoding;
    std::vector<OpticalElement> elements;
};

/// Converts polarization qubits to path qubits: a PBS sends V into a fresh spatial mode
/// and a half-wave plate at 45 degrees turns it back to H. Two vacuum modes per qubit
/// are appended to the state. Throws std::domain_error unless `e` is polarization.
PathConversion pbs_convert(const PhotonicState &p, const QubitEncoding &e);

}  // namespace lopsim
