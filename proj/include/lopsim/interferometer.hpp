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

#include <map>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "lopsim/fock.hpp"

namespace lopsim {

/// Two modes acting as one polarization (H, V) or dual-rail (|0>, |1>) pair.
struct ModePair {
    int first = 0;
    int second = 1;
    friend bool operator==(const ModePair &, const ModePair &) = default;
};

/// Polarization of spatial mode k lives on modes (2k, 2k+1) = (H, V).
inline ModePair polarization_pair(int spatial_mode) {
    return {2 * spatial_mode, 2 * spatial_mode + 1};
}

/// a -> t a + i r b, b -> i r a + t b with t = sqrt(1-R), r = sqrt(R).
struct BeamSplitter {
    int a = 0;
    int b = 1;
    double reflectivity = 0.5;
};

/// Multiplies mode amplitude by exp(i phi).
struct PhaseShift {
    int mode = 0;
    double phi = 0.0;
};

/// Real Jones matrix [[cos 2t, sin 2t], [sin 2t, -cos 2t]] on (H, V).
struct HalfWavePlate {
    ModePair pair;
    double theta = 0.0;
};

/// R(t) diag(1, i) R(-t) on (H, V).
struct QuarterWavePlate {
    ModePair pair;
    double theta = 0.0;
};

/// H is transmitted (stays in its spatial mode), V is reflected into the other one.
struct PolarizingBeamSplitter {
    ModePair first;
    ModePair second;
};

struct ModeSwap {
    int a = 0;
    int b = 1;
};

using OpticalElement = std::variant<BeamSplitter, PhaseShift, HalfWavePlate, QuarterWavePlate,
                                    PolarizingBeamSplitter, ModeSwap>;

/// Unitary transfer matrix on optical modes. Column j is the image of a photon
/// injected in mode j.
class ModeUnitary {
   public:
    static constexpr double kUnitarityTolerance = 1e-10;

    /// Throws std::domain_error when `matrix` is not square or not unitary.
    explicit ModeUnitary(Eigen::MatrixXcd matrix);

    static ModeUnitary identity(int modes);

    int modes() const { return static_cast<int>(m_.rows()); }
    const Eigen::MatrixXcd &matrix() const { return m_; }
    Complex operator()(int row, int col) const { return m_(row, col); }

    /// Applies `first`, then `this`.
    ModeUnitary after(const ModeUnitary &first) const;

   private:
    Eigen::MatrixXcd m_;
};

/// 2x2 Jones matrices of the waveplates, exposed for the encoding layer.
Eigen::Matrix2cd half_wave_jones(double theta);
Eigen::Matrix2cd quarter_wave_jones(double theta);

/// Embeds one element into `total_modes` modes. Throws std::domain_error on bad
/// indices or parameters.
ModeUnitary element_unitary(const OpticalElement &e, int total_modes);

/// Product of element unitaries; the first element acts first.
ModeUnitary compose(std::span<const OpticalElement> elements, int total_modes);

/// Renames every mode index through `mapping` (new = mapping[old]).
std::vector<OpticalElement> remap_modes(std::span<const OpticalElement> elements,
                                        std::span<const int> mapping);

/// Decomposes a unitary into beamsplitters and phase shifts (triangular nulling).
/// compose(synthesize_network(u), n) reproduces u within round-off.
std::vector<OpticalElement> synthesize_network(const Eigen::MatrixXcd &u);

/// All occupation vectors of `photons` over `modes`, lexicographic order.
std::vector<std::vector<int>> compositions(int photons, int modes);

/// Evolves a Fock-space state through the interferometer. Each photon-number sector
/// evolves independently; <T|U|S> = perm(U[T,S]) / sqrt(prod S! prod T!).
PhotonicState apply(const ModeUnitary &u, const PhotonicState &s);

/// Output distribution when every input photon is distinguishable from the others.
std::map<FockBasisState, double> distinguishable_distribution(const ModeUnitary &u,
                                                              const FockBasisState &input);

/// Coincidence probability behind a beamsplitter of reflectivity R with one photon in
/// each input and wavepacket overlap x: x^2 (1-2R)^2 + (1-x^2) ((1-R)^2 + R^2).
double hom_coincidence(double reflectivity, double overlap);

}  // namespace lopsim
