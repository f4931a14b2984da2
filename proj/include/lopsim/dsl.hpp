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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lopsim/cluster.hpp"
#include "lopsim/detection.hpp"
#include "lopsim/interferometer.hpp"
#include "lopsim/qubit.hpp"

namespace lopsim::dsl {

/// 1-based position of a token in the experiment text.
struct SourceLocation {
    int line = 0;
    int column = 0;
};

/// A value plus the place it was written. Equality ignores the location, so a spec
/// compares equal to its re-parsed serialization.
template <class T>
struct Located {
    T value{};
    SourceLocation loc;

    friend bool operator==(const Located &a, const Located &b) { return a.value == b.value; }
};

enum class ParseErrorKind {
    unknown_directive,
    arity,
    undeclared_index,
    duplicate_run_mode,
    bad_value,
    structure,
};

std::string_view to_string(ParseErrorKind kind);

class ParseError : public std::runtime_error {
   public:
    ParseError(ParseErrorKind kind, SourceLocation loc, const std::string &message);

    ParseErrorKind kind() const { return kind_; }
    SourceLocation location() const { return loc_; }
    /// Message without the location prefix.
    const std::string &detail() const { return detail_; }

   private:
    ParseErrorKind kind_;
    SourceLocation loc_;
    std::string detail_;
};

enum class ElementKind { bs, phase, hwp, qwp, pbs, swap };

/// One optical element as written. `a` and `b` are mode indices (bs, phase, swap) or
/// polarization pair indices (hwp, qwp, pbs); `value` is a reflectivity or an angle in
/// degrees.
struct ElementDecl {
    ElementKind kind = ElementKind::bs;
    int a = 0;
    int b = 0;
    double value = 0.0;
    SourceLocation loc;

    friend bool operator==(const ElementDecl &x, const ElementDecl &y) {
        return x.kind == y.kind && x.a == y.a && x.b == y.b && x.value == y.value;
    }
};

/// Converts degrees to radians and pair indices to mode pairs.
OpticalElement to_element(const ElementDecl &d);

/// Logical input: a basis string, or explicit (re, im) amplitudes.
struct LogicalInput {
    std::string bits;
    std::vector<Complex> amplitudes;
    friend bool operator==(const LogicalInput &, const LogicalInput &) = default;
};

struct GateDecl {
    std::string name;
    int control = 0;
    int target = 0;
    SourceLocation loc;

    friend bool operator==(const GateDecl &x, const GateDecl &y) {
        return x.name == y.name && x.control == y.control && x.target == y.target;
    }
};

enum class SweepParameter { overlap, efficiency, reflectivity };
std::string_view to_string(SweepParameter p);

struct SweepDecl {
    SweepParameter parameter = SweepParameter::overlap;
    double from = 0.0;
    double to = 1.0;
    int steps = 1;
    friend bool operator==(const SweepDecl &, const SweepDecl &) = default;

    /// from + (to - from) i / (steps - 1) for i in [0, steps).
    std::vector<double> values() const;
};

struct TrialsDecl {
    std::int64_t trials = 1;
    std::uint64_t seed = 0;
    friend bool operator==(const TrialsDecl &, const TrialsDecl &) = default;
};

enum class OutputFormat { csv, json };
std::string_view to_string(OutputFormat f);

enum class InitState { zero, one, plus, minus };
std::string_view to_string(InitState s);
LogicalState init_state(InitState s);

/// `measure n angle deg [adapt frame|none|-on(a,b,..)] [succ k]` or `measure n z`.
struct MeasureDecl {
    int node = 0;
    bool computational = false;
    double degrees = 0.0;
    AdaptMode adapt = AdaptMode::frame;
    std::vector<int> adapt_on;
    std::optional<int> successor;
    SourceLocation loc;

    friend bool operator==(const MeasureDecl &x, const MeasureDecl &y) {
        return x.node == y.node && x.computational == y.computational && x.degrees == y.degrees &&
               x.adapt == y.adapt && x.adapt_on == y.adapt_on && x.successor == y.successor;
    }
};

struct ClusterDecl {
    Located<int> nodes;
    std::vector<Located<std::pair<int, int>>> edges;
    std::vector<Located<std::pair<int, InitState>>> inits;
    std::vector<MeasureDecl> measurements;
    SourceLocation loc;

    friend bool operator==(const ClusterDecl &x, const ClusterDecl &y) {
        return x.nodes == y.nodes && x.edges == y.edges && x.inits == y.inits && x.measurements == y.measurements;
    }

    ClusterGraph graph() const;
    std::vector<MeasurementInstruction> schedule() const;
};

/// Parsed experiment. Exactly one of `modes`, `qubits` or `cluster` selects the layer
/// the experiment runs on; at most one of `sweep` and `trials` selects the run mode.
struct ExperimentSpec {
    std::optional<Located<int>> modes;
    std::optional<Located<std::vector<int>>> input;
    std::vector<ElementDecl> elements;
    std::optional<Located<HeraldPattern>> herald;
    std::optional<Located<DetectorModel>> detector;

    std::optional<Located<int>> qubits;
    std::optional<Located<LogicalInput>> logical;
    std::vector<GateDecl> gates;

    std::optional<ClusterDecl> cluster;

    std::optional<Located<SweepDecl>> sweep;
    std::optional<Located<TrialsDecl>> trials;
    std::optional<Located<OutputFormat>> emit;

    friend bool operator==(const ExperimentSpec &, const ExperimentSpec &) = default;
};

/// Parses and validates. Throws ParseError with the location of the offending token.
ExperimentSpec parse(std::string_view text);

/// Canonical text form; parse(serialize(s)) == s. Numbers use %.17g.
std::string serialize(const ExperimentSpec &s);

}  // namespace lopsim::dsl
