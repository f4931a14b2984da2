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
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "lopsim/qubit.hpp"
#include "lopsim/rng.hpp"
#include "lopsim/teleport.hpp"

namespace lopsim {

/// Most qubits held in the dense register at once.
inline constexpr int kMaxLiveQubits = 20;

/// Nodes 0..nodes-1 joined by CZ bonds. Nodes start in |+> unless listed in `init`.
struct ClusterGraph {
    int nodes = 0;
    std::vector<std::pair<int, int>> edges;
    std::map<int, LogicalState> init;

    /// Throws std::domain_error for self-edges, repeated edges, out-of-range ids or a
    /// non-single-qubit init state.
    void validate() const;
    bool has_edge(int a, int b) const;
    std::vector<int> neighbors(int node) const;
    bool starts_in_plus(int node) const { return !init.contains(node); }
};

/// Linear chain 0 - 1 - ... - (n-1).
ClusterGraph linear_cluster(int nodes);

enum class MeasurementBasis { equatorial, computational };

/// How the sign of an equatorial angle follows earlier outcomes.
enum class AdaptMode {
    /// Flip when the tracked frame holds an X byproduct on the node.
    frame,
    /// Flip by the parity of the referred outcomes (MeasurementRecord::outcome) of
    /// `adapt_on`.
    outcomes,
    /// Never flip.
    none,
};

/// Measurement of one node. The equatorial basis at angle a is
/// (|0> +- e^{-ia}|1>)/sqrt2, outcome 0 for the + sign.
struct MeasurementInstruction {
    int node = 0;
    MeasurementBasis basis = MeasurementBasis::equatorial;
    double angle = 0.0;
    AdaptMode adapt = AdaptMode::frame;
    std::vector<int> adapt_on;
    /// Node that receives the X byproduct. Chosen automatically when empty.
    std::optional<int> successor;
};

/// Pending Pauli byproducts per node; the state held by the simulator equals the ideal
/// state with X^x Z^z applied on each node.
class PauliFrame {
   public:
    explicit PauliFrame(int nodes = 0) : flips_(static_cast<std::size_t>(nodes)) {}

    int size() const { return static_cast<int>(flips_.size()); }
    const PauliCorrection &operator[](int node) const { return flips_.at(static_cast<std::size_t>(node)); }
    void flip_x(int node) { flips_.at(static_cast<std::size_t>(node)).x_flip ^= true; }
    void flip_z(int node) { flips_.at(static_cast<std::size_t>(node)).z_flip ^= true; }
    bool trivial() const;

    PauliFrame operator^(const PauliFrame &o) const;
    friend bool operator==(const PauliFrame &, const PauliFrame &) = default;

   private:
    std::vector<PauliCorrection> flips_;
};

/// Applies Z^z X^x of `frame` to each qubit; qubit i of `s` is node `nodes[i]`. The
/// operation is its own inverse up to global phase.
LogicalState apply_frame(const LogicalState &s, const std::vector<int> &nodes, const PauliFrame &frame);

struct MeasurementRecord {
    int node = 0;
    MeasurementBasis basis = MeasurementBasis::equatorial;
    /// Angle actually used after adaptation (radians).
    double angle = 0.0;
    int raw_outcome = 0;
    /// Outcome referred to the ideal, byproduct-free state.
    int outcome = 0;
    double probability = 0.0;
    friend bool operator==(const MeasurementRecord &, const MeasurementRecord &) = default;
};

/// Raised when a node is measured before one of its declared bonds exists.
class ClusterOrderError : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

/// Dense register over the live nodes of a cluster that may still be growing.
/// Measured nodes are contracted out of the register.
class ClusterSession {
   public:
    explicit ClusterSession(ClusterGraph declared);

    /// Adds every node and bond of the declared graph.
    void build_all();
    void add_node(int node);
    /// Adds a declared bond, creating missing endpoints. Existing X byproducts on one end
    /// become Z byproducts on the other.
    void add_bond(int a, int b);
    /// Measures a node. `forced` fixes the raw outcome; one uniform draw is taken from
    /// `rng` either way.
    MeasurementRecord measure(const MeasurementInstruction &m, Rng &rng, std::optional<int> forced = {});

    const ClusterGraph &graph() const { return graph_; }
    const PauliFrame &frame() const { return frame_; }
    const std::vector<MeasurementRecord> &transcript() const { return transcript_; }
    bool is_live(int node) const;
    bool is_measured(int node) const;
    /// Live nodes in increasing order.
    std::vector<int> live_nodes() const;
    /// State of the live nodes, in live_nodes() order, with byproducts still present.
    LogicalState raw_state() const;
    /// raw_state() with the frame removed.
    LogicalState corrected_state() const;

   private:
    int position(int node) const;
    void check_node(int node) const;
    std::optional<int> flow_successor(int node) const;

    ClusterGraph graph_;
    QubitRegister reg_;
    std::vector<int> order_;  // node held by each register qubit
    std::vector<bool> added_;
    std::vector<bool> measured_;
    std::vector<std::pair<int, int>> bonds_;
    PauliFrame frame_;
    std::vector<int> outcomes_;
    std::vector<MeasurementRecord> transcript_;
};

/// All nodes initialized and every bond applied.
LogicalState build_cluster(const ClusterGraph &g);

struct PatternResult {
    /// Corrected state of the unmeasured nodes, in increasing node order.
    LogicalState output;
    std::vector<int> output_nodes;
    std::vector<MeasurementRecord> transcript;
    /// Byproducts removed from the output.
    PauliFrame frame;
};

/// Raw outcomes keyed by node; nodes not listed are sampled.
using ForcedOutcomes = std::map<int, int>;

/// Builds the whole cluster, then measures in schedule order.
PatternResult run_pattern(const ClusterGraph &g, const std::vector<MeasurementInstruction> &schedule,
                          std::uint64_t seed, const ForcedOutcomes &forced = {});

struct AddNode {
    int node = 0;
};
struct AddBond {
    int a = 0;
    int b = 0;
};
using GrowEvent = std::variant<AddNode, AddBond, MeasurementInstruction>;

/// Runs an interleaved add/measure sequence. Declared nodes and bonds not added by the
/// end are added before the output is read. Throws ClusterOrderError when a node is
/// measured before all its declared bonds exist.
PatternResult grow_while_measuring(const ClusterGraph &g, const std::vector<GrowEvent> &events, std::uint64_t seed,
                                   const ForcedOutcomes &forced = {});

/// Event list that bonds each measured node just in time and keeps `lookahead` further
/// scheduled nodes fully bonded ahead of the measurement front.
std::vector<GrowEvent> interleave_schedule(const ClusterGraph &g, const std::vector<MeasurementInstruction> &schedule,
                                           int lookahead);

}  // namespace lopsim
