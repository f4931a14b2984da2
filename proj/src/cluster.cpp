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

#include "lopsim/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

namespace lopsim {

namespace {

std::pair<int, int> ordered(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

LogicalState plus_state() {
    const double h = 1.0 / std::numbers::sqrt2;
    return LogicalState::from_amplitudes({h, h});
}

Eigen::Vector2cd basis_ket(MeasurementBasis basis, double angle, int outcome) {
    if (basis == MeasurementBasis::computational) {
        return outcome == 0 ? Eigen::Vector2cd(1, 0) : Eigen::Vector2cd(0, 1);
    }
    const double sign = outcome == 0 ? 1.0 : -1.0;
    return Eigen::Vector2cd(1.0, sign * std::polar(1.0, -angle)) / std::numbers::sqrt2;
}

// Reorders qubits: qubit i of the result is qubit from[i] of s.
std::vector<Complex> permute_qubits(const std::vector<Complex> &amps, int n, const std::vector<int> &from) {
    std::vector<Complex> out(amps.size());
    for (std::uint64_t idx = 0; idx < amps.size(); ++idx) {
        std::uint64_t dst = 0;
        for (int i = 0; i < n; ++i) {
            const std::uint64_t bit = (idx >> (n - 1 - from[i])) & 1;
            dst |= bit << (n - 1 - i);
        }
        out[dst] = amps[idx];
    }
    return out;
}

}  // namespace

void ClusterGraph::validate() const {
    if (nodes < 0) {
        throw std::domain_error("negative node count");
    }
    std::set<std::pair<int, int>> seen;
    for (const auto &[a, b] : edges) {
        if (a < 0 || b < 0 || a >= nodes || b >= nodes) {
            throw std::domain_error("edge " + std::to_string(a) + "-" + std::to_string(b) + " refers to an undeclared node");
        }
        if (a == b) {
            throw std::domain_error("self-edge on node " + std::to_string(a));
        }
        if (!seen.insert(ordered(a, b)).second) {
            throw std::domain_error("edge " + std::to_string(a) + "-" + std::to_string(b) + " listed twice");
        }
    }
    for (const auto &[node, state] : init) {
        if (node < 0 || node >= nodes) {
            throw std::domain_error("init for undeclared node " + std::to_string(node));
        }
        if (state.qubits() != 1) {
            throw std::domain_error("node init must be a single qubit");
        }
    }
}

bool ClusterGraph::has_edge(int a, int b) const {
    return std::any_of(edges.begin(), edges.end(), [&](const auto &e) { return ordered(e.first, e.second) == ordered(a, b); });
}

std::vector<int> ClusterGraph::neighbors(int node) const {
    std::vector<int> out;
    for (const auto &[a, b] : edges) {
        if (a == node) {
            out.push_back(b);
        } else if (b == node) {
            out.push_back(a);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

ClusterGraph linear_cluster(int nodes) {
    ClusterGraph g;
    g.nodes = nodes;
    for (int i = 0; i + 1 < nodes; ++i) {
        g.edges.emplace_back(i, i + 1);
    }
    return g;
}

bool PauliFrame::trivial() const {
    return std::all_of(flips_.begin(), flips_.end(), [](const PauliCorrection &c) { return c.trivial(); });
}

PauliFrame PauliFrame::operator^(const PauliFrame &o) const {
    if (o.size() != size()) {
        throw std::domain_error("frame size mismatch");
    }
    PauliFrame out(size());
    for (std::size_t i = 0; i < flips_.size(); ++i) {
        out.flips_[i] = flips_[i] ^ o.flips_[i];
    }
    return out;
}

LogicalState apply_frame(const LogicalState &s, const std::vector<int> &nodes, const PauliFrame &frame) {
    if (static_cast<int>(nodes.size()) != s.qubits()) {
        throw std::domain_error("node list does not match the state");
    }
    QubitRegister r(s);
    for (int i = 0; i < s.qubits(); ++i) {
        r.apply(i, frame[nodes[i]].matrix());
    }
    return r.state();
}

ClusterSession::ClusterSession(ClusterGraph declared)
    : graph_(std::move(declared)),
      reg_(0),
      added_(static_cast<std::size_t>(std::max(graph_.nodes, 0)), false),
      measured_(added_.size(), false),
      frame_(graph_.nodes),
      outcomes_(added_.size(), 0) {
    graph_.validate();
}

void ClusterSession::check_node(int node) const {
    if (node < 0 || node >= graph_.nodes) {
        throw std::domain_error("node " + std::to_string(node) + " is not declared");
    }
}

bool ClusterSession::is_live(int node) const {
    check_node(node);
    return added_[node] && !measured_[node];
}

bool ClusterSession::is_measured(int node) const {
    check_node(node);
    return measured_[node];
}

int ClusterSession::position(int node) const {
    const auto it = std::find(order_.begin(), order_.end(), node);
    return static_cast<int>(it - order_.begin());
}

void ClusterSession::build_all() {
    for (int n = 0; n < graph_.nodes; ++n) {
        if (!added_[n]) {
            add_node(n);
        }
    }
    for (const auto &[a, b] : graph_.edges) {
        if (std::find(bonds_.begin(), bonds_.end(), ordered(a, b)) == bonds_.end()) {
            add_bond(a, b);
        }
    }
}

void ClusterSession::add_node(int node) {
    check_node(node);
    if (added_[node]) {
        throw std::domain_error("node " + std::to_string(node) + " added twice");
    }
    if (reg_.qubits() >= kMaxLiveQubits) {
        throw std::domain_error("more than " + std::to_string(kMaxLiveQubits) + " live qubits");
    }
    const auto it = graph_.init.find(node);
    reg_.append(it == graph_.init.end() ? plus_state() : it->second);
    order_.push_back(node);
    added_[node] = true;
}

void ClusterSession::add_bond(int a, int b) {
    check_node(a);
    check_node(b);
    if (!graph_.has_edge(a, b)) {
        throw std::domain_error("bond " + std::to_string(a) + "-" + std::to_string(b) + " is not declared");
    }
    if (std::find(bonds_.begin(), bonds_.end(), ordered(a, b)) != bonds_.end()) {
        throw std::domain_error("bond " + std::to_string(a) + "-" + std::to_string(b) + " added twice");
    }
    if (measured_[a] || measured_[b]) {
        throw ClusterOrderError("bond " + std::to_string(a) + "-" + std::to_string(b) + " touches a measured node");
    }
    for (int n : {a, b}) {
        if (!added_[n]) {
            add_node(n);
        }
    }
    reg_.cz(position(a), position(b));
    bonds_.push_back(ordered(a, b));
    // CZ X_a CZ = X_a Z_b.
    if (frame_[a].x_flip) {
        frame_.flip_z(b);
    }
    if (frame_[b].x_flip) {
        frame_.flip_z(a);
    }
}

std::optional<int> ClusterSession::flow_successor(int node) const {
    std::vector<int> open;
    for (int k : graph_.neighbors(node)) {
        if (!measured_[k]) {
            open.push_back(k);
        }
    }
    if (open.size() != 1) {
        return std::nullopt;
    }
    const int f = open.front();
    if (!graph_.starts_in_plus(f)) {
        return std::nullopt;
    }
    for (int k : graph_.neighbors(f)) {
        if (k != node && measured_[k]) {
            return std::nullopt;
        }
    }
    return f;
}

MeasurementRecord ClusterSession::measure(const MeasurementInstruction &m, Rng &rng, std::optional<int> forced) {
    const int j = m.node;
    check_node(j);
    if (measured_[j]) {
        throw std::domain_error("node " + std::to_string(j) + " measured twice");
    }
    if (!added_[j]) {
        throw ClusterOrderError("node " + std::to_string(j) + " measured before it was added");
    }
    for (int k : graph_.neighbors(j)) {
        if (std::find(bonds_.begin(), bonds_.end(), ordered(j, k)) == bonds_.end()) {
            throw ClusterOrderError("node " + std::to_string(j) + " measured before its bond to " + std::to_string(k));
        }
    }
    if (forced && *forced != 0 && *forced != 1) {
        throw std::domain_error("forced outcome must be 0 or 1");
    }

    double angle = m.angle;
    if (m.basis == MeasurementBasis::equatorial) {
        bool flip = false;
        switch (m.adapt) {
            case AdaptMode::frame:
                flip = frame_[j].x_flip;
                break;
            case AdaptMode::outcomes:
                for (int k : m.adapt_on) {
                    check_node(k);
                    if (!measured_[k]) {
                        throw std::domain_error("angle of node " + std::to_string(j) + " depends on unmeasured node " +
                                                std::to_string(k));
                    }
                    flip ^= outcomes_[k] != 0;
                }
                break;
            case AdaptMode::none:
                break;
        }
        if (flip) {
            angle = -angle;
        }
    }

    std::optional<int> successor;
    if (m.basis == MeasurementBasis::equatorial) {
        if (m.successor) {
            const int f = *m.successor;
            check_node(f);
            if (!graph_.has_edge(j, f) || !is_live(f)) {
                throw std::domain_error("successor " + std::to_string(f) + " is not a live neighbor of node " +
                                        std::to_string(j));
            }
            successor = f;
        } else {
            successor = flow_successor(j);
        }
    }

    const int pos = position(j);
    QubitRegister branch0 = reg_;
    branch0.contract(pos, basis_ket(m.basis, angle, 0));
    const double p0 = std::clamp(branch0.norm_squared() / reg_.norm_squared(), 0.0, 1.0);
    const double u = rng.uniform();
    const int raw = forced ? *forced : (u < p0 ? 0 : 1);
    const double p = raw == 0 ? p0 : 1.0 - p0;
    if (p <= 1e-14) {
        throw std::domain_error("outcome " + std::to_string(raw) + " on node " + std::to_string(j) +
                                " has zero probability");
    }
    if (raw == 0) {
        reg_ = std::move(branch0);
    } else {
        reg_.contract(pos, basis_ket(m.basis, angle, 1));
    }
    reg_.normalize();
    order_.erase(order_.begin() + pos);
    measured_[j] = true;

    const bool equatorial = m.basis == MeasurementBasis::equatorial;
    const int s = raw ^ static_cast<int>(equatorial ? frame_[j].z_flip : frame_[j].x_flip);
    outcomes_[j] = s;
    if (s == 1) {
        // Z_j on the graph state equals X_f times Z on the other neighbors of f.
        const int centre = equatorial ? successor.value_or(-1) : j;
        if (centre >= 0) {
            if (equatorial) {
                frame_.flip_x(centre);
            }
            for (const auto &[a, b] : bonds_) {
                const int other = a == centre ? b : (b == centre ? a : -1);
                if (other >= 0 && other != j && !measured_[other]) {
                    frame_.flip_z(other);
                }
            }
        }
    }
    if (frame_[j].x_flip) {
        frame_.flip_x(j);
    }
    if (frame_[j].z_flip) {
        frame_.flip_z(j);
    }

    MeasurementRecord rec{j, m.basis, angle, raw, s, p};
    transcript_.push_back(rec);
    return rec;
}

std::vector<int> ClusterSession::live_nodes() const {
    std::vector<int> out = order_;
    std::sort(out.begin(), out.end());
    return out;
}

LogicalState ClusterSession::raw_state() const {
    const std::vector<int> live = live_nodes();
    std::vector<int> from;
    for (int node : live) {
        from.push_back(position(node));
    }
    return LogicalState::normalized(permute_qubits(reg_.amplitudes(), reg_.qubits(), from));
}

LogicalState ClusterSession::corrected_state() const { return apply_frame(raw_state(), live_nodes(), frame_); }

LogicalState build_cluster(const ClusterGraph &g) {
    ClusterSession s(g);
    s.build_all();
    return s.raw_state();
}

namespace {

std::optional<int> forced_for(const ForcedOutcomes &forced, int node) {
    const auto it = forced.find(node);
    if (it == forced.end()) {
        return std::nullopt;
    }
    return it->second;
}

PatternResult finish(const ClusterSession &s) {
    return {s.corrected_state(), s.live_nodes(), s.transcript(), s.frame()};
}

}  // namespace

PatternResult run_pattern(const ClusterGraph &g, const std::vector<MeasurementInstruction> &schedule,
                          std::uint64_t seed, const ForcedOutcomes &forced) {
    ClusterSession s(g);
    s.build_all();
    Rng rng(seed);
    for (const auto &m : schedule) {
        s.measure(m, rng, forced_for(forced, m.node));
    }
    return finish(s);
}

PatternResult grow_while_measuring(const ClusterGraph &g, const std::vector<GrowEvent> &events, std::uint64_t seed,
                                   const ForcedOutcomes &forced) {
    ClusterSession s(g);
    Rng rng(seed);
    for (const auto &e : events) {
        if (const auto *n = std::get_if<AddNode>(&e)) {
            s.add_node(n->node);
        } else if (const auto *b = std::get_if<AddBond>(&e)) {
            s.add_bond(b->a, b->b);
        } else {
            const auto &m = std::get<MeasurementInstruction>(e);
            s.measure(m, rng, forced_for(forced, m.node));
        }
    }
    s.build_all();
    return finish(s);
}

std::vector<GrowEvent> interleave_schedule(const ClusterGraph &g, const std::vector<MeasurementInstruction> &schedule,
                                           int lookahead) {
    g.validate();
    std::vector<bool> added(static_cast<std::size_t>(g.nodes), false);
    std::set<std::pair<int, int>> bonded;
    std::vector<GrowEvent> events;
    auto prepare = [&](int node) {
        if (node < 0 || node >= g.nodes) {
            return;
        }
        if (!added[node]) {
            events.emplace_back(AddNode{node});
            added[node] = true;
        }
        for (int k : g.neighbors(node)) {
            if (bonded.insert(ordered(node, k)).second) {
                if (!added[k]) {
                    events.emplace_back(AddNode{k});
                    added[k] = true;
                }
                events.emplace_back(AddBond{node, k});
            }
        }
    };
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        for (std::size_t k = i; k < schedule.size() && k <= i + static_cast<std::size_t>(std::max(lookahead, 0)); ++k) {
            prepare(schedule[k].node);
        }
        events.emplace_back(schedule[i]);
    }
    return events;
}

}  // namespace lopsim
