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

#include <vector>

#include <json.hpp>

#include "lopsim/cluster.hpp"
#include "lopsim/detection.hpp"
#include "lopsim/fock.hpp"
#include "lopsim/interferometer.hpp"
#include "lopsim/qubit.hpp"

namespace lopsim {

/// {"modes": n, "terms": [{"occ": [...], "re": x, "im": y}, ...]} in term order.
nlohmann::json to_json(const PhotonicState &s);
/// Throws std::domain_error on malformed input.
PhotonicState photonic_state_from_json(const nlohmann::json &j);

/// {"n": qubits, "amps": [[re, im], ...]} in binary order.
nlohmann::json to_json(const LogicalState &s);
LogicalState logical_state_from_json(const nlohmann::json &j);

/// {"outcome": {"mode": count, ...}, "prob": p, "exact_prob": q, "residual": state}.
nlohmann::json to_json(const DetectionRecord &r);

/// Row-major [[[re, im], ...], ...].
nlohmann::json to_json(const ModeUnitary &u);
ModeUnitary mode_unitary_from_json(const nlohmann::json &j);

/// [{"node": n, "basis": "xy"|"z", "angle": a, "raw": r, "outcome": s, "prob": p}, ...].
nlohmann::json to_json(const std::vector<MeasurementRecord> &transcript);

/// [{"node": n, "x": bool, "z": bool}, ...] for every node with a pending byproduct.
nlohmann::json to_json(const PauliFrame &frame);

}  // namespace lopsim
