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
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "lopsim/detection.hpp"
#include "lopsim/dsl.hpp"

namespace lopsim {

inline constexpr std::string_view kVersion = "0.1.0";

/// Command-line values that take precedence over the experiment file.
struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> trials;
    std::optional<dsl::OutputFormat> format;
};

using Cell = std::variant<std::int64_t, double, std::string>;

/// A table plus free-form details. Every rendering carries the version and seed.
struct Report {
    std::string kind;
    std::uint64_t seed = 0;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    nlohmann::json extras = nlohmann::json::object();
    dsl::OutputFormat format = dsl::OutputFormat::csv;
};

/// Executes a parsed experiment. Throws std::invalid_argument when the overrides do not
/// fit the experiment, and lets library errors through otherwise.
Report run(const dsl::ExperimentSpec &spec, const RunOverrides &overrides = {});

/// RFC 4180 quoting, 17 significant digits. Columns "version" and "seed" come first.
std::string to_csv(const Report &r);
nlohmann::json to_json(const Report &r);
/// CSV or indented JSON according to r.format, newline-terminated.
std::string render(const Report &r);

/// Coincidence probability against wavepacket overlap behind one beamsplitter.
Report hom_report(int steps = 11, double reflectivity = 0.5);
/// klm_cnot on the four computational inputs.
Report cnot_herald_report(const DetectorModel &d = DetectorModel::ideal());
/// Resource tally of the teleported CNOT, one row per trial plus the mean.
Report teleport_cnot_report(std::int64_t trials, std::uint64_t seed, std::string_view input_bits = "10");
/// Five-node linear cluster rotating |+> by Euler angles (degrees), checked against the
/// circuit-model rotation.
Report cluster_demo_report(std::uint64_t seed, double alpha_deg = 30.0, double beta_deg = 45.0,
                           double gamma_deg = 60.0);

}  // namespace lopsim
