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

#include "lopsim/json_io.hpp"

#include <stdexcept>
#include <string>

namespace lopsim {

using nlohmann::json;

namespace {

json complex_pair(Complex c) { return json::array({c.real(), c.imag()}); }

Complex complex_from(const json &j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw std::domain_error("complex number must be [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

json to_json(const PhotonicState &s) {
    json terms = json::array();
    for (const auto &[basis, amp] : s.terms()) {
        terms.push_back({{"occ", basis.occupations()}, {"re", amp.real()}, {"im", amp.imag()}});
    }
    return {{"modes", s.mode_count()}, {"terms", terms}};
}

PhotonicState photonic_state_from_json(const json &j) {
    try {
        const auto modes = j.at("modes").get<std::size_t>();
        PhotonicState::TermMap terms;
        for (const auto &t : j.at("terms")) {
            FockBasisState basis(t.at("occ").get<std::vector<int>>());
            const Complex amp{t.at("re").get<double>(), t.at("im").get<double>()};
            if (!terms.emplace(std::move(basis), amp).second) {
                throw std::domain_error("repeated basis state in JSON");
            }
        }
        return PhotonicState(modes, std::move(terms));
    } catch (const json::exception &e) {
        throw std::domain_error(std::string("malformed photonic state: ") + e.what());
    }
}

json to_json(const LogicalState &s) {
    json amps = json::array();
    for (const auto &a : s.amplitudes()) {
        amps.push_back(complex_pair(a));
    }
    return {{"n", s.qubits()}, {"amps", amps}};
}

LogicalState logical_state_from_json(const json &j) {
    try {
        const int n = j.at("n").get<int>();
        std::vector<Complex> amps;
        for (const auto &a : j.at("amps")) {
            amps.push_back(complex_from(a));
        }
        if (n < 0 || n > 30 || amps.size() != (std::size_t{1} << n)) {
            throw std::domain_error("amplitude count does not match qubit count");
        }
        return LogicalState::from_amplitudes(std::move(amps));
    } catch (const json::exception &e) {
        throw std::domain_error(std::string("malformed logical state: ") + e.what());
    }
}

json to_json(const DetectionRecord &r) {
    json outcome = json::object();
    for (const auto &[mode, count] : r.outcome) {
        outcome[std::to_string(mode)] = count;
    }
    return {{"outcome", outcome},
            {"prob", r.probability},
            {"exact_prob", r.exact_probability},
            {"residual", to_json(r.residual)}};
}

json to_json(const ModeUnitary &u) {
    json rows = json::array();
    for (int r = 0; r < u.modes(); ++r) {
        json row = json::array();
        for (int c = 0; c < u.modes(); ++c) {
            row.push_back(complex_pair(u(r, c)));
        }
        rows.push_back(row);
    }
    return rows;
}

ModeUnitary mode_unitary_from_json(const json &j) {
    if (!j.is_array()) {
        throw std::domain_error("unitary must be an array of rows");
    }
    const auto n = static_cast<Eigen::Index>(j.size());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const json &row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
            throw std::domain_error("unitary must be square");
        }
        for (Eigen::Index c = 0; c < n; ++c) {
            m(r, c) = complex_from(row[static_cast<std::size_t>(c)]);
        }
    }
    return ModeUnitary(std::move(m));
}

json to_json(const std::vector<MeasurementRecord> &transcript) {
    json out = json::array();
    for (const auto &m : transcript) {
        out.push_back({{"node", m.node},
                       {"basis", m.basis == MeasurementBasis::computational ? "z" : "xy"},
                       {"angle", m.angle},
                       {"raw", m.raw_outcome},
                       {"outcome", m.outcome},
                       {"prob", m.probability}});
    }
    return out;
}

json to_json(const PauliFrame &frame) {
    json out = json::array();
    for (int n = 0; n < frame.size(); ++n) {
        if (!frame[n].trivial()) {
            out.push_back({{"node", n}, {"x", frame[n].x_flip}, {"z", frame[n].z_flip}});
        }
    }
    return out;
}

}  // namespace lopsim
