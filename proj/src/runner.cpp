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

#include "lopsim/runner.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "lopsim/cluster.hpp"
#include "lopsim/encoding.hpp"
#include "lopsim/heralded.hpp"
#include "lopsim/json_io.hpp"
#include "lopsim/rng.hpp"
#include "lopsim/teleport.hpp"

namespace lopsim {

using nlohmann::json;

namespace {

std::string occupation_text(const std::vector<int> &occ) {
    std::string s = "[";
    for (std::size_t i = 0; i < occ.size(); ++i) {
        s += (i ? "," : "") + std::to_string(occ[i]);
    }
    return s + "]";
}

std::string bits_text(const std::vector<int> &bits) {
    std::string s;
    for (int b : bits) {
        s += static_cast<char>('0' + b);
    }
    return s;
}

std::string basis_bits(std::size_t index, int qubits) {
    std::string s;
    for (int q = 0; q < qubits; ++q) {
        s += ((index >> (qubits - 1 - q)) & 1) ? '1' : '0';
    }
    return s;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Setup {
    std::uint64_t seed = 0;
    std::optional<std::int64_t> trials;
    dsl::OutputFormat format = dsl::OutputFormat::csv;
};

Setup resolve(const dsl::ExperimentSpec &spec, const RunOverrides &o) {
    Setup s;
    if (spec.trials) {
        s.seed = spec.trials->value.seed;
        s.trials = spec.trials->value.trials;
    }
    if (o.seed) {
        s.seed = *o.seed;
    }
    if (o.trials) {
        if (spec.sweep) {
            throw std::invalid_argument("--trials does not apply to a sweep");
        }
        if (*o.trials <= 0) {
            throw std::invalid_argument("--trials must be positive");
        }
        s.trials = *o.trials;
    }
    if (spec.emit) {
        s.format = spec.emit->value;
    }
    if (o.format) {
        s.format = *o.format;
    }
    return s;
}

Report start(std::string kind, const Setup &s) {
    Report r;
    r.kind = std::move(kind);
    r.seed = s.seed;
    r.format = s.format;
    return r;
}

// ---- photonic layer ----

struct PhotonicSetup {
    int modes = 0;
    FockBasisState input;
    std::vector<OpticalElement> elements;
    DetectorModel detector;
};

PhotonicSetup photonic_setup(const dsl::ExperimentSpec &spec) {
    PhotonicSetup p;
    p.modes = spec.modes->value;
    p.input = FockBasisState(spec.input ? spec.input->value : std::vector<int>(static_cast<std::size_t>(p.modes), 0));
    for (const auto &e : spec.elements) {
        p.elements.push_back(dsl::to_element(e));
    }
    if (spec.detector) {
        p.detector = spec.detector->value;
    }
    return p;
}

double herald_probability(const PhotonicSetup &p, const HeraldPattern &h) {
    const PhotonicState out = apply(compose(p.elements, p.modes), make_basis_state(p.input.occupations()));
    return herald(out, h, p.detector).probability;
}

// Herald probability when every photon is distinguishable from the others.
double distinguishable_herald_probability(const PhotonicSetup &p, const HeraldPattern &h) {
    double total = 0;
    for (const auto &[basis, prob] : distinguishable_distribution(compose(p.elements, p.modes), p.input)) {
        double w = prob;
        for (const auto &[mode, count] : h.counts) {
            w *= p.detector.response(basis[static_cast<std::size_t>(mode)], count);
        }
        total += w;
    }
    return total;
}

Report run_photonic(const dsl::ExperimentSpec &spec, const Setup &s) {
    PhotonicSetup p = photonic_setup(spec);
    const std::optional<HeraldPattern> h = spec.herald ? std::optional(spec.herald->value) : std::nullopt;

    if (spec.sweep) {
        const dsl::SweepDecl &w = spec.sweep->value;
        Report r = start("photonic-sweep", s);
        r.columns = {std::string(dsl::to_string(w.parameter)), "probability"};
        double indistinguishable = 0;
        double distinguishable = 0;
        if (w.parameter == dsl::SweepParameter::overlap) {
            indistinguishable = herald_probability(p, *h);
            distinguishable = distinguishable_herald_probability(p, *h);
        }
        for (double v : w.values()) {
            double prob = 0;
            switch (w.parameter) {
                case dsl::SweepParameter::overlap:
                    prob = v * v * indistinguishable + (1 - v * v) * distinguishable;
                    break;
                case dsl::SweepParameter::efficiency: {
                    PhotonicSetup q = p;
                    q.detector.efficiency = v;
                    prob = herald_probability(q, *h);
                    break;
                }
                case dsl::SweepParameter::reflectivity: {
                    PhotonicSetup q = p;
                    for (auto &e : q.elements) {
                        if (auto *bs = std::get_if<BeamSplitter>(&e)) {
                            bs->reflectivity = v;
                        }
                    }
                    prob = herald_probability(q, *h);
                    break;
                }
            }
            r.rows.push_back({v, prob});
        }
        return r;
    }

    const PhotonicState out = apply(compose(p.elements, p.modes), make_basis_state(p.input.occupations()));

    if (s.trials) {
        Report r = start("photonic-trials", s);
        std::vector<int> measured;
        if (h) {
            measured = h->modes();
        } else {
            for (int m = 0; m < p.modes; ++m) {
                measured.push_back(m);
            }
        }
        r.columns = {"trial", "reading"};
        if (h) {
            r.columns.push_back("heralded");
        }
        std::int64_t hits = 0;
        for (std::int64_t t = 0; t < *s.trials; ++t) {
            Rng rng(derive_seed(s.seed, static_cast<std::uint64_t>(t)));
            const MeasurementSample sample = measure_all(out, rng);
            const std::map<int, int> reading = observe(sample.outcome, measured, p.detector, rng);
            std::vector<int> values;
            for (int m : measured) {
                values.push_back(reading.at(m));
            }
            std::vector<Cell> row = {t, occupation_text(values)};
            if (h) {
                const bool ok = values == h->values();
                hits += ok ? 1 : 0;
                row.emplace_back(std::int64_t{ok ? 1 : 0});
            }
            r.rows.push_back(std::move(row));
        }
        if (h) {
            const double rate = static_cast<double>(hits) / static_cast<double>(*s.trials);
            r.rows.push_back({std::string("mean"), std::string(), rate});
            r.extras["herald_rate"] = rate;
        }
        r.extras["trials"] = *s.trials;
        return r;
    }

    Report r = start("photonic", s);
    r.extras["output"] = lopsim::to_json(out);
    if (h) {
        const DetectionRecord rec = herald(out, *h, p.detector);
        r.columns = {"probability", "exact_probability"};
        r.rows.push_back({rec.probability, rec.exact_probability});
        r.extras["record"] = lopsim::to_json(rec);
    } else {
        r.columns = {"outcome", "probability"};
        for (const auto &[basis, amp] : out.terms()) {
            r.rows.push_back({occupation_text(basis.occupations()), std::norm(amp)});
        }
    }
    return r;
}

// ---- logical layer ----

const Eigen::Matrix4cd &gate_kraus(const std::string &name) {
    static const Eigen::Matrix4cd cnot = heralded_cnot_kraus();
    static const Eigen::Matrix4cd cz = logical_kraus(klm_cz());
    return name == "klm_cz" ? cz : cnot;
}

int herald_photons(const std::string &name) {
    const HeraldedGate g = name == "klm_cz" ? klm_cz() : klm_cnot();
    int n = 0;
    for (const auto &[mode, count] : g.herald.counts) {
        n += count;
    }
    return n;
}

LogicalState logical_input(const dsl::ExperimentSpec &spec) {
    const int n = spec.qubits->value;
    if (!spec.logical) {
        return LogicalState::basis(n, 0);
    }
    const dsl::LogicalInput &in = spec.logical->value;
    if (in.amplitudes.empty()) {
        return LogicalState::from_bits(in.bits);
    }
    return LogicalState::normalized(in.amplitudes);
}

struct GateRun {
    std::vector<double> step_probability;
    double probability = 1.0;
    std::optional<LogicalState> output;
};

// Heralded success branch of each gate, applied on the qubit register; every heralded
// photon must register, which multiplies each step by efficiency^photons.
GateRun run_gates(const dsl::ExperimentSpec &spec, const DetectorModel &d) {
    QubitRegister reg(logical_input(spec));
    GateRun g;
    for (const auto &gate : spec.gates) {
        const double before = reg.norm_squared();
        reg.apply(gate.control, gate.target, gate_kraus(gate.name));
        const double ideal = reg.norm_squared() / before;
        const double step = ideal * std::pow(d.efficiency, herald_photons(gate.name));
        g.step_probability.push_back(step);
        g.probability *= step;
        if (reg.norm_squared() == 0.0) {
            break;
        }
        reg.normalize();
    }
    if (g.probability > 0.0) {
        g.output = reg.state();
    }
    return g;
}

Report run_logical(const dsl::ExperimentSpec &spec, const Setup &s) {
    DetectorModel d = spec.detector ? spec.detector->value : DetectorModel::ideal();
    if (spec.sweep) {
        Report r = start("gate-sweep", s);
        r.columns = {"efficiency", "probability"};
        for (double v : spec.sweep->value.values()) {
            d.efficiency = v;
            r.rows.push_back({v, run_gates(spec, d).probability});
        }
        return r;
    }
    const GateRun g = run_gates(spec, d);
    if (s.trials) {
        Report r = start("gate-trials", s);
        r.columns = {"trial", "success"};
        std::int64_t hits = 0;
        for (std::int64_t t = 0; t < *s.trials; ++t) {
            Rng rng(derive_seed(s.seed, static_cast<std::uint64_t>(t)));
            const bool ok = rng.bernoulli(g.probability);
            hits += ok ? 1 : 0;
            r.rows.push_back({t, std::int64_t{ok ? 1 : 0}});
        }
        const double rate = static_cast<double>(hits) / static_cast<double>(*s.trials);
        r.rows.push_back({std::string("mean"), rate});
        r.extras["success_rate"] = rate;
        r.extras["success_probability"] = g.probability;
        return r;
    }
    Report r = start("gate", s);
    r.columns = {"step", "gate", "control", "target", "success_probability"};
    for (std::size_t i = 0; i < g.step_probability.size(); ++i) {
        const auto &gate = spec.gates[i];
        r.rows.push_back({static_cast<std::int64_t>(i), gate.name, std::int64_t{gate.control},
                          std::int64_t{gate.target}, g.step_probability[i]});
    }
    r.extras["success_probability"] = g.probability;
    r.extras["input"] = lopsim::to_json(logical_input(spec));
    r.extras["output"] = g.output ? lopsim::to_json(*g.output) : json(nullptr);
    return r;
}

// ---- cluster layer ----

std::vector<Cell> transcript_row(const MeasurementRecord &m) {
    return {std::int64_t{m.node}, std::string(m.basis == MeasurementBasis::computational ? "z" : "xy"),
            m.angle * 180.0 / std::numbers::pi, std::int64_t{m.raw_outcome}, std::int64_t{m.outcome}, m.probability};
}

const std::vector<std::string> kTranscriptColumns = {"node", "basis", "angle_deg", "raw", "outcome", "probability"};

json pattern_json(const PatternResult &p) {
    return {{"output", lopsim::to_json(p.output)},
            {"output_nodes", p.output_nodes},
            {"frame", lopsim::to_json(p.frame)},
            {"transcript", lopsim::to_json(p.transcript)}};
}

Report run_cluster(const dsl::ExperimentSpec &spec, const Setup &s) {
    const ClusterGraph g = spec.cluster->graph();
    const std::vector<MeasurementInstruction> schedule = spec.cluster->schedule();
    if (s.trials) {
        Report r = start("cluster-trials", s);
        r.columns = {"trial", "outcomes"};
        std::int64_t ones = 0;
        std::int64_t total = 0;
        for (std::int64_t t = 0; t < *s.trials; ++t) {
            const PatternResult p = run_pattern(g, schedule, derive_seed(s.seed, static_cast<std::uint64_t>(t)));
            std::vector<int> bits;
            for (const auto &m : p.transcript) {
                bits.push_back(m.outcome);
                ones += m.outcome;
                ++total;
            }
            r.rows.push_back({t, bits_text(bits)});
        }
        const double rate = total ? static_cast<double>(ones) / static_cast<double>(total) : 0.0;
        r.rows.push_back({std::string("mean"), rate});
        r.extras["outcome_one_rate"] = rate;
        return r;
    }
    Report r = start("cluster", s);
    r.columns = kTranscriptColumns;
    const PatternResult p = run_pattern(g, schedule, s.seed);
    for (const auto &m : p.transcript) {
        r.rows.push_back(transcript_row(m));
    }
    r.extras = pattern_json(p);
    return r;
}

std::string csv_field(const std::string &s) {
    const bool quote = s.find_first_of(",\"\r\n") != std::string::npos || (!s.empty() && (s.front() == ' ' || s.back() == ' '));
    if (!quote) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') {
            out += '"';
        }
    }
    return out + "\"";
}

std::string csv_cell(const Cell &c) {
    if (const auto *i = std::get_if<std::int64_t>(&c)) {
        return std::to_string(*i);
    }
    if (const auto *d = std::get_if<double>(&c)) {
        return format_double(*d);
    }
    return csv_field(std::get<std::string>(c));
}

json json_cell(const Cell &c) {
    return std::visit([](const auto &v) { return json(v); }, c);
}

}  // namespace

Report run(const dsl::ExperimentSpec &spec, const RunOverrides &overrides) {
    const Setup s = resolve(spec, overrides);
    if (spec.cluster) {
        return run_cluster(spec, s);
    }
    if (spec.qubits) {
        return run_logical(spec, s);
    }
    return run_photonic(spec, s);
}

std::string to_csv(const Report &r) {
    std::string out = "version,seed";
    for (const auto &c : r.columns) {
        out += "," + csv_field(c);
    }
    out += "\n";
    const std::string prefix = std::string(kVersion) + "," + std::to_string(r.seed);
    for (const auto &row : r.rows) {
        out += prefix;
        for (const auto &c : row) {
            out += "," + csv_cell(c);
        }
        out += "\n";
    }
    return out;
}

json to_json(const Report &r) {
    json rows = json::array();
    for (const auto &row : r.rows) {
        json jr = json::array();
        for (const auto &c : row) {
            jr.push_back(json_cell(c));
        }
        rows.push_back(jr);
    }
    return {{"version", kVersion}, {"seed", r.seed}, {"kind", r.kind}, {"columns", r.columns},
            {"rows", rows},        {"extras", r.extras}};
}

std::string render(const Report &r) {
    if (r.format == dsl::OutputFormat::json) {
        return to_json(r).dump(2) + "\n";
    }
    return to_csv(r);
}

Report hom_report(int steps, double reflectivity) {
    const std::string text = "modes 2\ninput 1 1\nbs 0 1 " + format_double(reflectivity) +
                             "\nherald 0=1 1=1\nsweep overlap from 0 to 1 steps " + std::to_string(steps) + "\n";
    return run(dsl::parse(text));
}

Report cnot_herald_report(const DetectorModel &d) {
    const HeraldedGate g = klm_cnot();
    Report r;
    r.kind = "cnot-herald";
    r.columns = {"input", "success_probability", "false_herald_probability", "output", "cnot_overlap", "leakage"};
    for (std::size_t idx = 0; idx < 4; ++idx) {
        const LogicalState in = LogicalState::basis(2, idx);
        const GateRunResult res = run_heralded(g, in, d);
        QubitRegister ideal(in);
        ideal.cnot(0, 1);
        std::string out_bits;
        double fidelity = 0;
        if (res.logical_action) {
            std::size_t best = 0;
            for (std::size_t k = 1; k < 4; ++k) {
                if (std::norm((*res.logical_action)[k]) > std::norm((*res.logical_action)[best])) {
                    best = k;
                }
            }
            out_bits = basis_bits(best, 2);
            fidelity = overlap(*res.logical_action, ideal.state());
        }
        r.rows.push_back({basis_bits(idx, 2), res.probability, res.false_herald_probability, out_bits, fidelity,
                          res.leakage});
    }
    r.extras["efficiency"] = d.efficiency;
    r.extras["number_resolving"] = d.number_resolving;
    return r;
}

Report teleport_cnot_report(std::int64_t trials, std::uint64_t seed, std::string_view input_bits) {
    const LogicalState input = LogicalState::from_bits(input_bits);
    if (input.qubits() != 2) {
        throw std::invalid_argument("teleported CNOT input must be two bits");
    }
    const TeleportedCnotBatch b = run_teleported_cnot_trials(input, trials, seed);
    Report r;
    r.kind = "teleport-cnot";
    r.seed = seed;
    r.columns = {"trial", "attempts", "pairs"};
    for (std::size_t i = 0; i < b.trials.size(); ++i) {
        r.rows.push_back({static_cast<std::int64_t>(i), b.trials[i].attempts, b.trials[i].entangled_pairs_consumed});
    }
    r.rows.push_back({std::string("mean"), b.mean_attempts, b.mean_pairs});
    r.extras = {{"input", std::string(input_bits)},
                {"trials", trials},
                {"mean_attempts", b.mean_attempts},
                {"mean_pairs", b.mean_pairs},
                {"min_overlap", b.min_overlap}};
    return r;
}

Report cluster_demo_report(std::uint64_t seed, double alpha_deg, double beta_deg, double gamma_deg) {
    const double deg = std::numbers::pi / 180.0;
    const double a = alpha_deg * deg;
    const double b = beta_deg * deg;
    const double c = gamma_deg * deg;
    const ClusterGraph g = linear_cluster(5);
    std::vector<MeasurementInstruction> schedule;
    for (const auto &[node, angle] : std::vector<std::pair<int, double>>{{0, -a}, {1, -b}, {2, -c}, {3, 0.0}}) {
        MeasurementInstruction m;
        m.node = node;
        m.angle = angle;
        schedule.push_back(m);
    }
    const PatternResult p = run_pattern(g, schedule, seed);

    // Rz(-c) Rx(-b) Rz(-a) |+>.
    auto rz = [](double t) {
        Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
        m(0, 0) = std::polar(1.0, -t / 2);
        m(1, 1) = std::polar(1.0, t / 2);
        return m;
    };
    auto rx = [](double t) {
        Eigen::Matrix2cd m;
        m << std::cos(t / 2), Complex(0, -std::sin(t / 2)), Complex(0, -std::sin(t / 2)), std::cos(t / 2);
        return m;
    };
    const Eigen::Vector2cd plus = Eigen::Vector2cd(1, 1) / std::numbers::sqrt2;
    const Eigen::Vector2cd want = rz(-c) * rx(-b) * rz(-a) * plus;
    const LogicalState oracle = LogicalState::normalized({want(0), want(1)});

    Report r;
    r.kind = "cluster-demo";
    r.seed = seed;
    r.columns = kTranscriptColumns;
    for (const auto &m : p.transcript) {
        r.rows.push_back(transcript_row(m));
    }
    r.extras = pattern_json(p);
    r.extras["angles_deg"] = {alpha_deg, beta_deg, gamma_deg};
    r.extras["oracle_overlap"] = overlap(p.output, oracle);
    return r;
}

}  // namespace lopsim
