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

#include "lopsim/dsl.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <set>

namespace lopsim::dsl {

std::string_view to_string(ParseErrorKind kind) {
    switch (kind) {
        case ParseErrorKind::unknown_directive:
            return "unknown directive";
        case ParseErrorKind::arity:
            return "arity mismatch";
        case ParseErrorKind::undeclared_index:
            return "undeclared index";
        case ParseErrorKind::duplicate_run_mode:
            return "duplicate run mode";
        case ParseErrorKind::bad_value:
            return "bad value";
        case ParseErrorKind::structure:
            return "structure";
    }
    return "error";
}

ParseError::ParseError(ParseErrorKind kind, SourceLocation loc, const std::string &message)
    : std::runtime_error("line " + std::to_string(loc.line) + ", col " + std::to_string(loc.column) + ": " +
                         std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      loc_(loc),
      detail_(message) {}

std::string_view to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::overlap:
            return "overlap";
        case SweepParameter::efficiency:
            return "efficiency";
        case SweepParameter::reflectivity:
            return "reflectivity";
    }
    return "?";
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::json ? "json" : "csv"; }

std::string_view to_string(InitState s) {
    switch (s) {
        case InitState::zero:
            return "zero";
        case InitState::one:
            return "one";
        case InitState::plus:
            return "plus";
        case InitState::minus:
            return "minus";
    }
    return "?";
}

LogicalState init_state(InitState s) {
    const double h = 1.0 / std::numbers::sqrt2;
    switch (s) {
        case InitState::zero:
            return LogicalState::basis(1, 0);
        case InitState::one:
            return LogicalState::basis(1, 1);
        case InitState::plus:
            return LogicalState::from_amplitudes({h, h});
        case InitState::minus:
            return LogicalState::from_amplitudes({h, -h});
    }
    throw std::domain_error("bad init state");
}

std::vector<double> SweepDecl::values() const {
    std::vector<double> out;
    for (int i = 0; i < steps; ++i) {
        out.push_back(steps == 1 ? from : from + (to - from) * i / (steps - 1));
    }
    if (steps > 1) {
        out.back() = to;
    }
    return out;
}

OpticalElement to_element(const ElementDecl &d) {
    const double rad = d.value * std::numbers::pi / 180.0;
    switch (d.kind) {
        case ElementKind::bs:
            return BeamSplitter{d.a, d.b, d.value};
        case ElementKind::phase:
            return PhaseShift{d.a, rad};
        case ElementKind::hwp:
            return HalfWavePlate{polarization_pair(d.a), rad};
        case ElementKind::qwp:
            return QuarterWavePlate{polarization_pair(d.a), rad};
        case ElementKind::pbs:
            return PolarizingBeamSplitter{polarization_pair(d.a), polarization_pair(d.b)};
        case ElementKind::swap:
            return ModeSwap{d.a, d.b};
    }
    throw std::domain_error("bad element kind");
}

ClusterGraph ClusterDecl::graph() const {
    ClusterGraph g;
    g.nodes = nodes.value;
    for (const auto &e : edges) {
        g.edges.push_back(e.value);
    }
    for (const auto &i : inits) {
        g.init.insert_or_assign(i.value.first, init_state(i.value.second));
    }
    return g;
}

std::vector<MeasurementInstruction> ClusterDecl::schedule() const {
    std::vector<MeasurementInstruction> out;
    for (const auto &m : measurements) {
        MeasurementInstruction i;
        i.node = m.node;
        i.basis = m.computational ? MeasurementBasis::computational : MeasurementBasis::equatorial;
        i.angle = m.degrees * std::numbers::pi / 180.0;
        i.adapt = m.adapt;
        i.adapt_on = m.adapt_on;
        i.successor = m.successor;
        out.push_back(std::move(i));
    }
    return out;
}

namespace {

struct Token {
    std::string text;
    SourceLocation loc;
};

using Statement = std::vector<Token>;

enum class IndexDomain { mode, pair, qubit, node };

struct IndexCheck {
    IndexDomain domain;
    std::int64_t value;
    SourceLocation loc;
};

std::vector<Token> lex_line(std::string_view line, int line_no) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        const char c = line[i];
        if (c == '#') {
            break;
        }
        if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
            ++i;
            continue;
        }
        const SourceLocation loc{line_no, static_cast<int>(i) + 1};
        if (c == '{' || c == '}' || c == ';') {
            out.push_back({std::string(1, c), loc});
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < line.size()) {
            const char d = line[j];
            if (d == ' ' || d == '\t' || d == '\r' || d == '\f' || d == '\v' || d == '#' || d == '{' || d == '}' ||
                d == ';') {
                break;
            }
            ++j;
        }
        out.push_back({std::string(line.substr(i, j - i)), loc});
        i = j;
    }
    return out;
}

std::int64_t parse_int(const Token &t, std::int64_t lo, std::int64_t hi, std::string_view what) {
    std::int64_t v = 0;
    const char *first = t.text.data();
    const char *last = first + t.text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        throw ParseError(ParseErrorKind::bad_value, t.loc, "expected an integer " + std::string(what) + ", got '" + t.text + "'");
    }
    if (v < lo || v > hi) {
        throw ParseError(ParseErrorKind::bad_value, t.loc,
                         std::string(what) + " " + t.text + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return v;
}

std::uint64_t parse_seed(const Token &t) {
    std::uint64_t v = 0;
    const char *first = t.text.data();
    const char *last = first + t.text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        throw ParseError(ParseErrorKind::bad_value, t.loc, "expected an unsigned 64-bit seed, got '" + t.text + "'");
    }
    return v;
}

double parse_double(const Token &t, std::string_view what) {
    double v = 0;
    const char *first = t.text.data();
    const char *last = first + t.text.size();
    if (first != last && *first == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
        throw ParseError(ParseErrorKind::bad_value, t.loc, "expected a number for " + std::string(what) + ", got '" + t.text + "'");
    }
    return v;
}

double parse_unit(const Token &t, std::string_view what) {
    const double v = parse_double(t, what);
    if (v < 0.0 || v > 1.0) {
        throw ParseError(ParseErrorKind::bad_value, t.loc, std::string(what) + " must lie in [0, 1]");
    }
    return v;
}

void expect_arity(const Statement &s, std::size_t n, std::string_view usage) {
    if (s.size() != n) {
        const SourceLocation loc = s.size() > n ? s[n].loc : s.front().loc;
        throw ParseError(ParseErrorKind::arity, loc, "usage: " + std::string(usage));
    }
}

void expect_at_least(const Statement &s, std::size_t n, std::string_view usage) {
    if (s.size() < n) {
        throw ParseError(ParseErrorKind::arity, s.front().loc, "usage: " + std::string(usage));
    }
}

void expect_keyword(const Token &t, std::string_view word, std::string_view usage) {
    if (t.text != word) {
        throw ParseError(ParseErrorKind::arity, t.loc, "expected '" + std::string(word) + "'; usage: " + std::string(usage));
    }
}

// "q3" or "3" after a "key=" prefix.
std::int64_t parse_qubit_ref(const Token &t, std::string_view key, SourceLocation &where) {
    const std::string prefix = std::string(key) + "=";
    if (t.text.rfind(prefix, 0) != 0) {
        throw ParseError(ParseErrorKind::arity, t.loc, "expected " + prefix + "q<index>");
    }
    Token v{t.text.substr(prefix.size()), {t.loc.line, t.loc.column + static_cast<int>(prefix.size())}};
    if (!v.text.empty() && v.text.front() == 'q') {
        v.text.erase(0, 1);
        ++v.loc.column;
    }
    where = v.loc;
    return parse_int(v, 0, 1 << 20, "qubit index");
}

class Parser {
   public:
    ExperimentSpec run(std::string_view text) {
        int line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const std::size_t nl = text.find('\n', pos);
            const std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
            ++line_no;
            feed_line(lex_line(line, line_no));
            if (nl == std::string_view::npos) {
                break;
            }
            pos = nl + 1;
        }
        if (cluster_) {
            throw ParseError(ParseErrorKind::structure, spec_.cluster->loc, "cluster block is not closed");
        }
        validate();
        return std::move(spec_);
    }

   private:
    void feed_line(const std::vector<Token> &tokens) {
        Statement current;
        for (const auto &t : tokens) {
            if (t.text == ";") {
                flush(current);
            } else if (t.text == "{") {
                if (current.size() != 1 || current.front().text != "cluster" || cluster_) {
                    throw ParseError(ParseErrorKind::structure, t.loc, "'{' may only follow 'cluster'");
                }
                if (spec_.cluster) {
                    throw ParseError(ParseErrorKind::structure, current.front().loc, "only one cluster block is allowed");
                }
                spec_.cluster = ClusterDecl{};
                spec_.cluster->loc = current.front().loc;
                cluster_ = true;
                current.clear();
            } else if (t.text == "}") {
                flush(current);
                if (!cluster_) {
                    throw ParseError(ParseErrorKind::structure, t.loc, "'}' without an open cluster block");
                }
                cluster_ = false;
            } else {
                current.push_back(t);
            }
        }
        flush(current);
    }

    void flush(Statement &s) {
        if (!s.empty()) {
            if (cluster_) {
                cluster_statement(s);
            } else {
                statement(s);
            }
        }
        s.clear();
    }

    void check_index(IndexDomain d, std::int64_t v, SourceLocation loc) { checks_.push_back({d, v, loc}); }

    int index_arg(const Token &t, IndexDomain d) {
        const auto v = parse_int(t, 0, 1 << 20, "index");
        check_index(d, v, t.loc);
        return static_cast<int>(v);
    }

    template <class T>
    void set_once(std::optional<Located<T>> &slot, T value, const Token &head) {
        if (slot) {
            throw ParseError(ParseErrorKind::structure, head.loc,
                             "'" + head.text + "' already given on line " + std::to_string(slot->loc.line));
        }
        slot = Located<T>{std::move(value), head.loc};
    }

    void statement(const Statement &s) {
        const Token &head = s.front();
        const std::string &d = head.text;
        if (d == "modes") {
            expect_arity(s, 2, "modes N");
            set_once(spec_.modes, static_cast<int>(parse_int(s[1], 1, 64, "mode count")), head);
        } else if (d == "input") {
            expect_at_least(s, 2, "input n0 n1 ...");
            std::vector<int> occ;
            for (std::size_t i = 1; i < s.size(); ++i) {
                occ.push_back(static_cast<int>(parse_int(s[i], 0, 64, "photon count")));
            }
            set_once(spec_.input, std::move(occ), head);
        } else if (d == "bs") {
            expect_arity(s, 4, "bs a b R");
            element(head, ElementKind::bs, index_arg(s[1], IndexDomain::mode), index_arg(s[2], IndexDomain::mode),
                    parse_unit(s[3], "reflectivity"));
            distinct(s[1], s[2]);
        } else if (d == "phase") {
            expect_arity(s, 3, "phase m degrees");
            element(head, ElementKind::phase, index_arg(s[1], IndexDomain::mode), 0, parse_double(s[2], "phase"));
        } else if (d == "hwp" || d == "qwp") {
            expect_arity(s, 3, d + " pair degrees");
            element(head, d == "hwp" ? ElementKind::hwp : ElementKind::qwp, index_arg(s[1], IndexDomain::pair), 0,
                    parse_double(s[2], "angle"));
        } else if (d == "pbs") {
            expect_arity(s, 3, "pbs pair1 pair2");
            element(head, ElementKind::pbs, index_arg(s[1], IndexDomain::pair), index_arg(s[2], IndexDomain::pair), 0);
            distinct(s[1], s[2]);
        } else if (d == "swap") {
            expect_arity(s, 3, "swap a b");
            element(head, ElementKind::swap, index_arg(s[1], IndexDomain::mode), index_arg(s[2], IndexDomain::mode), 0);
            distinct(s[1], s[2]);
        } else if (d == "herald") {
            herald(s);
        } else if (d == "detector") {
            detector(s);
        } else if (d == "qubits") {
            expect_arity(s, 2, "qubits N");
            set_once(spec_.qubits, static_cast<int>(parse_int(s[1], 1, 20, "qubit count")), head);
        } else if (d == "logical") {
            logical(s);
        } else if (d == "gate") {
            gate(s);
        } else if (d == "sweep") {
            sweep(s);
        } else if (d == "trials") {
            expect_arity(s, 4, "trials N seed S");
            expect_keyword(s[2], "seed", "trials N seed S");
            run_mode(head);
            spec_.trials = Located<TrialsDecl>{{parse_int(s[1], 1, 100'000'000, "trial count"), parse_seed(s[3])}, head.loc};
        } else if (d == "emit") {
            expect_arity(s, 2, "emit json|csv");
            if (s[1].text != "json" && s[1].text != "csv") {
                throw ParseError(ParseErrorKind::bad_value, s[1].loc, "output format must be json or csv");
            }
            set_once(spec_.emit, s[1].text == "json" ? OutputFormat::json : OutputFormat::csv, head);
        } else if (d == "cluster") {
            throw ParseError(ParseErrorKind::structure, head.loc, "expected 'cluster {'");
        } else if (d == "nodes" || d == "edge" || d == "measure" || d == "init") {
            throw ParseError(ParseErrorKind::structure, head.loc, "'" + d + "' is only valid inside a cluster block");
        } else {
            throw ParseError(ParseErrorKind::unknown_directive, head.loc, "unknown directive '" + d + "'");
        }
    }

    void distinct(const Token &a, const Token &b) {
        if (a.text == b.text) {
            throw ParseError(ParseErrorKind::bad_value, b.loc, "element needs two different indices");
        }
    }

    void element(const Token &head, ElementKind kind, int a, int b, double value) {
        spec_.elements.push_back({kind, a, b, value, head.loc});
    }

    void herald(const Statement &s) {
        expect_at_least(s, 2, "herald m=c ...");
        HeraldPattern p = spec_.herald ? spec_.herald->value : HeraldPattern{};
        for (std::size_t i = 1; i < s.size(); ++i) {
            const Token &t = s[i];
            const auto eq = t.text.find('=');
            if (eq == std::string::npos) {
                throw ParseError(ParseErrorKind::bad_value, t.loc, "herald entries look like mode=count");
            }
            const Token mode{t.text.substr(0, eq), t.loc};
            const Token count{t.text.substr(eq + 1), {t.loc.line, t.loc.column + static_cast<int>(eq) + 1}};
            const int m = index_arg(mode, IndexDomain::mode);
            const int c = static_cast<int>(parse_int(count, 0, 64, "herald count"));
            if (!p.counts.emplace(m, c).second) {
                throw ParseError(ParseErrorKind::bad_value, t.loc, "mode " + mode.text + " heralded twice");
            }
        }
        if (!spec_.herald) {
            spec_.herald = Located<HeraldPattern>{std::move(p), s.front().loc};
        } else {
            spec_.herald->value = std::move(p);
        }
    }

    void detector(const Statement &s) {
        const std::string_view usage = "detector efficiency E [threshold|resolving]";
        if (s.size() != 3 && s.size() != 4) {
            expect_arity(s, 4, usage);
        }
        expect_keyword(s[1], "efficiency", usage);
        DetectorModel d;
        d.efficiency = parse_unit(s[2], "efficiency");
        if (s.size() == 4) {
            if (s[3].text != "threshold" && s[3].text != "resolving") {
                throw ParseError(ParseErrorKind::bad_value, s[3].loc, "detector type must be threshold or resolving");
            }
            d.number_resolving = s[3].text == "resolving";
        }
        set_once(spec_.detector, d, s.front());
    }

    void logical(const Statement &s) {
        expect_at_least(s, 2, "logical <bits> | logical amps re im ...");
        LogicalInput in;
        if (s[1].text == "amps") {
            if (s.size() < 4 || (s.size() - 2) % 2 != 0) {
                throw ParseError(ParseErrorKind::arity, s.front().loc, "amplitudes come in (re, im) pairs");
            }
            for (std::size_t i = 2; i < s.size(); i += 2) {
                in.amplitudes.emplace_back(parse_double(s[i], "amplitude"), parse_double(s[i + 1], "amplitude"));
            }
        } else {
            expect_arity(s, 2, "logical <bits>");
            if (s[1].text.find_first_not_of("01") != std::string::npos) {
                throw ParseError(ParseErrorKind::bad_value, s[1].loc, "basis string may only contain 0 and 1");
            }
            in.bits = s[1].text;
        }
        set_once(spec_.logical, std::move(in), s.front());
    }

    void gate(const Statement &s) {
        const std::string_view usage = "gate klm_cnot|klm_cz control=qA target=qB";
        expect_arity(s, 4, usage);
        if (s[1].text != "klm_cnot" && s[1].text != "klm_cz") {
            throw ParseError(ParseErrorKind::bad_value, s[1].loc, "unknown gate '" + s[1].text + "'");
        }
        SourceLocation cl;
        SourceLocation tl;
        const auto c = parse_qubit_ref(s[2], "control", cl);
        const auto t = parse_qubit_ref(s[3], "target", tl);
        check_index(IndexDomain::qubit, c, cl);
        check_index(IndexDomain::qubit, t, tl);
        if (c == t) {
            throw ParseError(ParseErrorKind::bad_value, s[3].loc, "control and target must differ");
        }
        spec_.gates.push_back({s[1].text, static_cast<int>(c), static_cast<int>(t), s.front().loc});
    }

    void sweep(const Statement &s) {
        const std::string_view usage = "sweep overlap|efficiency|reflectivity from X to Y steps K";
        expect_arity(s, 8, usage);
        SweepDecl w;
        if (s[1].text == "overlap") {
            w.parameter = SweepParameter::overlap;
        } else if (s[1].text == "efficiency") {
            w.parameter = SweepParameter::efficiency;
        } else if (s[1].text == "reflectivity") {
            w.parameter = SweepParameter::reflectivity;
        } else {
            throw ParseError(ParseErrorKind::bad_value, s[1].loc, "cannot sweep '" + s[1].text + "'");
        }
        expect_keyword(s[2], "from", usage);
        expect_keyword(s[4], "to", usage);
        expect_keyword(s[6], "steps", usage);
        w.from = parse_unit(s[3], std::string(to_string(w.parameter)));
        w.to = parse_unit(s[5], std::string(to_string(w.parameter)));
        w.steps = static_cast<int>(parse_int(s[7], 1, 1'000'000, "step count"));
        run_mode(s.front());
        spec_.sweep = Located<SweepDecl>{w, s.front().loc};
    }

    void run_mode(const Token &head) {
        const SourceLocation *prev = spec_.sweep ? &spec_.sweep->loc : (spec_.trials ? &spec_.trials->loc : nullptr);
        if (prev) {
            throw ParseError(ParseErrorKind::duplicate_run_mode, head.loc,
                             "run mode already set on line " + std::to_string(prev->line));
        }
    }

    void cluster_statement(const Statement &s) {
        ClusterDecl &c = *spec_.cluster;
        const Token &head = s.front();
        const std::string &d = head.text;
        if (d == "nodes") {
            expect_arity(s, 2, "nodes N");
            if (c.nodes.loc.line != 0) {
                throw ParseError(ParseErrorKind::structure, head.loc, "'nodes' already given");
            }
            c.nodes = {static_cast<int>(parse_int(s[1], 0, 1 << 20, "node count")), head.loc};
        } else if (d == "edge") {
            expect_arity(s, 3, "edge a b");
            const int a = index_arg(s[1], IndexDomain::node);
            const int b = index_arg(s[2], IndexDomain::node);
            if (a == b) {
                throw ParseError(ParseErrorKind::bad_value, s[2].loc, "self-edge");
            }
            const auto key = std::minmax(a, b);
            for (const auto &e : c.edges) {
                if (std::minmax(e.value.first, e.value.second) == key) {
                    throw ParseError(ParseErrorKind::bad_value, head.loc, "edge listed twice");
                }
            }
            c.edges.push_back({{a, b}, head.loc});
        } else if (d == "init") {
            expect_arity(s, 3, "init n zero|one|plus|minus");
            const int n = index_arg(s[1], IndexDomain::node);
            InitState st{};
            bool found = false;
            for (InitState cand : {InitState::zero, InitState::one, InitState::plus, InitState::minus}) {
                if (s[2].text == to_string(cand)) {
                    st = cand;
                    found = true;
                }
            }
            if (!found) {
                throw ParseError(ParseErrorKind::bad_value, s[2].loc, "init state must be zero, one, plus or minus");
            }
            for (const auto &i : c.inits) {
                if (i.value.first == n) {
                    throw ParseError(ParseErrorKind::bad_value, head.loc, "node initialized twice");
                }
            }
            c.inits.push_back({{n, st}, head.loc});
        } else if (d == "measure") {
            measure(s);
        } else {
            throw ParseError(ParseErrorKind::unknown_directive, head.loc, "unknown cluster directive '" + d + "'");
        }
    }

    void measure(const Statement &s) {
        const std::string_view usage = "measure n angle deg [adapt frame|none|-on(a,...)] [succ k] | measure n z";
        ClusterDecl &c = *spec_.cluster;
        expect_at_least(s, 3, usage);
        MeasureDecl m;
        m.loc = s.front().loc;
        m.node = index_arg(s[1], IndexDomain::node);
        for (const auto &prev : c.measurements) {
            if (prev.node == m.node) {
                throw ParseError(ParseErrorKind::bad_value, s[1].loc, "node measured twice");
            }
        }
        if (s[2].text == "z") {
            expect_arity(s, 3, usage);
            m.computational = true;
            c.measurements.push_back(std::move(m));
            return;
        }
        expect_keyword(s[2], "angle", usage);
        expect_at_least(s, 4, usage);
        m.degrees = parse_double(s[3], "angle");
        std::size_t i = 4;
        bool seen_adapt = false;
        bool seen_succ = false;
        while (i < s.size()) {
            const Token &key = s[i];
            if (key.text == "adapt" && !seen_adapt) {
                seen_adapt = true;
                if (i + 1 >= s.size()) {
                    throw ParseError(ParseErrorKind::arity, key.loc, "usage: " + std::string(usage));
                }
                Token v = s[i + 1];
                i += 2;
                if (v.text.rfind("-on(", 0) == 0) {
                    while (v.text.back() != ')' && i < s.size()) {
                        v.text += s[i++].text;
                    }
                    adapt_list(m, v);
                } else if (v.text == "frame") {
                    m.adapt = AdaptMode::frame;
                } else if (v.text == "none") {
                    m.adapt = AdaptMode::none;
                } else {
                    throw ParseError(ParseErrorKind::bad_value, v.loc, "adapt must be frame, none or -on(nodes)");
                }
            } else if (key.text == "succ" && !seen_succ) {
                seen_succ = true;
                if (i + 1 >= s.size()) {
                    throw ParseError(ParseErrorKind::arity, key.loc, "usage: " + std::string(usage));
                }
                m.successor = index_arg(s[i + 1], IndexDomain::node);
                i += 2;
            } else {
                throw ParseError(ParseErrorKind::arity, key.loc, "unexpected '" + key.text + "'; usage: " + std::string(usage));
            }
        }
        c.measurements.push_back(std::move(m));
    }

    void adapt_list(MeasureDecl &m, const Token &v) {
        if (v.text.back() != ')') {
            throw ParseError(ParseErrorKind::bad_value, v.loc, "unterminated -on( list");
        }
        const std::string body = v.text.substr(4, v.text.size() - 5);
        if (body.empty()) {
            throw ParseError(ParseErrorKind::bad_value, v.loc, "-on() needs at least one node");
        }
        m.adapt = AdaptMode::outcomes;
        std::size_t start = 0;
        while (start <= body.size()) {
            const std::size_t comma = body.find(',', start);
            const std::size_t end = comma == std::string::npos ? body.size() : comma;
            const Token item{body.substr(start, end - start), {v.loc.line, v.loc.column + 4 + static_cast<int>(start)}};
            const int node = index_arg(item, IndexDomain::node);
            const auto &done = spec_.cluster->measurements;
            if (std::none_of(done.begin(), done.end(), [&](const MeasureDecl &d) { return d.node == node; })) {
                throw ParseError(ParseErrorKind::bad_value, item.loc,
                                 "angle depends on node " + item.text + ", which is not measured earlier");
            }
            m.adapt_on.push_back(node);
            if (comma == std::string::npos) {
                break;
            }
            start = comma + 1;
        }
    }

    [[noreturn]] void missing(SourceLocation loc, std::string_view what) {
        throw ParseError(ParseErrorKind::structure, loc, "needs a '" + std::string(what) + "' declaration");
    }

    void validate() {
        // Layer selection.
        const bool photonic = spec_.modes || spec_.input || !spec_.elements.empty() || spec_.herald;
        const bool logical = spec_.qubits || spec_.logical || !spec_.gates.empty();
        const bool cluster = spec_.cluster.has_value();
        if (static_cast<int>(photonic) + static_cast<int>(logical) + static_cast<int>(cluster) > 1) {
            SourceLocation loc{1, 1};
            if (photonic && logical) {
                loc = spec_.qubits ? spec_.qubits->loc : (spec_.logical ? spec_.logical->loc : spec_.gates.front().loc);
            } else if (cluster) {
                loc = spec_.cluster->loc;
            }
            throw ParseError(ParseErrorKind::structure, loc,
                             "an experiment uses one layer: modes, qubits or a cluster block");
        }

        std::int64_t modes = -1;
        std::int64_t qubits = -1;
        std::int64_t nodes = -1;
        if (photonic) {
            if (!spec_.modes) {
                missing(first_photonic_loc(), "modes");
            }
            modes = spec_.modes->value;
        }
        if (logical) {
            if (!spec_.qubits) {
                missing(spec_.logical ? spec_.logical->loc : spec_.gates.front().loc, "qubits");
            }
            qubits = spec_.qubits->value;
        }
        if (cluster) {
            if (spec_.cluster->nodes.loc.line == 0) {
                missing(spec_.cluster->loc, "nodes");
            }
            nodes = spec_.cluster->nodes.value;
        }
        if (spec_.detector && !photonic && !logical) {
            throw ParseError(ParseErrorKind::structure, spec_.detector->loc,
                             "detectors apply to photonic or gate experiments");
        }
        if (!photonic && !logical && !cluster) {
            throw ParseError(ParseErrorKind::structure, {1, 1}, "nothing to run: declare modes, qubits or a cluster block");
        }

        for (const auto &c : checks_) {
            std::int64_t limit = 0;
            std::string what;
            switch (c.domain) {
                case IndexDomain::mode:
                    limit = modes;
                    what = "mode";
                    break;
                case IndexDomain::pair:
                    limit = modes / 2;
                    what = "polarization pair";
                    break;
                case IndexDomain::qubit:
                    limit = qubits;
                    what = "qubit";
                    break;
                case IndexDomain::node:
                    limit = nodes;
                    what = "node";
                    break;
            }
            if (c.value >= limit) {
                throw ParseError(ParseErrorKind::undeclared_index, c.loc,
                                 what + " " + std::to_string(c.value) + " is not declared (" + std::to_string(std::max<std::int64_t>(limit, 0)) +
                                     " available)");
            }
        }

        if (spec_.input && static_cast<std::int64_t>(spec_.input->value.size()) != modes) {
            throw ParseError(ParseErrorKind::arity, spec_.input->loc,
                             "input lists " + std::to_string(spec_.input->value.size()) + " modes, declared " +
                                 std::to_string(modes));
        }
        if (spec_.herald && spec_.detector && !spec_.detector->value.number_resolving) {
            for (const auto &[mode, count] : spec_.herald->value.counts) {
                if (count > 1) {
                    throw ParseError(ParseErrorKind::bad_value, spec_.herald->loc,
                                     "threshold detectors only report 0 or 1");
                }
            }
        }
        if (spec_.logical) {
            const LogicalInput &in = spec_.logical->value;
            if (!in.amplitudes.empty()) {
                if (static_cast<std::int64_t>(in.amplitudes.size()) != (std::int64_t{1} << qubits)) {
                    throw ParseError(ParseErrorKind::arity, spec_.logical->loc,
                                     "expected " + std::to_string(std::int64_t{1} << qubits) + " amplitudes");
                }
                double norm = 0;
                for (const auto &a : in.amplitudes) {
                    norm += std::norm(a);
                }
                if (norm == 0.0) {
                    throw ParseError(ParseErrorKind::bad_value, spec_.logical->loc, "amplitudes are all zero");
                }
            } else if (static_cast<std::int64_t>(in.bits.size()) != qubits) {
                throw ParseError(ParseErrorKind::arity, spec_.logical->loc,
                                 "basis string has " + std::to_string(in.bits.size()) + " bits, declared " +
                                     std::to_string(qubits) + " qubits");
            }
        }
        if (spec_.sweep) {
            const SweepParameter p = spec_.sweep->value.parameter;
            const SourceLocation loc = spec_.sweep->loc;
            if (cluster) {
                throw ParseError(ParseErrorKind::structure, loc, "cluster experiments cannot be swept");
            }
            if (p != SweepParameter::efficiency && !photonic) {
                throw ParseError(ParseErrorKind::structure, loc, "only efficiency sweeps apply to gate experiments");
            }
            if (photonic && !spec_.herald) {
                throw ParseError(ParseErrorKind::structure, loc, "sweeps report a herald probability; add a herald");
            }
            if (p == SweepParameter::reflectivity &&
                std::none_of(spec_.elements.begin(), spec_.elements.end(),
                             [](const ElementDecl &e) { return e.kind == ElementKind::bs; })) {
                throw ParseError(ParseErrorKind::structure, loc, "reflectivity sweep needs a beamsplitter");
            }
        }
        if (logical && spec_.gates.empty()) {
            missing(spec_.qubits->loc, "gate");
        }
    }

    SourceLocation first_photonic_loc() const {
        if (spec_.input) {
            return spec_.input->loc;
        }
        if (!spec_.elements.empty()) {
            return spec_.elements.front().loc;
        }
        if (spec_.herald) {
            return spec_.herald->loc;
        }
        return spec_.detector->loc;
    }

    ExperimentSpec spec_;
    bool cluster_ = false;
    std::vector<IndexCheck> checks_;
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string_view element_name(ElementKind k) {
    switch (k) {
        case ElementKind::bs:
            return "bs";
        case ElementKind::phase:
            return "phase";
        case ElementKind::hwp:
            return "hwp";
        case ElementKind::qwp:
            return "qwp";
        case ElementKind::pbs:
            return "pbs";
        case ElementKind::swap:
            return "swap";
    }
    return "?";
}

}  // namespace

ExperimentSpec parse(std::string_view text) { return Parser().run(text); }

std::string serialize(const ExperimentSpec &s) {
    std::string out;
    auto line = [&](const std::string &l) { out += l + "\n"; };
    if (s.modes) {
        line("modes " + std::to_string(s.modes->value));
    }
    if (s.input) {
        std::string l = "input";
        for (int n : s.input->value) {
            l += " " + std::to_string(n);
        }
        line(l);
    }
    if (s.detector) {
        line("detector efficiency " + num(s.detector->value.efficiency) + " " +
             (s.detector->value.number_resolving ? "resolving" : "threshold"));
    }
    for (const auto &e : s.elements) {
        std::string l(element_name(e.kind));
        switch (e.kind) {
            case ElementKind::bs:
                l += " " + std::to_string(e.a) + " " + std::to_string(e.b) + " " + num(e.value);
                break;
            case ElementKind::phase:
            case ElementKind::hwp:
            case ElementKind::qwp:
                l += " " + std::to_string(e.a) + " " + num(e.value);
                break;
            case ElementKind::pbs:
            case ElementKind::swap:
                l += " " + std::to_string(e.a) + " " + std::to_string(e.b);
                break;
        }
        line(l);
    }
    if (s.herald) {
        std::string l = "herald";
        for (const auto &[m, c] : s.herald->value.counts) {
            l += " " + std::to_string(m) + "=" + std::to_string(c);
        }
        line(l);
    }
    if (s.qubits) {
        line("qubits " + std::to_string(s.qubits->value));
    }
    if (s.logical) {
        const LogicalInput &in = s.logical->value;
        if (in.amplitudes.empty()) {
            line("logical " + in.bits);
        } else {
            std::string l = "logical amps";
            for (const auto &a : in.amplitudes) {
                l += " " + num(a.real()) + " " + num(a.imag());
            }
            line(l);
        }
    }
    for (const auto &g : s.gates) {
        line("gate " + g.name + " control=q" + std::to_string(g.control) + " target=q" + std::to_string(g.target));
    }
    if (s.cluster) {
        const ClusterDecl &c = *s.cluster;
        line("cluster {");
        line("  nodes " + std::to_string(c.nodes.value));
        for (const auto &i : c.inits) {
            line("  init " + std::to_string(i.value.first) + " " + std::string(to_string(i.value.second)));
        }
        for (const auto &e : c.edges) {
            line("  edge " + std::to_string(e.value.first) + " " + std::to_string(e.value.second));
        }
        for (const auto &m : c.measurements) {
            std::string l = "  measure " + std::to_string(m.node);
            if (m.computational) {
                l += " z";
            } else {
                l += " angle " + num(m.degrees);
                if (m.adapt == AdaptMode::none) {
                    l += " adapt none";
                } else if (m.adapt == AdaptMode::outcomes) {
                    l += " adapt -on(";
                    for (std::size_t i = 0; i < m.adapt_on.size(); ++i) {
                        l += (i ? "," : "") + std::to_string(m.adapt_on[i]);
                    }
                    l += ")";
                }
                if (m.successor) {
                    l += " succ " + std::to_string(*m.successor);
                }
            }
            line(l);
        }
        line("}");
    }
    if (s.sweep) {
        const SweepDecl &w = s.sweep->value;
        line("sweep " + std::string(to_string(w.parameter)) + " from " + num(w.from) + " to " + num(w.to) + " steps " +
             std::to_string(w.steps));
    }
    if (s.trials) {
        line("trials " + std::to_string(s.trials->value.trials) + " seed " + std::to_string(s.trials->value.seed));
    }
    if (s.emit) {
        line("emit " + std::string(to_string(s.emit->value)));
    }
    return out;
}

}  // namespace lopsim::dsl
