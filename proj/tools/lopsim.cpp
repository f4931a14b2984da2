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

// lopsim command-line driver.
//
//   lopsim run FILE [--seed S] [--trials N] [--format json|csv] [--out PATH]
//   lopsim hom | cnot-herald | teleport-cnot | cluster-demo
//
// Exit status: 0 on success, 2 for a bad experiment or bad arguments, 1 otherwise.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "lopsim/dsl.hpp"
#include "lopsim/runner.hpp"

namespace {

constexpr int kSpecError = 2;
constexpr int kRuntimeError = 1;

const std::map<std::string, lopsim::dsl::OutputFormat> kFormats = {
    {"csv", lopsim::dsl::OutputFormat::csv},
    {"json", lopsim::dsl::OutputFormat::json},
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::invalid_argument("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string &text, const std::string &out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + out_path);
    }
    out << text;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Simulator for photonic qubits in linear optics"};
    app.set_version_flag("--version", std::string(lopsim::kVersion));
    app.require_subcommand(1);

    std::string file;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> trials;
    std::optional<lopsim::dsl::OutputFormat> format;

    auto *run = app.add_subcommand("run", "Run an experiment file");
    run->add_option("file", file, "Experiment file")->required();
    run->add_option("--seed", seed, "Override the seed");
    run->add_option("--trials", trials, "Run N Monte Carlo trials");
    run->add_option("--format", format, "Output format")->transform(CLI::CheckedTransformer(kFormats));
    run->add_option("--out", out_path, "Write output to PATH");

    int hom_steps = 11;
    double hom_r = 0.5;
    auto *hom = app.add_subcommand("hom", "Coincidence probability against photon overlap");
    hom->add_option("--steps", hom_steps, "Overlap grid points")->check(CLI::Range(2, 100000));
    hom->add_option("--reflectivity", hom_r, "Beamsplitter reflectivity")->check(CLI::Range(0.0, 1.0));

    double efficiency = 1.0;
    bool threshold = false;
    auto *cnot = app.add_subcommand("cnot-herald", "KLM CNOT herald statistics on the computational basis");
    cnot->add_option("--efficiency", efficiency, "Detector efficiency")->check(CLI::Range(0.0, 1.0));
    cnot->add_flag("--threshold", threshold, "Use threshold (click/no-click) detectors");

    std::int64_t tc_trials = 100000;
    std::uint64_t tc_seed = 1;
    std::string tc_input = "10";
    auto *tc = app.add_subcommand("teleport-cnot", "Entangled-pair cost of the teleported CNOT");
    tc->add_option("--trials", tc_trials, "Number of trials")->check(CLI::PositiveNumber);
    tc->add_option("--seed", tc_seed, "Seed");
    tc->add_option("--input", tc_input, "Two-bit computational input");

    std::uint64_t cd_seed = 0;
    double alpha = 30;
    double beta = 45;
    double gamma = 60;
    auto *cd = app.add_subcommand("cluster-demo", "Single-qubit rotation on a five-node linear cluster");
    cd->add_option("--seed", cd_seed, "Seed");
    cd->add_option("--alpha", alpha, "First Euler angle, degrees");
    cd->add_option("--beta", beta, "Second Euler angle, degrees");
    cd->add_option("--gamma", gamma, "Third Euler angle, degrees");

    for (auto *sub : {hom, cnot, tc, cd}) {
        sub->add_option("--format", format, "Output format")->transform(CLI::CheckedTransformer(kFormats));
        sub->add_option("--out", out_path, "Write output to PATH");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kSpecError;
    }

    try {
        lopsim::Report report;
        if (run->parsed()) {
            const lopsim::dsl::ExperimentSpec spec = lopsim::dsl::parse(read_file(file));
            report = lopsim::run(spec, {seed, trials, format});
        } else if (hom->parsed()) {
            report = lopsim::hom_report(hom_steps, hom_r);
        } else if (cnot->parsed()) {
            lopsim::DetectorModel d;
            d.efficiency = efficiency;
            d.number_resolving = !threshold;
            report = lopsim::cnot_herald_report(d);
        } else if (tc->parsed()) {
            report = lopsim::teleport_cnot_report(tc_trials, tc_seed, tc_input);
        } else {
            report = lopsim::cluster_demo_report(cd_seed, alpha, beta, gamma);
        }
        if (format) {
            report.format = *format;
        }
        emit(lopsim::render(report), out_path);
    } catch (const lopsim::dsl::ParseError &e) {
        std::cerr << file << ":" << e.what() << "\n";
        return kSpecError;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSpecError;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
    return 0;
}
