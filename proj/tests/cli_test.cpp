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

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>

#include <json.hpp>

namespace {

struct Result {
    int status = -1;
    std::string out;
};

Result run_cli(const std::string &args) {
    const std::string cmd = std::string(LOPSIM_CLI) + " " + args + " 2>/dev/null";
    Result r;
    FILE *pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
        return r;
    }
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        r.out.append(buf.data(), n);
    }
    const int status = pclose(pipe);
    r.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string experiment(const std::string &name) { return std::string(LOPSIM_EXPERIMENTS_DIR) + "/" + name; }

std::filesystem::path temp_file(const std::string &name, const std::string &content) {
    const auto p = std::filesystem::temp_directory_path() / name;
    FILE *f = std::fopen(p.c_str(), "w");
    std::fputs(content.c_str(), f);
    std::fclose(f);
    return p;
}

TEST(Cli, RunEmitsCsvWithVersionAndSeed) {
    const Result r = run_cli("run " + experiment("hom.exp"));
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out.rfind("version,seed,probability,exact_probability\n0.1.0,0,0,0\n", 0), 0u) << r.out;
}

TEST(Cli, RunJsonAndSeedOverride) {
    const Result r = run_cli("run " + experiment("hom_lossy_trials.exp") + " --format json --seed 11 --trials 4");
    ASSERT_EQ(r.status, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("seed"), 11);
    EXPECT_EQ(j.at("rows").size(), 5u);
}

TEST(Cli, OutputIsByteIdentical) {
    const std::string args = "run " + experiment("hom_lossy_trials.exp") + " --seed 5";
    EXPECT_EQ(run_cli(args).out, run_cli(args).out);
}

TEST(Cli, OutWritesFile) {
    const auto path = std::filesystem::temp_directory_path() / "lopsim_cli_out.csv";
    std::filesystem::remove(path);
    const Result r = run_cli("run " + experiment("klm_cnot.exp") + " --out " + path.string());
    EXPECT_EQ(r.status, 0);
    EXPECT_TRUE(r.out.empty());
    EXPECT_TRUE(std::filesystem::exists(path));
}

TEST(Cli, SpecErrorsExitTwo) {
    EXPECT_EQ(run_cli("run " + temp_file("lopsim_bad.exp", "bs 0 5 0.5\nmodes 2\n").string()).status, 2);
    EXPECT_EQ(run_cli("run /nonexistent/file.exp").status, 2);
    EXPECT_EQ(run_cli("run " + experiment("hom_overlap_sweep.exp") + " --trials 3").status, 2);
    EXPECT_EQ(run_cli("frobnicate").status, 2);
    EXPECT_EQ(run_cli("run " + experiment("hom.exp") + " --format xml").status, 2);
}

TEST(Cli, RuntimeErrorsExitOne) {
    // 21 live qubits exceed the register cap only once the cluster is built.
    std::string text = "cluster {\n nodes 21\n";
    for (int i = 0; i < 20; ++i) {
        text += " edge " + std::to_string(i) + " " + std::to_string(i + 1) + "\n";
    }
    text += " measure 0 angle 0\n}\n";
    EXPECT_EQ(run_cli("run " + temp_file("lopsim_big.exp", text).string()).status, 1);
}

TEST(Cli, ConvenienceSubcommands) {
    EXPECT_EQ(run_cli("hom").status, 0);
    const Result c = run_cli("cnot-herald --format json");
    ASSERT_EQ(c.status, 0);
    EXPECT_EQ(nlohmann::json::parse(c.out).at("rows").size(), 4u);
    const Result t = run_cli("teleport-cnot --trials 100 --seed 2 --format csv");
    ASSERT_EQ(t.status, 0);
    EXPECT_NE(t.out.find("\n0.1.0,2,mean,"), std::string::npos);
    EXPECT_EQ(run_cli("cluster-demo --seed 3").status, 0);
    EXPECT_EQ(run_cli("--version").out, "0.1.0\n");
}

}  // namespace
