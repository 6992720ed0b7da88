// Copyright 2026 The qramc Authors
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

#include "cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qramc {
namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::main(args, out, err);
    return {code, out.str(), err.str()};
}

std::string circuit(const std::string& name) { return std::string(QRAMC_CIRCUIT_DIR) + "/" + name; }

std::string value(const std::string& report, const std::string& key) {
    std::istringstream in(report);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(key + "=", 0) == 0) {
            return line.substr(key.size() + 1);
        }
    }
    return "";
}

TEST(CliRun, WritesDistributionFile) {
    const auto path = std::filesystem::temp_directory_path() / "qramc_cli_run.tsv";
    const auto r = call({"run", "--circuit", circuit("read_and_store.qram"), "--input", "1011",
                         "--measure", "0..3", "--output", path.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    std::stringstream text;
    text << in.rdbuf();
    EXPECT_NE(text.str().find("0011\t0.125\n"), std::string::npos);
    EXPECT_EQ(value(text.str(), "max_weight"), "1");
    EXPECT_EQ(value(text.str(), "exceeded"), "0");
    std::filesystem::remove(path);
}

TEST(CliRun, MissingFile) {
    const auto r = call({"run", "--circuit", "/nonexistent/c.qram"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("cannot read"), std::string::npos);
}

TEST(CliRun, EnforceSparsityNamesStep) {
    const auto r = call({"run", "--circuit", circuit("not_sparse.qram"), "--enforce-sparsity"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("step 5"), std::string::npos);
    const auto monitor = call({"run", "--circuit", circuit("not_sparse.qram")});
    EXPECT_EQ(monitor.code, 0);
    EXPECT_EQ(value(monitor.out, "first_violation"), "5");
}

TEST(CliRun, BadFlagsAndInput) {
    EXPECT_EQ(call({"run", "--circuit", circuit("swap_roundtrip.qram"), "--bogus"}).code, 1);
    EXPECT_EQ(call({"run", "--circuit", circuit("swap_roundtrip.qram"), "--input", "01"}).code, 1);
    EXPECT_EQ(call({"run", "--circuit", circuit("swap_roundtrip.qram"), "--measure", "9"}).code, 1);
    EXPECT_EQ(call({"run"}).code, 1);
    EXPECT_EQ(call({}).code, 1);
}

TEST(CliRun, ParseErrorHasLine) {
    const auto path = std::filesystem::temp_directory_path() / "qramc_cli_bad.qram";
    std::ofstream(path) << "QRAM n=1 W=4 M=8 m=2\nH 0\nFOO 1\n";
    const auto r = call({"run", "--circuit", path.string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find(":3:"), std::string::npos);
    std::filesystem::remove(path);
}

TEST(CliCompare, ExactBundledExamples) {
    for (const char* name : {"swap_roundtrip.qram", "superposed_write.qram", "read_and_store.qram",
                             "random_seed0.qram"}) {
        const auto r = call({"compare", "--circuit", circuit(name), "--input", ""});
        ASSERT_EQ(r.code, 0) << name << ": " << r.err;
        EXPECT_LE(std::stod(value(r.out, "tv_distance")), 1e-9) << name;
        EXPECT_FALSE(value(r.out, "qubits_compressed").empty());
        EXPECT_EQ(value(r.out, "remainder_mass"), "0");
    }
}

TEST(CliCompare, ApproxBudget) {
    const auto r = call({"compare", "--circuit", circuit("random_seed0.qram"), "--mode", "approx",
                         "--eps", "0.1"});
    ASSERT_EQ(r.code, 0) << r.err;
    // T = 20 instructions.
    EXPECT_DOUBLE_EQ(std::stod(value(r.out, "epsilon_per_use")), 0.1 / 40.0);
    const double threshold = std::stod(value(r.out, "threshold"));
    EXPECT_LE(threshold, 0.1);
    EXPECT_LE(std::stod(value(r.out, "tv_distance")), threshold);
    EXPECT_EQ(call({"compare", "--circuit", circuit("random_seed0.qram"), "--mode", "approx"}).code,
              1);
    EXPECT_EQ(call({"compare", "--circuit", circuit("random_seed0.qram"), "--mode", "fuzzy"}).code,
              1);
}

TEST(CliCompare, SparsityViolation) {
    const auto r = call({"compare", "--circuit", circuit("not_sparse.qram")});
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(r.out.empty());
}

TEST(CliCompare, Checkpoints) {
    const auto r = call({"compare", "--circuit", circuit("superposed_write.qram"), "--checkpoints",
                         "0,2,6"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(std::stod(value(r.out, "checkpoint_2_fidelity")), 1.0, 1e-10);
    EXPECT_NEAR(std::stod(value(r.out, "checkpoint_6_fidelity")), 1.0, 1e-10);
    EXPECT_EQ(call({"compare", "--circuit", circuit("superposed_write.qram"), "--checkpoints",
                    "7"})
                  .code,
              1);
}

TEST(CliDemo, Radix) {
    const auto r = call({"demo", "radix"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("(root)\n  0000 *\n  1\n    0\n      01 *\n      11 *\n    111 *\n"),
              std::string::npos);
}

TEST(CliDemo, KedEndsWithQuery) {
    const auto r = call({"demo", "ked", "--n", "4", "--k", "2", "--seed", "0"});
    ASSERT_EQ(r.code, 0);
    ASSERT_GE(r.out.size(), 8u);
    EXPECT_EQ(r.out.substr(r.out.rfind("query=")), r.out.substr(r.out.size() - 8));
}

TEST(CliDemo, CpShowsExternalCounts) {
    const auto r = call({"demo", "cp", "--d", "1", "--eps", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("size/external"), std::string::npos);
    EXPECT_EQ(call({"demo", "cp", "--d", "1", "--eps", "-2"}).code, 1);
    EXPECT_EQ(call({"demo", "tree"}).code, 1);
}

TEST(Cli, DeterministicAndSeedFallback) {
    const std::vector<std::string> args{"demo", "ked", "--n", "6", "--k", "2"};
    const auto a = call(args);
    EXPECT_EQ(a.out, call(args).out);
    ::setenv("QRAMC_SEED", "9", 1);
    const auto env = call(args);
    ::unsetenv("QRAMC_SEED");
    auto with_flag = args;
    with_flag.insert(with_flag.end(), {"--seed", "9"});
    EXPECT_EQ(env.out, call(with_flag).out);
    EXPECT_NE(env.out, a.out);
    ::setenv("QRAMC_SEED", "x", 1);
    EXPECT_EQ(call(args).code, 1);
    ::unsetenv("QRAMC_SEED");
    const auto cmp = std::vector<std::string>{"compare", "--circuit", circuit("random_seed0.qram")};
    EXPECT_EQ(call(cmp).out, call(cmp).out);
}

TEST(Cli, GenerateMatchesBundledCircuit) {
    const auto r = call({"generate", "--seed", "0", "--W", "5", "--M", "8", "--m", "2", "--T", "20"});
    ASSERT_EQ(r.code, 0);
    std::ifstream in(circuit("random_seed0.qram"));
    std::stringstream text;
    text << in.rdbuf();
    const auto body = text.str().substr(text.str().find('\n') + 1);
    EXPECT_EQ(r.out, body);
    EXPECT_EQ(call({"generate", "--W", "2", "--M", "8"}).code, 1);
}

}  // namespace
}  // namespace qramc
