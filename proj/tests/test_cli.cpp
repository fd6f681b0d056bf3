// Copyright 2026 The magicproj Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "gtest/gtest.h"
#include "json.hpp"

namespace {

struct Run {
    int status;
    std::string out;
};

// Runs the CLI with `args`, capturing stdout.
Run run(const std::string &args) {
    const std::string cmd = std::string(MAGICPROJ_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE *pipe = popen(cmd.c_str(), "r");
    Run r{-1, {}};
    if (!pipe) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::string slurp(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class CliTest : public ::testing::Test {
   protected:
    void SetUp() override {
        dir_ = std::filesystem::temp_directory_path() /
               ("magicproj_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        std::filesystem::create_directories(dir_);
    }
    void TearDown() override { std::filesystem::remove_all(dir_); }
    std::filesystem::path dir_;
};

}  // namespace

TEST_F(CliTest, verify_passes) {
    auto r = run("verify");
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("verify: ok"), std::string::npos);
    EXPECT_NE(r.out.find("max_dev="), std::string::npos);
}

TEST_F(CliTest, verify_literal_s_reports_expected_fail) {
    auto r = run("verify --literal-paper-s");
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("EXPECTED-FAIL"), std::string::npos);
}

TEST_F(CliTest, theory_json) {
    auto r = run("theory --na 5 --nb 4 --magic 0.75");
    ASSERT_EQ(r.status, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["alpha"].get<double>(), 0.1035626733851829, 1e-15);
    EXPECT_NEAR(j["beta"].get<double>(), 0.032018314482524624, 1e-15);
    EXPECT_NEAR(j["prediction"].get<double>(), 0.07954893752328943, 1e-15);
    EXPECT_LT(j["epsilon"].get<double>(), 0);
    EXPECT_EQ(j["no_measurement"]["d"], 512);
    EXPECT_TRUE(j.contains("x"));
    EXPECT_TRUE(j.contains("y"));
}

TEST_F(CliTest, decay_writes_csv_and_sidecar) {
    const auto out = dir_ / "decay.csv";
    auto r = run("decay --na 2 --nb 2 --theta 0,pi/4 --depths 1:6 --reps 4 --seed 3 --out " + out.string());
    ASSERT_EQ(r.status, 0);
    const std::string csv = slurp(out);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "experiment_id,seed,n_a,n_b,theta,magic,depth,t,norm_kind,mean,std_err,reps");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 13);
    auto side = nlohmann::json::parse(slurp(dir_ / "decay.json"));
    EXPECT_EQ(side["fits"].size(), 2u);
    EXPECT_EQ(side["config"]["seed"], 3);
}

TEST_F(CliTest, thread_count_does_not_change_output) {
    const std::string base = "decay --na 2 --nb 3 --theta magic:0,0.5 --depths 1:8 --reps 6 --seed 11 --out ";
    ASSERT_EQ(run(base + (dir_ / "a.csv").string() + " --threads 1").status, 0);
    ASSERT_EQ(run(base + (dir_ / "b.csv").string() + " --threads 3").status, 0);
    EXPECT_EQ(slurp(dir_ / "a.csv"), slurp(dir_ / "b.csv"));
}

TEST_F(CliTest, config_file_with_flag_override) {
    const auto cfg = dir_ / "cfg.json";
    std::ofstream(cfg) << R"({"na": 2, "nb": 2, "theta": [0.0], "depths": "1:5", "reps": 3, "seed": 9, "norm": "hs2"})";
    auto r = run("decay --config " + cfg.string() + " --reps 5");
    ASSERT_EQ(r.status, 0);
    EXPECT_NE(r.out.find(",hs2,"), std::string::npos);
    EXPECT_NE(r.out.find(",5\n"), std::string::npos);
    EXPECT_EQ(r.out.find(",3\n"), std::string::npos);
}

TEST_F(CliTest, exit_codes) {
    EXPECT_EQ(run("decay --reps 0").status, 1);
    EXPECT_EQ(run("decay --na 8 --nb 8").status, 1);
    EXPECT_EQ(run("decay --norm l1").status, 1);
    EXPECT_EQ(run("decay --theta pi/x").status, 1);
    EXPECT_EQ(run("bogus").status, 1);
    EXPECT_EQ(run("decay --config /nonexistent/cfg.json").status, 1);
    EXPECT_EQ(run("decay --na 5 --nb 1 --t 4 --norm trace").status, 3);
}

TEST_F(CliTest, variance_and_linear_run) {
    auto v = run("variance --na 1,2 --nb 2 --depths 10 --reps 5 --seed 2");
    EXPECT_EQ(v.status, 0);
    EXPECT_NE(v.out.find("variance-na1"), std::string::npos);
    auto l = run("linear --na 2 --nb 2 --theta magic:0,0.3 --depths 1:12 --reps 5 --seed 2");
    EXPECT_EQ(l.status, 0);
    EXPECT_NE(l.out.find(",hs2,"), std::string::npos);
}
