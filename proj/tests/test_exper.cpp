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

#include "magicproj/exper.hpp"

#include <filesystem>

#include "gtest/gtest.h"
#include "magicproj/verify.hpp"

using namespace magicproj;

namespace {

ExperimentConfig small_decay() {
    ExperimentConfig c;
    c.n_a = 2;
    c.n_b = 3;
    c.theta_list = {0.0, kPi / 4};
    c.depths = {0, 1, 5, 10, 20, 30};
    c.reps = 8;
    c.master_seed = 99;
    return c;
}

}  // namespace

TEST(exper, config_validation) {
    ExperimentConfig c = small_decay();
    EXPECT_NO_THROW(c.validate());
    c.reps = 0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = small_decay();
    c.depths.clear();
    EXPECT_THROW(c.validate(), ConfigError);
    c = small_decay();
    c.n_a = 7;
    c.n_b = 6;
    EXPECT_THROW(c.validate(), ConfigError);
    EXPECT_THROW(run_decay(c), ConfigError);
    c = small_decay();
    c.n_a = 4;
    c.t = 4;
    EXPECT_THROW(c.validate(), ResourceError);
    c.norm_kind = NormKind::HSSquared;
    EXPECT_NO_THROW(c.validate());
}

TEST(exper, depth_zero_is_the_product_state) {
    ExperimentConfig c = small_decay();
    c.depths = {0};
    c.reps = 3;
    auto r = run_decay(c);
    ASSERT_EQ(r.records.size(), 2u);
    for (const auto &rec : r.records) {
        auto ens = projected_ensemble(product_phase_state(5, rec.theta), 2, 3);
        EXPECT_NEAR(rec.mean, design_distance(ens, 2, NormKind::TraceNormalized), 1e-12);
        EXPECT_NEAR(rec.std_err, 0.0, 1e-12);
    }
}

TEST(exper, record_layout_and_order) {
    auto c = small_decay();
    auto r = run_decay(c);
    ASSERT_EQ(r.records.size(), c.theta_list.size() * c.depths.size());
    for (std::size_t i = 0; i < r.records.size(); ++i) {
        const auto &rec = r.records[i];
        EXPECT_EQ(rec.theta, c.theta_list[i / c.depths.size()]);
        EXPECT_EQ(rec.depth, c.depths[i % c.depths.size()]);
        EXPECT_EQ(rec.reps, c.reps);
        EXPECT_GE(rec.std_err, 0);
        EXPECT_GE(rec.magic, 0);
        EXPECT_LT(rec.magic, 1);
    }
    EXPECT_NEAR(r.records.back().magic, product_phase_magic(5, kPi / 4), 1e-15);
    ASSERT_EQ(r.fits.size(), 2u);
}

TEST(exper, deterministic_across_thread_counts) {
    auto c = small_decay();
    c.threads = 1;
    const std::string one = to_csv(run_decay(c).records);
    c.threads = 4;
    EXPECT_EQ(one, to_csv(run_decay(c).records));
    c.master_seed = 100;
    EXPECT_NE(one, to_csv(run_decay(c).records));
}

TEST(exper, csv_format) {
    ExperimentRecord r{"x", 5, 2, 4, 0.1, 0.25, 7, 2, NormKind::HSSquared, 1.0 / 3.0, 0.0, 50};
    const std::string csv = to_csv({r});
    EXPECT_EQ(csv, "experiment_id,seed,n_a,n_b,theta,magic,depth,t,norm_kind,mean,std_err,reps\n"
                   "x,5,2,4,0.10000000000000001,0.25,7,2,hs2,0.33333333333333331,0,50\n");
    EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(exper, variance_degenerate_sample) {
    ExperimentConfig c;
    c.experiment = ExperimentKind::Variance;
    c.n_a_sweep = {2, 3};
    c.n_b = 2;
    c.depths = {20};
    c.theta_list = {kPi / 4};
    c.reps = 1;
    auto r = run_variance(c);
    ASSERT_EQ(r.points.size(), 2u);
    for (const auto &p : r.points) {
        EXPECT_TRUE(p.degenerate);
        EXPECT_EQ(p.variance, 0.0);
    }
    c.reps = 30;
    auto a = run_variance(c), b = run_variance(c);
    EXPECT_FALSE(a.points[0].degenerate);
    EXPECT_GT(a.points[0].variance, 0.0);
    EXPECT_EQ(a.points[0].variance, b.points[0].variance);
}

// Fit failure is flagged and the run continues.
TEST(exper, linear_flags_fit_failure) {
    ExperimentConfig c = small_decay();
    c.experiment = ExperimentKind::Linear;
    c.norm_kind = NormKind::HSSquared;
    c.depths = {5, 10};
    auto r = run_linear(c);
    ASSERT_EQ(r.points.size(), 2u);
    for (const auto &p : r.points) {
        EXPECT_FALSE(p.ok);
        EXPECT_FALSE(p.diagnostic.empty());
    }
    EXPECT_FALSE(r.line.has_value());
}

// Oracle: at n = 2 the deep-circuit limit is the uniform Clifford average,
// computed here by enumerating all 11520 elements.
TEST(exper, linear_theta_zero_matches_enumeration) {
    const auto table = enumerate_clifford_group(2);
    const auto psi = product_phase_state(2, 0.0);
    std::vector<double> values;
    for (std::size_t k = 0; k < table.size(); ++k) {
        Eigen::VectorXcd v = table[k] * psi.as_eigen();
        StateVector s(2, std::vector<cplx>(v.data(), v.data() + v.size()));
        values.push_back(design_distance(projected_ensemble(s, 1, 1), 2, NormKind::HSSquared));
    }
    const double exact = compensated_sum(values) / static_cast<double>(values.size());

    ExperimentConfig c;
    c.experiment = ExperimentKind::Linear;
    c.n_a = 1;
    c.n_b = 1;
    c.theta_list = {0.0};
    c.depths = parse_depth_spec("1:40");
    c.reps = 400;
    c.norm_kind = NormKind::HSSquared;
    c.master_seed = 5;
    auto r = run_linear(c);
    ASSERT_EQ(r.points.size(), 1u);
    const auto &p = r.points[0];
    ASSERT_TRUE(p.ok) << p.diagnostic;
    EXPECT_EQ(p.magic, 0.0);
    // Combined error: fit standard error plus the tail mean's standard error.
    const double tail_se = r.decay.records.back().std_err;
    EXPECT_NEAR(p.extrapolated, exact, 3 * std::hypot(p.std_err, tail_se));
}

TEST(exper, fit_line) {
    std::vector<double> x = {0, 1, 2, 3}, y = {1, 0.5, 0, -0.5};
    auto f = fit_line(x, y);
    EXPECT_NEAR(f.slope, -0.5, 1e-15);
    EXPECT_NEAR(f.intercept, 1.0, 1e-15);
    EXPECT_NEAR(f.r_squared, 1.0, 1e-15);
    std::vector<double> same = {1, 1};
    EXPECT_THROW(fit_line(same, same), ArgumentError);
}

TEST(exper, angle_and_grid_parsing) {
    EXPECT_DOUBLE_EQ(parse_angle("pi/4"), kPi / 4);
    EXPECT_DOUBLE_EQ(parse_angle("3pi/8"), 3 * kPi / 8);
    EXPECT_DOUBLE_EQ(parse_angle("-pi"), -kPi);
    EXPECT_DOUBLE_EQ(parse_angle("0.25"), 0.25);
    EXPECT_THROW(parse_angle("pi*x"), ConfigError);
    EXPECT_THROW(parse_angle("abc"), ConfigError);

    auto lin = parse_theta_spec("linspace:0:pi/4:5", 6);
    ASSERT_EQ(lin.size(), 5u);
    EXPECT_DOUBLE_EQ(lin[4], kPi / 4);
    auto mg = parse_theta_spec("magic:0,0.5", 6);
    EXPECT_NEAR(product_phase_magic(6, mg[1]), 0.5, 1e-12);
    EXPECT_THROW(parse_theta_spec("magic:0.9", 1), ConfigError);
    EXPECT_EQ(parse_theta_spec("0,pi/2", 3).size(), 2u);

    EXPECT_EQ(parse_depth_spec("1,2,5"), (std::vector<int>{1, 2, 5}));
    EXPECT_EQ(parse_depth_spec("2:10:4"), (std::vector<int>{2, 6, 10}));
    EXPECT_EQ(parse_depth_spec("1:3"), (std::vector<int>{1, 2, 3}));
    EXPECT_THROW(parse_depth_spec("5:1"), ConfigError);
    EXPECT_THROW(parse_depth_spec("1.5"), ConfigError);
}

TEST(exper, json_config_round_trip) {
    ExperimentConfig c = small_decay();
    c.norm_kind = NormKind::HS;
    c.literal_paper_s = true;
    ExperimentConfig d;
    apply_json(d, to_json(c));
    EXPECT_EQ(to_json(d), to_json(c));
    ExperimentConfig e;
    apply_json(e, json::parse(R"({"na": 3, "nb": 2, "theta": "linspace:0:pi/4:3", "depths": "1:4"})"));
    EXPECT_EQ(e.theta_list.size(), 3u);
    EXPECT_EQ(e.depths.size(), 4u);
    EXPECT_THROW(apply_json(e, json::parse(R"({"reps": "many"})")), ConfigError);
    EXPECT_THROW(apply_json(e, json::parse("[1]")), ConfigError);
}

TEST(exper, writes_csv_and_sidecar) {
    const auto dir = std::filesystem::temp_directory_path() / "magicproj_test_exper";
    std::filesystem::create_directories(dir);
    auto c = small_decay();
    auto r = run_decay(c);
    write_outputs(dir / "run.csv", c, r.records, {{"fits", fits_to_json(r.fits)}});
    std::ifstream js(dir / "run.json");
    auto side = json::parse(js);
    EXPECT_EQ(side["version"], std::string(kVersion));
    EXPECT_EQ(side["fit_model"], std::string(kFitModel));
    EXPECT_EQ(side["config"]["reps"], 8);
    EXPECT_EQ(side["fits"].size(), 2u);
    std::ifstream csv(dir / "run.csv");
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(header, kCsvHeader);
    std::filesystem::remove_all(dir);
}

TEST(exper, verify_report) {
    auto report = run_verify();
    EXPECT_TRUE(report.ok());
    EXPECT_EQ(report.checks.size(), 8u);
    for (const auto &c : report.checks) EXPECT_TRUE(c.passed) << c.name << " " << c.max_deviation;
    auto literal = run_verify({true, 1});
    EXPECT_TRUE(literal.ok());
    const auto &inv = literal.checks.back();
    EXPECT_EQ(inv.name, "magic_invariance");
    EXPECT_TRUE(inv.expected_fail);
    EXPECT_FALSE(inv.passed);
}
