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

#include "magicproj/fit.hpp"

#include <numeric>

#include "gtest/gtest.h"
#include "magicproj/rng.hpp"

using namespace magicproj;

namespace {

std::vector<double> range_depths(int lo, int hi) {
    std::vector<double> d(hi - lo + 1);
    std::iota(d.begin(), d.end(), lo);
    return d;
}

}  // namespace

TEST(fit, noiseless_recovery) {
    auto L = range_depths(1, 100);
    std::vector<double> y;
    for (double l : L) y.push_back(0.1 + 0.5 * std::exp(-0.05 * l));
    auto f = fit_exponential(L, y);
    ASSERT_EQ(f.status, FitStatus::Ok);
    EXPECT_NEAR(f.offset_c, 0.1, 1e-6);
    EXPECT_NEAR(f.amplitude_a, 0.5, 1e-6);
    EXPECT_NEAR(f.rate_lambda, 0.05, 1e-6);
    EXPECT_LT(f.residual_rms, 1e-8);
    EXPECT_NEAR(f(1e6), 0.1, 1e-6);
}

TEST(fit, noiseless_recovery_sparse_grid) {
    const std::vector<double> L = {1, 2, 5, 10, 20, 40, 70, 100, 140, 200};
    std::vector<double> y;
    for (double l : L) y.push_back(0.3 - 0.2 * std::exp(-0.8 * l));
    auto f = fit_exponential(L, y);
    EXPECT_NEAR(f.offset_c, 0.3, 1e-6);
    EXPECT_NEAR(f.amplitude_a, -0.2, 1e-6);
    EXPECT_NEAR(f.rate_lambda, 0.8, 1e-5);
}

TEST(fit, constant_data) {
    auto L = range_depths(1, 10);
    std::vector<double> y(L.size(), 0.3);
    auto f = fit_exponential(L, y);
    EXPECT_EQ(f.status, FitStatus::ConstantData);
    EXPECT_NEAR(f.offset_c, 0.3, 1e-12);
    EXPECT_NEAR(f.amplitude_a, 0.0, 1e-12);
    EXPECT_TRUE(std::isnan(f.rate_lambda));
}

TEST(fit, argument_checks) {
    std::vector<double> L = {1, 2, 3, 3, 3}, y = {1, 2, 3, 4, 5};
    EXPECT_THROW(fit_exponential(L, y), ArgumentError);
    std::vector<double> L4 = {1, 2, 3, 4}, y3 = {1, 2, 3};
    EXPECT_THROW(fit_exponential(L4, y3), ArgumentError);
    std::vector<double> y4 = {1, 0.5, 0.3, 0.2}, se3 = {0.1, 0.1, 0.1};
    EXPECT_THROW(fit_exponential(L4, y4, std::span<const double>(se3)), ArgumentError);
}

// Monte-Carlo calibration: with Gaussian noise sigma = 0.005 the offset lies
// within 3 reported standard errors in at least 95 of 100 seeded trials.
TEST(fit, noisy_offset_calibration) {
    auto L = range_depths(1, 100);
    int covered = 0;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        SplitMix64 gen(derive_seed(2718, {trial}));
        std::vector<double> y, se(L.size(), 0.005);
        for (double l : L) y.push_back(0.1 + 0.5 * std::exp(-0.05 * l) + 0.005 * standard_normal(gen));
        auto f = fit_exponential(L, y, std::span<const double>(se));
        ASSERT_EQ(f.status, FitStatus::Ok);
        ASSERT_GT(f.offset_std_err, 0);
        if (std::abs(f.offset_c - 0.1) <= 3 * f.offset_std_err) ++covered;
    }
    EXPECT_GE(covered, 95);
}

// A zero or near-zero error bar must not pin the fit to that point.
TEST(fit, tiny_error_bars_are_floored) {
    auto L = range_depths(1, 60);
    std::vector<double> y, se;
    SplitMix64 gen(3);
    for (double l : L) {
        y.push_back(0.2 + 0.6 * std::exp(-0.04 * l) + 0.01 * standard_normal(gen));
        se.push_back(0.01);
    }
    se[0] = 1e-17;
    se[1] = 0;
    auto f = fit_exponential(L, y, std::span<const double>(se));
    ASSERT_EQ(f.status, FitStatus::Ok);
    EXPECT_NEAR(f.offset_c, 0.2, 0.05);
    std::vector<double> zeros(L.size(), 0.0);
    auto g = fit_exponential(L, y, std::span<const double>(zeros));
    auto h = fit_exponential(L, y);
    EXPECT_EQ(g.offset_c, h.offset_c);
}
