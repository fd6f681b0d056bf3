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

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "magicproj/core.hpp"

namespace magicproj {

enum class FitStatus { Ok, ConstantData, Failed };

inline std::string_view to_string(FitStatus s) {
    switch (s) {
        case FitStatus::Ok: return "ok";
        case FitStatus::ConstantData: return "constant_data";
        case FitStatus::Failed: return "failed";
    }
    return "?";
}

/// f(L) = offset_c + amplitude_a * exp(-rate_lambda * L)
struct FitResult {
    double offset_c = 0;
    double amplitude_a = 0;
    double rate_lambda = std::numeric_limits<double>::quiet_NaN();
    /// Unweighted RMS of the residuals, in data units.
    double residual_rms = 0;
    double offset_std_err = 0;
    FitStatus status = FitStatus::Failed;

    double operator()(double depth) const {
        return status == FitStatus::Ok ? offset_c + amplitude_a * std::exp(-rate_lambda * depth) : offset_c;
    }
};

namespace detail {

struct LinearSolve {
    double c = 0, a = 0, weighted_rss = std::numeric_limits<double>::infinity();
    bool ok = false;
};

/// Weighted least squares for (c, A) at fixed rate.
inline LinearSolve solve_offset_amplitude(std::span<const double> depths, std::span<const double> values,
                                          std::span<const double> weights, double rate) {
    double sw = 0, se = 0, see = 0, sy = 0, sey = 0;
    for (std::size_t k = 0; k < depths.size(); ++k) {
        const double e = std::exp(-rate * depths[k]), w = weights[k];
        sw += w;
        se += w * e;
        see += w * e * e;
        sy += w * values[k];
        sey += w * e * values[k];
    }
    LinearSolve out;
    const double det = sw * see - se * se;
    if (!(std::abs(det) > 1e-300) || !(det > 1e-14 * sw * see)) return out;
    out.c = (see * sy - se * sey) / det;
    out.a = (sw * sey - se * sy) / det;
    double rss = 0;
    for (std::size_t k = 0; k < depths.size(); ++k) {
        const double r = values[k] - out.c - out.a * std::exp(-rate * depths[k]);
        rss += weights[k] * r * r;
    }
    out.weighted_rss = rss;
    out.ok = true;
    return out;
}

}  // namespace detail

/// Weighted least-squares fit of c + A exp(-lambda L).
///
/// The rate is located on a 64-point log grid over [1/max_depth, 4], with
/// (c, A) solved in closed form at each grid point, then refined by
/// golden-section search between the neighbours of the best grid point.
/// `std_errs`, when given, weight each point by 1/std_err^2. The offset
/// standard error comes from the linearized covariance scaled by the
/// reduced chi-square.
inline FitResult fit_exponential(std::span<const double> depths, std::span<const double> means,
                                 std::optional<std::span<const double>> std_errs = std::nullopt) {
    if (depths.size() != means.size()) throw ArgumentError("fit_exponential: depths and means differ in length");
    if (std_errs && std_errs->size() != means.size()) {
        throw ArgumentError("fit_exponential: std_errs length differs from means");
    }
    if (std::set<double>(depths.begin(), depths.end()).size() < 4) {
        throw ArgumentError("fit_exponential: need at least 4 distinct depths");
    }
    const std::size_t n = depths.size();
    FitResult result;

    double mean_value = 0;
    for (double v : means) mean_value += v;
    mean_value /= static_cast<double>(n);
    double spread = 0;
    for (double v : means) spread = std::max(spread, std::abs(v - mean_value));
    if (spread <= 1e-14 * std::max(1.0, std::abs(mean_value))) {
        result.offset_c = mean_value;
        result.amplitude_a = 0;
        result.status = FitStatus::ConstantData;
        return result;
    }

    std::vector<double> weights(n, 1.0);
    if (std_errs) {
        // Error bars are floored at a quarter of the median positive one, so
        // a near-deterministic point (e.g. depth 1, or reps = 1 giving 0)
        // cannot dominate the fit.
        std::vector<double> positive;
        for (double s : *std_errs)
            if (s > 0 && std::isfinite(s)) positive.push_back(s);
        if (!positive.empty()) {
            std::nth_element(positive.begin(), positive.begin() + positive.size() / 2, positive.end());
            const double floor = 0.25 * positive[positive.size() / 2];
            for (std::size_t k = 0; k < n; ++k) {
                const double s = std::max((*std_errs)[k], floor);
                weights[k] = 1.0 / (s * s);
            }
        }
    }

    const double max_depth = *std::max_element(depths.begin(), depths.end());
    const double lo = std::log(1.0 / std::max(max_depth, 1.0)), hi = std::log(4.0);
    constexpr int kGrid = 64;
    std::vector<double> grid(kGrid);
    int best = -1;
    double best_rss = std::numeric_limits<double>::infinity();
    for (int g = 0; g < kGrid; ++g) {
        grid[g] = lo + (hi - lo) * g / (kGrid - 1);
        auto s = detail::solve_offset_amplitude(depths, means, weights, std::exp(grid[g]));
        if (s.ok && s.weighted_rss < best_rss) {
            best_rss = s.weighted_rss;
            best = g;
        }
    }
    if (best < 0) return result;

    auto objective = [&](double log_rate) {
        return detail::solve_offset_amplitude(depths, means, weights, std::exp(log_rate)).weighted_rss;
    };
    double a = grid[std::max(best - 1, 0)], b = grid[std::min(best + 1, kGrid - 1)];
    const double inv_phi = (std::sqrt(5.0) - 1) / 2;
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = objective(x1), f2 = objective(x2);
    for (int it = 0; it < 200 && (b - a) > 1e-13; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = objective(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = objective(x2);
        }
    }
    double log_rate = 0.5 * (a + b);
    if (objective(grid[best]) < objective(log_rate)) log_rate = grid[best];
    const double rate = std::exp(log_rate);
    auto s = detail::solve_offset_amplitude(depths, means, weights, rate);
    if (!s.ok) return result;

    result.offset_c = s.c;
    result.amplitude_a = s.a;
    result.rate_lambda = rate;
    double rss = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double r = means[k] - s.c - s.a * std::exp(-rate * depths[k]);
        rss += r * r;
    }
    result.residual_rms = std::sqrt(rss / static_cast<double>(n));

    Eigen::Matrix3d jtwj = Eigen::Matrix3d::Zero();
    for (std::size_t k = 0; k < n; ++k) {
        const double e = std::exp(-rate * depths[k]);
        const Eigen::Vector3d j(1.0, e, -s.a * depths[k] * e);
        jtwj += weights[k] * j * j.transpose();
    }
    const double reduced_chi2 = n > 3 ? s.weighted_rss / static_cast<double>(n - 3) : 0.0;
    Eigen::FullPivLU<Eigen::Matrix3d> lu(jtwj);
    if (lu.isInvertible()) {
        result.offset_std_err = std::sqrt(std::max(0.0, reduced_chi2 * lu.inverse()(0, 0)));
    } else {
        result.offset_std_err = std::numeric_limits<double>::infinity();
    }
    result.status = FitStatus::Ok;
    return result;
}

}  // namespace magicproj
