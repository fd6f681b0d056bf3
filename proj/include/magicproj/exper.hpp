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

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "magicproj/clifford.hpp"
#include "magicproj/core.hpp"
#include "magicproj/ensemble.hpp"
#include "magicproj/fit.hpp"
#include "magicproj/magic.hpp"
#include "magicproj/parallel.hpp"
#include "magicproj/qstate.hpp"
#include "magicproj/rng.hpp"

#ifndef MAGICPROJ_VERSION
#define MAGICPROJ_VERSION "0.0.0"
#endif

namespace magicproj {

inline constexpr std::string_view kVersion = MAGICPROJ_VERSION;
inline constexpr std::string_view kFitModel = "c + A*exp(-lambda*L)";

/// Invalid or inconsistent experiment configuration.
struct ConfigError : ArgumentError {
    using ArgumentError::ArgumentError;
};

enum class ExperimentKind { Decay, Linear, Variance, Theory, Verify };

inline std::string_view to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Decay: return "decay";
        case ExperimentKind::Linear: return "linear";
        case ExperimentKind::Variance: return "variance";
        case ExperimentKind::Theory: return "theory";
        case ExperimentKind::Verify: return "verify";
    }
    return "?";
}

inline ExperimentKind parse_experiment_kind(std::string_view s) {
    for (auto k : {ExperimentKind::Decay, ExperimentKind::Linear, ExperimentKind::Variance, ExperimentKind::Theory,
                   ExperimentKind::Verify}) {
        if (s == to_string(k)) return k;
    }
    throw ConfigError("unknown experiment '" + std::string(s) + "'");
}

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::Decay;
    int n_a = 2;
    int n_b = 4;
    /// Extra n_a values swept by the variance experiment; empty means {n_a}.
    std::vector<int> n_a_sweep;
    std::vector<double> theta_list = {0.0, kPi / 4};
    std::vector<int> depths = {1, 2, 5, 10, 20, 40, 70, 100, 140, 200};
    int reps = 100;
    int t = 2;
    NormKind norm_kind = NormKind::TraceNormalized;
    std::uint64_t master_seed = 1;
    double prob_floor = 0.0;
    std::string out_path;
    bool literal_paper_s = false;
    /// 0 = hardware concurrency. Never affects results.
    unsigned threads = 1;
    int max_total_qubits = 12;
    std::size_t max_moment_rows = kDefaultMaxMomentRows;

    std::vector<int> n_a_values() const { return n_a_sweep.empty() ? std::vector<int>{n_a} : n_a_sweep; }

    PhaseConvention convention() const {
        return literal_paper_s ? PhaseConvention::LiteralPaperT : PhaseConvention::Clifford;
    }

    /// Throws ConfigError (or ResourceError for moment-size guards) before any work is done.
    void validate() const {
        if (reps < 1) throw ConfigError("reps must be >= 1");
        if (depths.empty()) throw ConfigError("depth list is empty");
        for (int L : depths)
            if (L < 0) throw ConfigError("depths must be nonnegative");
        if (t < 1) throw ConfigError("moment order t must be >= 1");
        if (n_b < 1) throw ConfigError("n_b must be >= 1");
        if (!(prob_floor >= 0 && prob_floor < 1)) throw ConfigError("prob_floor must lie in [0, 1)");
        if (experiment != ExperimentKind::Variance && theta_list.empty()) throw ConfigError("theta list is empty");
        for (double th : theta_list)
            if (!std::isfinite(th)) throw ConfigError("theta values must be finite");
        for (int na : n_a_values()) {
            if (na < 1) throw ConfigError("n_a must be >= 1");
            if (na + n_b > max_total_qubits) {
                throw ConfigError("n_a + n_b = " + std::to_string(na + n_b) + " exceeds the cap of " +
                                  std::to_string(max_total_qubits));
            }
            if (na + n_b < 2) throw ConfigError("need at least two qubits in total");
            if (norm_kind == NormKind::TraceNormalized) checked_power(pow2(na), t, max_moment_rows, "trace-norm moment");
        }
    }
};

struct ExperimentRecord {
    std::string experiment_id;
    std::uint64_t seed = 0;
    int n_a = 0, n_b = 0;
    double theta = 0;
    double magic = 0;
    int depth = 0;
    int t = 0;
    NormKind norm_kind = NormKind::TraceNormalized;
    double mean = 0;
    double std_err = 0;
    int reps = 0;
};

inline constexpr std::string_view kCsvHeader =
    "experiment_id,seed,n_a,n_b,theta,magic,depth,t,norm_kind,mean,std_err,reps";

/// %.17g: round-trips every double.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_csv(std::ostream &os, const std::vector<ExperimentRecord> &records) {
    os << kCsvHeader << '\n';
    for (const auto &r : records) {
        os << r.experiment_id << ',' << r.seed << ',' << r.n_a << ',' << r.n_b << ',' << format_double(r.theta) << ','
           << format_double(r.magic) << ',' << r.depth << ',' << r.t << ',' << to_string(r.norm_kind) << ','
           << format_double(r.mean) << ',' << format_double(r.std_err) << ',' << r.reps << '\n';
    }
}

inline std::string to_csv(const std::vector<ExperimentRecord> &records) {
    std::ostringstream os;
    write_csv(os, records);
    return os.str();
}

/// Fit of one decay curve, tagged with its theta.
struct CurveFit {
    double theta = 0;
    double magic = 0;
    FitResult fit;
    /// Empty on success; otherwise why the fit is unusable.
    std::string diagnostic;
};

struct DecayResult {
    std::vector<ExperimentRecord> records;
    std::vector<CurveFit> fits;
};

struct LinearPoint {
    double theta = 0;
    double magic = 0;
    double extrapolated = 0;
    double std_err = 0;
    bool ok = false;
    std::string diagnostic;
};

/// Ordinary least-squares line y = intercept + slope x.
struct LineFit {
    double slope = 0, intercept = 0, r_squared = 0;
};

inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw ArgumentError("fit_line: need >= 2 paired points");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0) throw ArgumentError("fit_line: x values are all equal");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r_squared = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

struct LinearResult {
    DecayResult decay;
    std::vector<LinearPoint> points;
    std::optional<LineFit> line;
};

struct VariancePoint {
    int n_a = 0;
    double mean = 0;
    double variance = 0;
    int reps = 0;
    /// Set when reps = 1: the variance of a single sample is reported as 0.
    bool degenerate = false;
};

struct VarianceResult {
    std::vector<ExperimentRecord> records;
    std::vector<VariancePoint> points;
};

namespace detail {

inline std::string experiment_id(ExperimentKind kind, std::uint64_t seed, int n_a, int n_b, int t, NormKind norm) {
    return std::string(to_string(kind)) + "-na" + std::to_string(n_a) + "-nb" + std::to_string(n_b) + "-t" +
           std::to_string(t) + "-" + std::string(to_string(norm)) + "-s" + std::to_string(seed);
}

/// One realization: fresh circuit, evolve |Psi(theta)>, measure B, distance.
inline double realization(const ExperimentConfig &cfg, int n_a, double theta, int depth, std::uint64_t seed,
                          const std::optional<MomentOperator> &haar) {
    const int n = n_a + cfg.n_b;
    StateVector psi = product_phase_state(n, theta);
    if (depth > 0) psi = apply_circuit(sample_circuit(seed, n, static_cast<std::size_t>(depth)), std::move(psi),
                                       cfg.convention());
    ProjectedEnsemble ens = projected_ensemble(psi, n_a, cfg.n_b, cfg.prob_floor);
    if (haar) return design_distance(ens, cfg.t, cfg.norm_kind, *haar, cfg.max_moment_rows);
    return design_distance(ens, cfg.t, cfg.norm_kind, cfg.max_moment_rows);
}

inline std::optional<MomentOperator> haar_if_needed(const ExperimentConfig &cfg, int n_a) {
    if (cfg.norm_kind != NormKind::TraceNormalized) return std::nullopt;
    return haar_moment(pow2(n_a), cfg.t, cfg.max_moment_rows);
}

inline CurveFit fit_curve(double theta, double magic, std::span<const ExperimentRecord> curve) {
    CurveFit cf{theta, magic, {}, {}};
    std::vector<double> L, mean, se;
    for (const auto &r : curve) {
        L.push_back(r.depth);
        mean.push_back(r.mean);
        se.push_back(r.std_err);
    }
    try {
        cf.fit = fit_exponential(L, mean, std::span<const double>(se));
        if (cf.fit.status == FitStatus::Failed) cf.diagnostic = "fit failed: singular linear solve";
    } catch (const ArgumentError &e) {
        cf.fit.status = FitStatus::Failed;
        cf.diagnostic = e.what();
    }
    return cf;
}

}  // namespace detail

/// Decay data: mean design distance vs depth for each theta.
inline DecayResult run_decay(const ExperimentConfig &cfg) {
    cfg.validate();
    const int n_a = cfg.n_a, n = cfg.n_a + cfg.n_b;
    const auto haar = detail::haar_if_needed(cfg, n_a);
    const std::size_t n_theta = cfg.theta_list.size(), n_depth = cfg.depths.size();
    const std::size_t reps = static_cast<std::size_t>(cfg.reps);
    std::vector<double> values(n_theta * n_depth * reps);
    parallel_for(values.size(), cfg.threads, [&](std::size_t task) {
        const std::size_t r = task % reps, di = (task / reps) % n_depth, ti = task / (reps * n_depth);
        const int L = cfg.depths[di];
        const std::uint64_t seed = derive_seed(cfg.master_seed, {ti, static_cast<std::uint64_t>(L), r});
        values[task] = detail::realization(cfg, n_a, cfg.theta_list[ti], L, seed, haar);
    });

    DecayResult out;
    const std::string id = detail::experiment_id(cfg.experiment, cfg.master_seed, n_a, cfg.n_b, cfg.t, cfg.norm_kind);
    for (std::size_t ti = 0; ti < n_theta; ++ti) {
        const double theta = cfg.theta_list[ti];
        const double m = product_phase_magic(n, theta);
        const std::size_t first = out.records.size();
        for (std::size_t di = 0; di < n_depth; ++di) {
            auto s = sample_stats(std::span<const double>(values).subspan((ti * n_depth + di) * reps, reps));
            out.records.push_back({id, cfg.master_seed, n_a, cfg.n_b, theta, m, cfg.depths[di], cfg.t, cfg.norm_kind,
                                   s.mean, s.std_err, cfg.reps});
        }
        out.fits.push_back(
            detail::fit_curve(theta, m, std::span<const ExperimentRecord>(out.records).subspan(first, n_depth)));
    }
    return out;
}

/// Extrapolation data: infinite-depth extrapolation per theta, paired with magic.
inline LinearResult run_linear(const ExperimentConfig &cfg) {
    LinearResult out;
    out.decay = run_decay(cfg);
    std::vector<double> xs, ys;
    for (const auto &cf : out.decay.fits) {
        LinearPoint p{cf.theta, cf.magic, cf.fit.offset_c, cf.fit.offset_std_err, false, cf.diagnostic};
        p.ok = cf.fit.status != FitStatus::Failed && std::isfinite(p.extrapolated);
        if (p.ok) {
            xs.push_back(p.magic);
            ys.push_back(p.extrapolated);
        }
        out.points.push_back(std::move(p));
    }
    bool distinct = false;
    for (double x : xs)
        if (x != xs.front()) distinct = true;
    if (xs.size() >= 2 && distinct) out.line = fit_line(xs, ys);
    return out;
}

/// Variance data: spread of the per-circuit distance across n_a.
/// Uses the first theta and first depth of the config.
inline VarianceResult run_variance(const ExperimentConfig &cfg) {
    cfg.validate();
    const double theta = cfg.theta_list.empty() ? kPi / 4 : cfg.theta_list.front();
    const int L = cfg.depths.front();
    const auto sweep = cfg.n_a_values();
    const std::size_t reps = static_cast<std::size_t>(cfg.reps);
    VarianceResult out;
    for (std::size_t ai = 0; ai < sweep.size(); ++ai) {
        const int n_a = sweep[ai];
        const auto haar = detail::haar_if_needed(cfg, n_a);
        std::vector<double> values(reps);
        parallel_for(reps, cfg.threads, [&](std::size_t r) {
            const std::uint64_t seed = derive_seed(cfg.master_seed, {ai, static_cast<std::uint64_t>(L), r});
            values[r] = detail::realization(cfg, n_a, theta, L, seed, haar);
        });
        auto s = sample_stats(values);
        const double m = product_phase_magic(n_a + cfg.n_b, theta);
        out.records.push_back({detail::experiment_id(cfg.experiment, cfg.master_seed, n_a, cfg.n_b, cfg.t,
                                                     cfg.norm_kind),
                               cfg.master_seed, n_a, cfg.n_b, theta, m, L, cfg.t, cfg.norm_kind, s.mean, s.std_err,
                               cfg.reps});
        out.points.push_back({n_a, s.mean, s.variance, cfg.reps, reps == 1});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Argument syntax and serialization.

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        auto pos = s.find(sep, start);
        parts.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

inline double parse_number(const std::string &s) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw ConfigError("bad number '" + s + "'");
        return v;
    } catch (const std::logic_error &) {
        throw ConfigError("bad number '" + s + "'");
    }
}

inline int parse_int(const std::string &s) {
    const double v = parse_number(s);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError("bad integer '" + s + "'");
    return static_cast<int>(v);
}

}  // namespace detail

/// "0.3", "pi/4", "3pi/8", "-pi", "2*pi/3".
inline double parse_angle(std::string s) {
    std::erase(s, ' ');
    std::erase(s, '*');
    if (s.empty()) throw ConfigError("empty angle");
    auto pos = s.find("pi");
    if (pos == std::string::npos) return detail::parse_number(s);
    std::string coef = s.substr(0, pos), rest = s.substr(pos + 2);
    double c = coef.empty() ? 1.0 : coef == "-" ? -1.0 : coef == "+" ? 1.0 : detail::parse_number(coef);
    double denom = 1.0;
    if (!rest.empty()) {
        if (rest[0] != '/') throw ConfigError("bad angle '" + s + "'");
        denom = detail::parse_number(rest.substr(1));
        if (denom == 0) throw ConfigError("bad angle '" + s + "'");
    }
    return c * kPi / denom;
}

/// Theta list syntax: "0,pi/8,pi/4" | "linspace:a:b:count" | "magic:m1,m2,..."
/// (the latter inverts the product-state magic for `num_qubits`).
inline std::vector<double> parse_theta_spec(std::string_view spec, int num_qubits) {
    std::vector<double> out;
    if (spec.starts_with("linspace:")) {
        auto parts = detail::split(spec.substr(9), ':');
        if (parts.size() != 3) throw ConfigError("linspace needs a:b:count");
        const double a = parse_angle(parts[0]), b = parse_angle(parts[1]);
        const int count = detail::parse_int(parts[2]);
        if (count < 1) throw ConfigError("linspace count must be >= 1");
        for (int k = 0; k < count; ++k) out.push_back(count == 1 ? a : a + (b - a) * k / (count - 1));
        return out;
    }
    if (spec.starts_with("magic:")) {
        for (const auto &m : detail::split(spec.substr(6), ',')) {
            try {
                out.push_back(theta_for_magic(num_qubits, detail::parse_number(m)));
            } catch (const ArgumentError &e) {
                throw ConfigError(e.what());
            }
        }
        return out;
    }
    for (const auto &a : detail::split(spec, ',')) out.push_back(parse_angle(a));
    return out;
}

/// Depth syntax: "1,2,5,10" | "a:b" | "a:b:step" (inclusive).
inline std::vector<int> parse_depth_spec(std::string_view spec) {
    std::vector<int> out;
    if (spec.find(':') != std::string_view::npos) {
        auto parts = detail::split(spec, ':');
        if (parts.size() < 2 || parts.size() > 3) throw ConfigError("depth range needs a:b[:step]");
        const int a = detail::parse_int(parts[0]), b = detail::parse_int(parts[1]);
        const int step = parts.size() == 3 ? detail::parse_int(parts[2]) : 1;
        if (step < 1 || b < a) throw ConfigError("bad depth range");
        for (int L = a; L <= b; L += step) out.push_back(L);
        return out;
    }
    for (const auto &p : detail::split(spec, ',')) out.push_back(detail::parse_int(p));
    return out;
}

inline NormKind parse_norm_flag(std::string_view s) {
    try {
        return parse_norm_kind(s);
    } catch (const ArgumentError &e) {
        throw ConfigError(e.what());
    }
}

using nlohmann::json;

inline json to_json(const ExperimentConfig &c) {
    json j;
    j["experiment"] = to_string(c.experiment);
    j["na"] = c.n_a;
    j["nb"] = c.n_b;
    if (!c.n_a_sweep.empty()) j["na_sweep"] = c.n_a_sweep;
    j["theta"] = c.theta_list;
    j["depths"] = c.depths;
    j["reps"] = c.reps;
    j["t"] = c.t;
    j["norm"] = to_string(c.norm_kind);
    j["seed"] = c.master_seed;
    j["prob_floor"] = c.prob_floor;
    j["out"] = c.out_path;
    j["literal_paper_s"] = c.literal_paper_s;
    return j;
}

/// Applies fields present in `j` (names mirror the CLI flags) onto `c`.
/// "theta" and "depths" accept either arrays or the CLI string syntax.
inline void apply_json(ExperimentConfig &c, const json &j) {
    try {
        if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
        if (j.contains("experiment")) c.experiment = parse_experiment_kind(j.at("experiment").get<std::string>());
        if (j.contains("na")) c.n_a = j.at("na").get<int>();
        if (j.contains("nb")) c.n_b = j.at("nb").get<int>();
        if (j.contains("na_sweep")) c.n_a_sweep = j.at("na_sweep").get<std::vector<int>>();
        if (j.contains("reps")) c.reps = j.at("reps").get<int>();
        if (j.contains("t")) c.t = j.at("t").get<int>();
        if (j.contains("norm")) c.norm_kind = parse_norm_flag(j.at("norm").get<std::string>());
        if (j.contains("seed")) c.master_seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("prob_floor")) c.prob_floor = j.at("prob_floor").get<double>();
        if (j.contains("out")) c.out_path = j.at("out").get<std::string>();
        if (j.contains("literal_paper_s")) c.literal_paper_s = j.at("literal_paper_s").get<bool>();
        if (j.contains("threads")) c.threads = j.at("threads").get<unsigned>();
        if (j.contains("depths")) {
            const auto &d = j.at("depths");
            c.depths = d.is_string() ? parse_depth_spec(d.get<std::string>()) : d.get<std::vector<int>>();
        }
        if (j.contains("theta")) {
            const auto &t = j.at("theta");
            c.theta_list = t.is_string() ? parse_theta_spec(t.get<std::string>(), c.n_a + c.n_b)
                                         : t.get<std::vector<double>>();
        }
    } catch (const json::exception &e) {
        throw ConfigError(std::string("config file: ") + e.what());
    }
}

inline json to_json(const FitResult &f) {
    json j;
    j["offset_c"] = f.offset_c;
    j["amplitude_a"] = f.amplitude_a;
    j["rate_lambda"] = std::isfinite(f.rate_lambda) ? json(f.rate_lambda) : json(nullptr);
    j["residual_rms"] = f.residual_rms;
    j["offset_std_err"] = std::isfinite(f.offset_std_err) ? json(f.offset_std_err) : json(nullptr);
    j["status"] = to_string(f.status);
    return j;
}

inline json fits_to_json(const std::vector<CurveFit> &fits) {
    json arr = json::array();
    for (const auto &cf : fits) {
        json j = to_json(cf.fit);
        j["theta"] = cf.theta;
        j["magic"] = cf.magic;
        if (!cf.diagnostic.empty()) j["diagnostic"] = cf.diagnostic;
        arr.push_back(std::move(j));
    }
    return arr;
}

/// CSV at `path` plus a JSON sidecar (same stem, .json) with config,
/// version, fit model and `extra`.
inline void write_outputs(const std::filesystem::path &path, const ExperimentConfig &cfg,
                          const std::vector<ExperimentRecord> &records, json extra) {
    std::ofstream csv(path, std::ios::binary);
    if (!csv) throw ConfigError("cannot open output '" + path.string() + "'");
    write_csv(csv, records);
    json side;
    side["version"] = kVersion;
    side["config"] = to_json(cfg);
    side["fit_model"] = kFitModel;
    side["csv_columns"] = kCsvHeader;
    for (auto &[k, v] : extra.items()) side[k] = v;
    auto sidecar = path;
    sidecar.replace_extension(".json");
    std::ofstream js(sidecar, std::ios::binary);
    if (!js) throw ConfigError("cannot open sidecar '" + sidecar.string() + "'");
    js << side.dump(2) << '\n';
}

}  // namespace magicproj
