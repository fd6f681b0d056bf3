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

// magicproj: experiment driver.
//
//   magicproj <decay|linear|variance|theory|verify> [flags]
//
// Exit codes: 0 ok, 1 config error, 2 verification failure, 3 resource guard.

#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "magicproj/magicproj.hpp"

namespace mp = magicproj;
using mp::json;

namespace {

enum Exit { kOk = 0, kConfig = 1, kVerify = 2, kResource = 3 };

struct Flags {
    std::string na, theta, depths, norm, out, config;
    int nb = 0, reps = 0, t = 0;
    std::uint64_t seed = 0;
    double prob_floor = 0, magic = 0;
    unsigned threads = 1;
    bool literal_s = false;
};

void add_flags(CLI::App *sub, Flags &f) {
    sub->add_option("--na", f.na, "qubits kept (A); variance accepts a list, e.g. 2,3,4");
    sub->add_option("--nb", f.nb, "qubits measured (B)");
    sub->add_option("--theta", f.theta, "angles: 0,pi/8,pi/4 | linspace:a:b:n | magic:0,0.25,...");
    sub->add_option("--depths", f.depths, "depths: 1,5,10 | a:b[:step]");
    sub->add_option("--reps", f.reps, "realizations per depth");
    sub->add_option("--t", f.t, "moment order");
    sub->add_option("--norm", f.norm, "trace | hs | hs2");
    sub->add_option("--seed", f.seed, "master seed");
    sub->add_option("--out", f.out, "CSV output path (JSON sidecar alongside); stdout if absent");
    sub->add_option("--prob-floor", f.prob_floor, "drop outcomes below this probability");
    sub->add_flag("--literal-paper-s", f.literal_s, "use S = diag(1, e^{i pi/4}) (non-Clifford)");
    sub->add_option("--config", f.config, "JSON config; flags override its fields");
    sub->add_option("--threads", f.threads, "worker threads, 0 = all cores; results do not depend on it");
    sub->add_option("--magic", f.magic, "theory: magic value (default: from --theta)");
}

std::vector<int> parse_int_list(const std::string &s) {
    std::vector<int> out;
    for (const auto &p : mp::detail::split(s, ',')) out.push_back(mp::detail::parse_int(p));
    return out;
}

mp::ExperimentConfig build_config(const CLI::App *sub, const Flags &f) {
    mp::ExperimentConfig c;
    c.experiment = mp::parse_experiment_kind(sub->get_name());
    if (c.experiment == mp::ExperimentKind::Variance) {
        c.n_a_sweep = {2, 3, 4};
        c.depths = {100};
        c.theta_list = {mp::kPi / 4};
    }
    if (c.experiment == mp::ExperimentKind::Linear) c.norm_kind = mp::NormKind::HSSquared;
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in) throw mp::ConfigError("cannot read config '" + f.config + "'");
        json j;
        try {
            j = json::parse(in);
        } catch (const json::exception &e) {
            throw mp::ConfigError(std::string("config file: ") + e.what());
        }
        mp::apply_json(c, j);
        if (j.contains("experiment") && j.at("experiment") != sub->get_name()) {
            throw mp::ConfigError("config experiment does not match subcommand");
        }
    }
    auto given = [&](const char *name) { return sub->count(name) > 0; };
    if (given("--na")) {
        auto list = parse_int_list(f.na);
        c.n_a = list.front();
        c.n_a_sweep = list.size() > 1 || c.experiment == mp::ExperimentKind::Variance ? list : std::vector<int>{};
    }
    if (given("--nb")) c.n_b = f.nb;
    if (given("--depths")) c.depths = mp::parse_depth_spec(f.depths);
    if (given("--reps")) c.reps = f.reps;
    if (given("--t")) c.t = f.t;
    if (given("--norm")) c.norm_kind = mp::parse_norm_flag(f.norm);
    if (given("--seed")) c.master_seed = f.seed;
    if (given("--out")) c.out_path = f.out;
    if (given("--prob-floor")) c.prob_floor = f.prob_floor;
    if (given("--literal-paper-s")) c.literal_paper_s = f.literal_s;
    if (given("--threads")) c.threads = f.threads;
    // Parsed last: "magic:" grids depend on the final qubit count.
    if (given("--theta")) c.theta_list = mp::parse_theta_spec(f.theta, c.n_a + c.n_b);
    return c;
}

void emit(const mp::ExperimentConfig &c, const std::vector<mp::ExperimentRecord> &records, json extra) {
    if (c.out_path.empty()) {
        mp::write_csv(std::cout, records);
        std::cerr << extra.dump(2) << '\n';
    } else {
        mp::write_outputs(c.out_path, c, records, std::move(extra));
    }
}

int run_theory(const CLI::App *sub, const Flags &f, const mp::ExperimentConfig &c) {
    const int n = c.n_a + c.n_b;
    if (c.n_a < 1 || c.n_b < 1 || n > 62) throw mp::ConfigError("theory: need 1 <= na, nb and na + nb <= 62");
    const double m = sub->count("--magic") ? f.magic : mp::product_phase_magic(n, c.theta_list.front());
    const auto da = static_cast<std::int64_t>(mp::pow2(c.n_a)), db = static_cast<std::int64_t>(mp::pow2(c.n_b));
    const auto co = mp::coefficients(da, db);
    const auto nm = mp::no_measurement_distance(da * db, m);
    json j;
    j["d_a"] = da;
    j["d_b"] = db;
    j["magic"] = m;
    j["x"] = co.x;
    j["y"] = co.y;
    j["alpha"] = co.alpha;
    j["beta"] = co.beta;
    j["prediction"] = mp::theorem1_prediction(da, db, m);
    j["epsilon"] = mp::error_estimate(da, db, m);
    j["no_measurement"] = {{"d", da * db}, {"exact", nm.exact}, {"leading", nm.leading}};
    std::cout << j.dump(2) << '\n';
    return kOk;
}

int run_verify(const mp::ExperimentConfig &c) {
    const auto report = mp::run_verify({c.literal_paper_s, c.master_seed});
    for (const auto &ch : report.checks) {
        const char *status = ch.expected_fail ? (ch.passed ? "UNEXPECTED-PASS" : "EXPECTED-FAIL")
                                              : (ch.passed ? "PASS" : "FAIL");
        std::printf("%-16s %-24s max_dev=%.3e tol=%.1e\n", status, ch.name.c_str(), ch.max_deviation, ch.tolerance);
    }
    std::printf("%s\n", report.ok() ? "verify: ok" : "verify: FAILED");
    return report.ok() ? kOk : kVerify;
}

int dispatch(const CLI::App *sub, const Flags &f) {
    mp::ExperimentConfig c = build_config(sub, f);
    switch (c.experiment) {
        case mp::ExperimentKind::Theory: return run_theory(sub, f, c);
        case mp::ExperimentKind::Verify: return run_verify(c);
        case mp::ExperimentKind::Decay: {
            auto r = mp::run_decay(c);
            emit(c, r.records, {{"fits", mp::fits_to_json(r.fits)}});
            return kOk;
        }
        case mp::ExperimentKind::Linear: {
            auto r = mp::run_linear(c);
            json pts = json::array();
            for (const auto &p : r.points) {
                json jp = {{"theta", p.theta},
                           {"magic", p.magic},
                           {"extrapolated", p.extrapolated},
                           {"std_err", p.std_err},
                           {"ok", p.ok}};
                if (!p.diagnostic.empty()) jp["diagnostic"] = p.diagnostic;
                if (c.n_a >= 1) {
                    const auto da = static_cast<std::int64_t>(mp::pow2(c.n_a)),
                               db = static_cast<std::int64_t>(mp::pow2(c.n_b));
                    jp["prediction"] = mp::theorem1_prediction(da, db, p.magic);
                    jp["epsilon"] = mp::error_estimate(da, db, p.magic);
                }
                pts.push_back(std::move(jp));
            }
            json extra = {{"fits", mp::fits_to_json(r.decay.fits)}, {"points", pts}};
            if (r.line) {
                extra["line"] = {{"slope", r.line->slope},
                                 {"intercept", r.line->intercept},
                                 {"r_squared", r.line->r_squared}};
            }
            emit(c, r.decay.records, std::move(extra));
            return kOk;
        }
        case mp::ExperimentKind::Variance: {
            auto r = mp::run_variance(c);
            json pts = json::array();
            for (const auto &p : r.points) {
                pts.push_back({{"n_a", p.n_a}, {"mean", p.mean}, {"variance", p.variance}, {"reps", p.reps},
                               {"degenerate", p.degenerate}});
                if (p.degenerate) std::cerr << "warning: reps = 1, variance reported as 0\n";
            }
            emit(c, r.records, {{"variance", pts}});
            return kOk;
        }
    }
    return kConfig;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Magic-dependent deep thermalization experiments"};
    app.set_version_flag("--version", std::string(mp::kVersion));
    app.require_subcommand(1);
    Flags flags;
    std::vector<CLI::App *> subs;
    for (const char *name : {"decay", "linear", "variance", "theory", "verify"}) {
        auto *sub = app.add_subcommand(name);
        add_flags(sub, flags);
        subs.push_back(sub);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }
    try {
        for (auto *sub : subs)
            if (sub->parsed()) return dispatch(sub, flags);
    } catch (const mp::ResourceError &e) {
        std::cerr << "resource guard: " << e.what() << '\n';
        return kResource;
    } catch (const mp::ArgumentError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    }
    return kConfig;
}
