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

#include "magicproj/ensemble.hpp"

#include "gtest/gtest.h"
#include "magicproj/clifford.hpp"

using namespace magicproj;

namespace {

double total_probability(const ProjectedEnsemble &e) {
    double s = 0;
    for (const auto &m : e.members) s += m.probability;
    return s;
}

StateVector bell() {
    const double r = 1 / std::sqrt(2.0);
    return StateVector(2, {r, 0, 0, r});
}

}  // namespace

TEST(ensemble, bell_state_projection) {
    auto ens = projected_ensemble(bell(), 1, 1);
    ASSERT_EQ(ens.members.size(), 2u);
    EXPECT_NEAR(ens.members[0].probability, 0.5, 1e-15);
    EXPECT_NEAR(std::abs(ens.members[0].state[0]), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(ens.members[1].state[1]), 1.0, 1e-15);
}

TEST(ensemble, product_state_single_effective_member) {
    auto ens = projected_ensemble(product_phase_state(3, 0.0), 1, 2);
    ASSERT_EQ(ens.members.size(), 4u);
    for (const auto &m : ens.members) {
        EXPECT_NEAR(m.probability, 0.25, 1e-15);
        EXPECT_NEAR(std::abs(m.state[0] - 1 / std::sqrt(2.0)), 0.0, 1e-15);
    }
    // Basis-state input: zero-probability outcomes are skipped.
    EXPECT_EQ(projected_ensemble(basis_state(3, "010"), 1, 2).members.size(), 1u);
}

TEST(ensemble, argument_checks) {
    EXPECT_THROW(projected_ensemble(bell(), 1, 2), ArgumentError);
    EXPECT_THROW(projected_ensemble(bell(), 0, 2), ArgumentError);
    EXPECT_THROW(projected_ensemble(bell(), 1, 1, -0.1), ArgumentError);
}

TEST(ensemble, prob_floor_guard) {
    // amplitudes 0.999.. on outcome 0 and ~1e-3 mass on outcome 1
    const double eps = 1e-3;
    StateVector s = StateVector::normalized(2, {std::sqrt(1 - eps), std::sqrt(eps), 0, 0});
    EXPECT_THROW(projected_ensemble(s, 1, 1, 0.01), NumericPolicyError);
    StateVector tiny = StateVector::normalized(2, {1.0, 1e-7, 0, 0});
    auto ens = projected_ensemble(tiny, 1, 1, 1e-10);
    EXPECT_EQ(ens.members.size(), 1u);
}

// Property: probabilities sum to 1 and sum_i p_i psi_i psi_i^dagger = rho_A.
TEST(ensemble, moment_one_is_reduced_state) {
    SplitMix64 gen(4);
    for (int trial = 0; trial < 20; ++trial) {
        const int n_a = 1 + trial % 3, n_b = 1 + trial % 2;
        auto s = haar_random_state(n_a + n_b, gen);
        auto ens = projected_ensemble(s, n_a, n_b);
        EXPECT_NEAR(total_probability(ens), 1.0, 1e-12);
        auto rho = moment(ens, 1);
        EXPECT_LT((rho.matrix() - reduced_density_matrix(s, n_a)).cwiseAbs().maxCoeff(), 1e-12);
    }
}

// Property: moments are Hermitian, PSD, unit trace and supported on Sym^t.
TEST(ensemble, moment_properties) {
    SplitMix64 gen(5);
    for (int t = 1; t <= 3; ++t) {
        auto s = haar_random_state(4, gen);
        auto rho = moment(projected_ensemble(s, 2, 2), t);
        EXPECT_LT(rho.hermiticity_defect(), 1e-13);
        EXPECT_NEAR(rho.trace(), 1.0, 1e-12);
        EXPECT_GT(rho.min_eigenvalue(), -1e-12);
        Eigen::MatrixXcd pi = sym_projector(4, t);
        double fact = 1;
        for (int k = 2; k <= t; ++k) fact *= k;
        EXPECT_LT((pi * rho.matrix() / fact - rho.matrix()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(ensemble, symmetric_projector) {
    for (std::size_t d : {2u, 3u, 4u}) {
        for (int t = 1; t <= 3; ++t) {
            Eigen::MatrixXcd pi = sym_projector(d, t);
            double fact = 1;
            for (int k = 2; k <= t; ++k) fact *= k;
            // Pi / t! is an orthogonal projector of rank C(d+t-1, t).
            Eigen::MatrixXcd p = pi / fact;
            EXPECT_LT((p * p - p).cwiseAbs().maxCoeff(), 1e-12);
            EXPECT_NEAR(pi.trace().real(), rising_factorial(d, t), 1e-9);
        }
    }
    EXPECT_THROW(sym_projector(2, 5), ResourceError);
    EXPECT_THROW(sym_projector(16, 4), ResourceError);
}

TEST(ensemble, haar_moment_values) {
    auto h1 = haar_moment(4, 1);
    EXPECT_LT((h1.matrix() - Eigen::MatrixXcd::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff(), 1e-15);
    auto h2 = haar_moment(2, 2);
    EXPECT_NEAR(h2.trace(), 1.0, 1e-15);
    // Haar purity: Tr[rho^2] = t!/(d(d+1)) for t = 2.
    EXPECT_NEAR((h2.matrix() * h2.matrix()).trace().real(), 2.0 / 6.0, 1e-15);
}

TEST(ensemble, permutation_operator_swap) {
    Eigen::MatrixXcd swap = permutation_operator(2, {1, 0});
    Eigen::VectorXcd ab(4);
    ab << 0, 1, 0, 0;  // |0>|1>
    Eigen::VectorXcd ba = swap * ab;
    EXPECT_EQ(ba(2), cplx(1));
    EXPECT_EQ(tensor_power(basis_state(1, "1").as_eigen(), 3)(7), cplx(1));
}

TEST(ensemble, distances_of_known_pairs) {
    // A single pure state against the Haar moment, t = 2, d = 2.
    ProjectedEnsemble ens;
    ens.n_a = 1;
    ens.members.push_back({1.0, basis_state(1, "0")});
    auto rho = moment(ens, 2);
    auto haar = haar_moment(2, 2);
    // Eigenvalues of the difference: 1 - 1/3 once, -1/3 twice on Sym^2, 0 on the antisymmetric part.
    EXPECT_NEAR(trace_distance(rho, haar, false), 4.0 / 3.0, 1e-12);
    EXPECT_NEAR(trace_distance(rho, haar, true), 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(hs_distance(rho, haar) * hs_distance(rho, haar), 1.0 - 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(design_distance(ens, 2, NormKind::HSSquared), 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(design_distance(ens, 2, NormKind::HS), std::sqrt(2.0 / 3.0), 1e-12);
    EXPECT_NEAR(design_distance(ens, 2, NormKind::TraceNormalized), 2.0 / 3.0, 1e-12);
    EXPECT_THROW(hs_distance(rho, haar_moment(2, 1)), ArgumentError);
}

// Property: the Gram-matrix route equals the dense Hilbert-Schmidt distance.
TEST(ensemble, gram_route_matches_dense) {
    SplitMix64 gen(6);
    for (int trial = 0; trial < 12; ++trial) {
        const int n_a = 1 + trial % 3, t = 1 + trial % 4;
        if (pow2(n_a * t) > kDefaultMaxMomentRows) continue;
        auto s = haar_random_state(n_a + 3, gen);
        auto ens = projected_ensemble(s, n_a, 3);
        const double dense = std::pow(hs_distance(moment(ens, t), haar_moment(pow2(n_a), t)), 2);
        EXPECT_NEAR(haar_hs_distance_squared(ens, t), dense, 1e-12) << "n_a=" << n_a << " t=" << t;
    }
}

// Property: trace-norm and HS distances obey ||X||_2 <= ||X||_1 <= sqrt(rank) ||X||_2.
TEST(ensemble, norm_inequalities) {
    SplitMix64 gen(9);
    for (int trial = 0; trial < 10; ++trial) {
        auto ens = projected_ensemble(haar_random_state(5, gen), 2, 3);
        auto rho = moment(ens, 2);
        auto haar = haar_moment(4, 2);
        const double hs = hs_distance(rho, haar), tr = trace_distance(rho, haar, false);
        EXPECT_LE(hs, tr + 1e-12);
        EXPECT_LE(tr, std::sqrt(16.0) * hs + 1e-12);
        EXPECT_LE(trace_distance(rho, haar, true), 1.0 + 1e-12);
    }
}

TEST(ensemble, norm_kind_round_trip) {
    for (auto k : {NormKind::TraceNormalized, NormKind::HS, NormKind::HSSquared}) {
        EXPECT_EQ(parse_norm_kind(to_string(k)), k);
    }
    EXPECT_EQ(parse_norm_kind("hs_squared"), NormKind::HSSquared);
    EXPECT_THROW(parse_norm_kind("l1"), ArgumentError);
}

TEST(ensemble, moment_size_guard) {
    auto ens = projected_ensemble(product_phase_state(6, 0.2), 5, 1);
    EXPECT_THROW(moment(ens, 3), ResourceError);
    EXPECT_NO_THROW(haar_hs_distance_squared(ens, 3));
}
