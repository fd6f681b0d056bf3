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
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "magicproj/core.hpp"
#include "magicproj/parallel.hpp"
#include "magicproj/qstate.hpp"

namespace magicproj {

/// t-th moment operator on (C^d)^{(x) t}.
class MomentOperator {
   public:
    MomentOperator(int t, std::size_t d, Eigen::MatrixXcd matrix) : t_(t), d_(d), matrix_(std::move(matrix)) {
        std::size_t rows = 1;
        for (int k = 0; k < t; ++k) rows *= d;
        if (t < 1 || matrix_.rows() != static_cast<Eigen::Index>(rows) || matrix_.cols() != matrix_.rows()) {
            throw ArgumentError("MomentOperator: matrix shape does not match d^t");
        }
    }

    int t() const { return t_; }
    std::size_t d() const { return d_; }
    const Eigen::MatrixXcd &matrix() const { return matrix_; }

    double hermiticity_defect() const { return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff(); }
    double trace() const { return matrix_.trace().real(); }
    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix_, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }

   private:
    int t_;
    std::size_t d_;
    Eigen::MatrixXcd matrix_;
};

/// |v>^{(x) t}, first factor most significant.
inline Eigen::VectorXcd tensor_power(const Eigen::Ref<const Eigen::VectorXcd> &v, int t) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Ones(1);
    for (int k = 0; k < t; ++k) {
        Eigen::VectorXcd next(out.size() * v.size());
        for (Eigen::Index i = 0; i < out.size(); ++i) next.segment(i * v.size(), v.size()) = out(i) * v;
        out.swap(next);
    }
    return out;
}

/// Result of measuring B in the computational basis.
struct ProjectedEnsemble {
    struct Member {
        double probability;
        StateVector state;
    };

    int n_a = 0;
    std::vector<Member> members;

    std::size_t d_a() const { return pow2(n_a); }
};

/// Measures qubits n_a..N-1 (subsystem B) of `state` in the computational
/// basis. Outcomes with probability exactly 0 are skipped. A positive
/// `prob_floor` drops rarer outcomes too, but only while the total dropped
/// mass stays under NumericPolicy::dropped_mass; nothing is renormalized.
inline ProjectedEnsemble projected_ensemble(const StateVector &state, int n_a, int n_b, double prob_floor = 0.0,
                                            const NumericPolicy &policy = {}) {
    if (n_a < 1 || n_b < 0 || n_a + n_b != state.num_qubits()) {
        throw ArgumentError("projected_ensemble: n_a + n_b must equal the qubit count, with n_a >= 1");
    }
    if (prob_floor < 0) throw ArgumentError("projected_ensemble: prob_floor must be nonnegative");
    const std::size_t d_a = pow2(n_a), d_b = pow2(n_b);
    ProjectedEnsemble ens;
    ens.n_a = n_a;
    ens.members.reserve(d_b);
    double dropped = 0;
    std::vector<cplx> amps(d_a);
    for (std::size_t b = 0; b < d_b; ++b) {
        double p = 0;
        for (std::size_t a = 0; a < d_a; ++a) {
            amps[a] = state[a * d_b + b];
            p += std::norm(amps[a]);
        }
        if (p == 0) continue;
        if (p < prob_floor) {
            dropped += p;
            continue;
        }
        ens.members.push_back({p, StateVector::normalized(n_a, amps)});
    }
    if (dropped > policy.dropped_mass) {
        throw NumericPolicyError("projected_ensemble: prob_floor dropped probability mass " + std::to_string(dropped));
    }
    return ens;
}

/// Tr_B |psi><psi| with A = qubits 0..n_a-1.
inline Eigen::MatrixXcd reduced_density_matrix(const StateVector &state, int n_a) {
    if (n_a < 1 || n_a > state.num_qubits()) throw ArgumentError("reduced_density_matrix: bad subsystem size");
    const std::size_t d_a = pow2(n_a), d_b = state.dim() / d_a;
    Eigen::Map<const Eigen::MatrixXcd> psi(state.amplitudes().data(), d_b, d_a);  // psi(b, a)
    return (psi.adjoint() * psi).transpose();
}

/// sum_i p_i |psi_i><psi_i|^{(x) t}
inline MomentOperator moment(const ProjectedEnsemble &ensemble, int t,
                             std::size_t max_rows = kDefaultMaxMomentRows) {
    if (t < 1) throw ArgumentError("moment: order must be >= 1");
    const std::size_t d = ensemble.d_a();
    const std::size_t rows = checked_power(d, t, max_rows, "moment");
    Eigen::MatrixXcd columns(rows, ensemble.members.size());
    for (std::size_t i = 0; i < ensemble.members.size(); ++i) {
        const auto &m = ensemble.members[i];
        columns.col(i) = std::sqrt(m.probability) * tensor_power(m.state.as_eigen(), t);
    }
    Eigen::MatrixXcd rho = columns * columns.adjoint();
    return MomentOperator(t, d, std::move(rho));
}

/// Permutation operator T_perm on (C^d)^{(x) t}: sends tensor factor k to
/// position perm[k].
inline Eigen::MatrixXcd permutation_operator(std::size_t d, const std::vector<int> &perm) {
    const int t = static_cast<int>(perm.size());
    const std::size_t rows = checked_power(d, t, kDefaultMaxMomentRows * 16, "permutation_operator");
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rows, rows);
    std::vector<std::size_t> digits(t), moved(t);
    for (std::size_t idx = 0; idx < rows; ++idx) {
        std::size_t rest = idx;
        for (int k = t - 1; k >= 0; --k) {
            digits[k] = rest % d;
            rest /= d;
        }
        for (int k = 0; k < t; ++k) moved[perm[k]] = digits[k];
        std::size_t target = 0;
        for (int k = 0; k < t; ++k) target = target * d + moved[k];
        out(target, idx) = 1;
    }
    return out;
}

/// d (d+1) ... (d+t-1)
inline double rising_factorial(std::size_t d, int t) {
    double r = 1;
    for (int k = 0; k < t; ++k) r *= static_cast<double>(d + k);
    return r;
}

/// Unnormalized symmetric projector: the sum of all t! permutation operators.
inline Eigen::MatrixXcd sym_projector(std::size_t d, int t, std::size_t max_rows = kDefaultMaxMomentRows) {
    if (t < 1) throw ArgumentError("sym_projector: order must be >= 1");
    if (t > 4) throw ResourceError("sym_projector: orders above 4 are unsupported");
    if (d < 1) throw ArgumentError("sym_projector: dimension must be >= 1");
    const std::size_t rows = checked_power(d, t, max_rows, "sym_projector");
    std::vector<int> perm(t);
    std::iota(perm.begin(), perm.end(), 0);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rows, rows);
    std::vector<std::size_t> digits(t), moved(t);
    do {
        for (std::size_t idx = 0; idx < rows; ++idx) {
            std::size_t rest = idx;
            for (int k = t - 1; k >= 0; --k) {
                digits[k] = rest % d;
                rest /= d;
            }
            for (int k = 0; k < t; ++k) moved[perm[k]] = digits[k];
            std::size_t target = 0;
            for (int k = 0; k < t; ++k) target = target * d + moved[k];
            out(target, idx) += 1.0;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

/// Haar t-th moment: Pi_t^sym / Tr[Pi_t^sym].
inline MomentOperator haar_moment(std::size_t d, int t, std::size_t max_rows = kDefaultMaxMomentRows) {
    Eigen::MatrixXcd pi = sym_projector(d, t, max_rows);
    pi /= rising_factorial(d, t);
    return MomentOperator(t, d, std::move(pi));
}

namespace detail {
inline void check_same_shape(const MomentOperator &a, const MomentOperator &b, const char *what) {
    if (a.t() != b.t() || a.d() != b.d()) throw ArgumentError(std::string(what) + ": operator shapes differ");
}
}  // namespace detail

/// ||a - b||_2 (Frobenius).
inline double hs_distance(const MomentOperator &a, const MomentOperator &b) {
    detail::check_same_shape(a, b, "hs_distance");
    return (a.matrix() - b.matrix()).norm();
}

/// ||a - b||_1 from the eigenvalues of the Hermitian difference; halved
/// when `normalized`.
inline double trace_distance(const MomentOperator &a, const MomentOperator &b, bool normalized) {
    detail::check_same_shape(a, b, "trace_distance");
    Eigen::MatrixXcd diff = a.matrix() - b.matrix();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff, Eigen::EigenvaluesOnly);
    double total = es.eigenvalues().cwiseAbs().sum();
    return normalized ? 0.5 * total : total;
}

enum class NormKind { TraceNormalized, HS, HSSquared };

inline std::string_view to_string(NormKind kind) {
    switch (kind) {
        case NormKind::TraceNormalized: return "trace";
        case NormKind::HS: return "hs";
        case NormKind::HSSquared: return "hs2";
    }
    return "?";
}

inline NormKind parse_norm_kind(std::string_view s) {
    if (s == "trace" || s == "trace_normalized") return NormKind::TraceNormalized;
    if (s == "hs") return NormKind::HS;
    if (s == "hs2" || s == "hs_squared") return NormKind::HSSquared;
    throw ArgumentError("unknown norm kind '" + std::string(s) + "' (expected trace, hs or hs2)");
}

/// ||rho_E^{(t)} - rho_Haar^{(t)}||_2^2 without building either operator:
/// Tr[rho_E^2] = sum_ij p_i p_j |<psi_i|psi_j>|^{2t}, and both cross term and
/// Haar purity equal t! / Tr[Pi_t^sym] because every psi^{(x) t} is symmetric.
inline double haar_hs_distance_squared(const ProjectedEnsemble &ensemble, int t) {
    if (t < 1) throw ArgumentError("haar_hs_distance_squared: order must be >= 1");
    const std::size_t m = ensemble.members.size();
    const std::size_t d = ensemble.d_a();
    Eigen::MatrixXcd states(d, m);
    Eigen::VectorXd probs(m);
    for (std::size_t i = 0; i < m; ++i) {
        states.col(i) = ensemble.members[i].state.as_eigen();
        probs(i) = ensemble.members[i].probability;
    }
    Eigen::MatrixXcd gram = states.adjoint() * states;
    std::vector<double> terms;
    terms.reserve(m * m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            terms.push_back(probs(i) * probs(j) * std::pow(std::norm(gram(i, j)), t));
        }
    }
    double factorial = 1;
    for (int k = 2; k <= t; ++k) factorial *= k;
    double value = compensated_sum(terms) - factorial / rising_factorial(d, t);
    return std::max(0.0, value);
}

/// Distance between the ensemble's t-th moment and the Haar moment.
/// The Hilbert-Schmidt kinds use the Gram-matrix route; the trace norm needs
/// the dense operators and is subject to `max_rows`.
inline double design_distance(const ProjectedEnsemble &ensemble, int t, NormKind kind,
                              std::size_t max_rows = kDefaultMaxMomentRows) {
    switch (kind) {
        case NormKind::HSSquared: return haar_hs_distance_squared(ensemble, t);
        case NormKind::HS: return std::sqrt(haar_hs_distance_squared(ensemble, t));
        case NormKind::TraceNormalized: {
            MomentOperator rho = moment(ensemble, t, max_rows);
            return trace_distance(rho, haar_moment(ensemble.d_a(), t, max_rows), true);
        }
    }
    throw ArgumentError("design_distance: unknown norm kind");
}

/// Same, with the Haar moment supplied by the caller (reused across calls).
inline double design_distance(const ProjectedEnsemble &ensemble, int t, NormKind kind, const MomentOperator &haar,
                              std::size_t max_rows = kDefaultMaxMomentRows) {
    if (kind != NormKind::TraceNormalized) return design_distance(ensemble, t, kind, max_rows);
    MomentOperator rho = moment(ensemble, t, max_rows);
    return trace_distance(rho, haar, true);
}

}  // namespace magicproj
