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

// Closed forms for the Clifford-averaged second-moment distance of projected
// ensembles and for the Clifford fourth moment. Everything that involves the
// dimensions is evaluated in exact rational arithmetic and converted to
// double at the end: several of the sums cancel to many digits at large d.

#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>
#include <Eigen/Dense>

#include "magicproj/core.hpp"
#include "magicproj/ensemble.hpp"
#include "magicproj/magic.hpp"
#include "magicproj/qstate.hpp"

namespace magicproj {

using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational &r) { return r.convert_to<double>(); }

namespace detail {

inline void check_dimension(std::int64_t d, const char *what) {
    if (d < 2 || (d & (d - 1)) != 0) {
        throw ArgumentError(std::string(what) + ": dimensions must be powers of two >= 2");
    }
}

inline void check_magic(double m, const char *what) {
    if (!(m >= 0.0 && m < 1.0)) throw ArgumentError(std::string(what) + ": magic must lie in [0, 1)");
}

}  // namespace detail

/// Fourth-moment coefficients of the Clifford average
/// <C^{(x)4} psi^{(x)4} C^{dagger (x)4}> = a Q Pi_4 + b Pi_4, as a function
/// of the total dimension d and ||Xi||_2^2.
struct FourthMomentExact {
    Rational a, b;
};

inline FourthMomentExact fourth_moment_exact(const Rational &d, const Rational &xi_norm_sq) {
    Rational b = (1 - xi_norm_sq) / ((d * d - 1) * (d + 2) * (d + 4));
    Rational a = xi_norm_sq / (4 * (d + 1) * (d + 2)) - b;
    return {a, b};
}

/// ||Xi||_2^2 = (1 - M_lin) / d
inline Rational xi_norm_sq_from_magic(const Rational &d, double m_lin) { return (1 - Rational(m_lin)) / d; }

struct Theorem1Exact {
    Rational x, y, alpha, beta;
};

/// x and y with <[d_HS^(2)]^2> ~ x + y ||Xi||_2^2, and the equivalent
/// alpha = x + y/d, beta = y/d.
inline Theorem1Exact coefficients_exact(std::int64_t d_a_int, std::int64_t d_b_int) {
    detail::check_dimension(d_a_int, "coefficients");
    detail::check_dimension(d_b_int, "coefficients");
    const Rational da(d_a_int), db(d_b_int);
    const Rational d = da * db;
    const Rational common = (d - 1) * (d + 2) * (d + 4);
    const Rational off_diag = 2 * db * (db - 1) * (db - 2) * (da + 1) / common;
    const Rational diag = db * (da + 2) * (d * (da + 3) - 4) / common;
    Theorem1Exact c;
    c.x = off_diag + diag - 4 * db * db / (d * (d + 1)) + 2 / (da * (da + 1));
    c.y = -off_diag - diag + db * ((db - 1) * (da + 1) + da + 2) / (d + 2);
    c.alpha = c.x + c.y / d;
    c.beta = c.y / d;
    return c;
}

struct Theorem1Coefficients {
    std::int64_t d_a = 0, d_b = 0;
    double x = 0, y = 0, alpha = 0, beta = 0;
};

inline Theorem1Coefficients coefficients(std::int64_t d_a, std::int64_t d_b) {
    Theorem1Exact e = coefficients_exact(d_a, d_b);
    return {d_a, d_b, to_double(e.x), to_double(e.y), to_double(e.alpha), to_double(e.beta)};
}

/// alpha - beta * m_lin: the Clifford-averaged squared HS distance of the
/// projected ensemble's second moment, without the mean-quotient correction.
inline double theorem1_prediction(std::int64_t d_a, std::int64_t d_b, double m_lin) {
    detail::check_magic(m_lin, "theorem1_prediction");
    Theorem1Exact e = coefficients_exact(d_a, d_b);
    return to_double(e.alpha - e.beta * Rational(m_lin));
}

/// Terms of <||rho_C - rho_H||_2^2> = (I) - 2 (II) + (III) under the
/// mean-quotient approximation.
struct TermBreakdown {
    double term_i = 0, term_ii = 0, term_iii = 0;
    /// (I) split by outcome class: i != j and i == j.
    double term_i_offdiag = 0, term_i_diag = 0;
};

namespace detail {

struct TermsExact {
    Rational term_i_offdiag, term_i_diag, term_ii, term_iii;
};

inline TermsExact terms_exact(std::int64_t d_a_int, std::int64_t d_b_int, double m_lin) {
    const Rational da(d_a_int), db(d_b_int), d = da * db;
    const auto [a, b] = fourth_moment_exact(d, xi_norm_sq_from_magic(d, m_lin));
    TermsExact t;
    t.term_i_offdiag = db * db * (db - 1) * (d + 1) * (da + 1) * (4 * a / db + 2 * b);
    t.term_i_diag = db * db * (d + 1) * (da + 2) * (4 * a / db + b * da * (da + 3));
    t.term_ii = 2 * db / (da * (d + 1));
    t.term_iii = Rational(2) / (da * (da + 1));
    return t;
}

}  // namespace detail

inline TermBreakdown term_breakdown(std::int64_t d_a, std::int64_t d_b, double m_lin) {
    detail::check_dimension(d_a, "term_breakdown");
    detail::check_dimension(d_b, "term_breakdown");
    detail::check_magic(m_lin, "term_breakdown");
    auto t = detail::terms_exact(d_a, d_b, m_lin);
    TermBreakdown out;
    out.term_i_offdiag = to_double(t.term_i_offdiag);
    out.term_i_diag = to_double(t.term_i_diag);
    out.term_i = to_double(t.term_i_offdiag + t.term_i_diag);
    out.term_ii = to_double(t.term_ii);
    out.term_iii = to_double(t.term_iii);
    return out;
}

/// Clifford-group moments of y = Tr[(P_i (x) P_j) (C psi)^{(x)2}] = p_i p_j,
/// where P_i projects B onto outcome i, and of the single-outcome
/// probability p_i.
struct OutcomeMoments {
    double mean_y_offdiag = 0, mean_y2_offdiag = 0;  // <p_i p_j>, <p_i^2 p_j^2>, i != j
    double mean_y_diag = 0, mean_y2_diag = 0;        // <p_i^2>, <p_i^4>
    double mean_p = 0, mean_p2 = 0;                  // <p_i>, <p_i^2>
};

namespace detail {

struct OutcomeMomentsExact {
    Rational y_off, y2_off, y_diag, y2_diag, p, p2;
};

inline OutcomeMomentsExact outcome_moments_exact(std::int64_t d_a_int, std::int64_t d_b_int, double m_lin) {
    const Rational da(d_a_int), db(d_b_int), d = da * db;
    const auto [a, b] = fourth_moment_exact(d, xi_norm_sq_from_magic(d, m_lin));
    OutcomeMomentsExact o;
    o.y_off = da / (db * (d + 1));
    o.y2_off = 4 * a * da * (da + 1) / db + b * da * da * (da + 1) * (da + 1);
    o.y_diag = (da + 1) / (db * (d + 1));
    // Tr[P_i^{(x)4} Q Pi_4] = 4 (d_A+1)(d_A+2)/d_B and
    // Tr[P_i^{(x)4} Pi_4] = d_A (d_A+1)(d_A+2)(d_A+3).
    o.y2_diag = 4 * a * (da + 1) * (da + 2) / db + b * da * (da + 1) * (da + 2) * (da + 3);
    o.p = 1 / db;
    o.p2 = (da + 1) / (db * (d + 1));
    return o;
}

}  // namespace detail

inline OutcomeMoments outcome_moments(std::int64_t d_a, std::int64_t d_b, double m_lin) {
    detail::check_dimension(d_a, "outcome_moments");
    detail::check_dimension(d_b, "outcome_moments");
    detail::check_magic(m_lin, "outcome_moments");
    auto o = detail::outcome_moments_exact(d_a, d_b, m_lin);
    return {to_double(o.y_off), to_double(o.y2_off), to_double(o.y_diag),
            to_double(o.y2_diag), to_double(o.p),     to_double(o.p2)};
}

/// Estimated mean-quotient error epsilon (negative).
struct ErrorEstimate {
    /// Correction to (I): -sum over outcome classes of <x>/<y> * var(y)/<y>^2.
    double term_i_correction = 0;
    /// Correction to (II), same construction with y = p_i.
    double term_ii_correction = 0;
    /// term_i_correction - 2 term_ii_correction.
    double total = 0;
    /// var(y)/<y>^2 for i != j, i == j, and for p_i.
    double rel_var_offdiag = 0, rel_var_diag = 0, rel_var_p = 0;
};

inline ErrorEstimate error_estimate_parts(std::int64_t d_a, std::int64_t d_b, double m_lin) {
    detail::check_dimension(d_a, "error_estimate");
    detail::check_dimension(d_b, "error_estimate");
    detail::check_magic(m_lin, "error_estimate");
    auto terms = detail::terms_exact(d_a, d_b, m_lin);
    auto o = detail::outcome_moments_exact(d_a, d_b, m_lin);
    const Rational r_off = o.y2_off / (o.y_off * o.y_off) - 1;
    const Rational r_diag = o.y2_diag / (o.y_diag * o.y_diag) - 1;
    const Rational r_p = o.p2 / (o.p * o.p) - 1;
    const Rational eps_i = -(terms.term_i_offdiag * r_off + terms.term_i_diag * r_diag);
    const Rational eps_ii = -(terms.term_ii * r_p);
    ErrorEstimate e;
    e.term_i_correction = to_double(eps_i);
    e.term_ii_correction = to_double(eps_ii);
    e.total = to_double(eps_i - 2 * eps_ii);
    e.rel_var_offdiag = to_double(r_off);
    e.rel_var_diag = to_double(r_diag);
    e.rel_var_p = to_double(r_p);
    return e;
}

inline double error_estimate(std::int64_t d_a, std::int64_t d_b, double m_lin) {
    return error_estimate_parts(d_a, d_b, m_lin).total;
}

/// Q = d^{-2} sum_P P^{(x)4} on (C^d)^{(x)4}, d = 2^n, n <= 2.
inline Eigen::MatrixXcd q_operator(int num_qubits) {
    if (num_qubits < 1) throw ArgumentError("q_operator: need at least one qubit");
    if (num_qubits > 2) throw ResourceError("q_operator: d^4 x d^4 operator exceeds the 65536-entry guard");
    const std::size_t d = pow2(num_qubits);
    const std::size_t rows = d * d * d * d;
    Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(rows, rows);
    for (std::uint64_t x = 0; x < d; ++x) {
        for (std::uint64_t z = 0; z < d; ++z) {
            // P|b> = i^{#Y} (-1)^{|b&z|} |b^x>; the fourfold product carries (i^{#Y})^4 = 1.
            for (std::size_t col = 0; col < rows; ++col) {
                std::size_t row = 0, rest = col;
                int sign_bits = 0;
                std::size_t digits[4];
                for (int k = 3; k >= 0; --k) {
                    digits[k] = rest % d;
                    rest /= d;
                }
                for (int k = 0; k < 4; ++k) {
                    sign_bits += std::popcount(digits[k] & z);
                    row = row * d + (digits[k] ^ x);
                }
                q(row, col) += (sign_bits & 1) ? -1.0 : 1.0;
            }
        }
    }
    q /= static_cast<double>(d * d);
    return q;
}

/// a, b of the Clifford fourth moment for a specific state.
struct FourthMomentModel {
    double a = 0, b = 0;
    std::size_t d = 0;
    double xi_norm_sq = 0;

    /// a Tr[Q Pi_4] + b Tr[Pi_4], with Tr[Q Pi_4] = 4(d+1)(d+2).
    double trace() const {
        const double dd = static_cast<double>(d);
        return a * 4 * (dd + 1) * (dd + 2) + b * dd * (dd + 1) * (dd + 2) * (dd + 3);
    }
};

inline FourthMomentModel fourth_moment_model(const StateVector &psi, int max_qubits = kDefaultMaxMagicQubits) {
    XiVector xi = xi_vector(psi, max_qubits);
    const double xi_sq = xi.norm_squared();
    const auto [a, b] = fourth_moment_exact(Rational(static_cast<std::int64_t>(psi.dim())), Rational(xi_sq));
    return {to_double(a), to_double(b), psi.dim(), xi_sq};
}

/// a Q Pi_4 + b Pi_4 as a dense operator (n <= 2).
inline MomentOperator materialize(const FourthMomentModel &model) {
    const int n = std::countr_zero(model.d);
    if (n > 2) throw ResourceError("materialize: fourth-moment operator only materialized for n <= 2");
    Eigen::MatrixXcd pi = sym_projector(model.d, 4);
    Eigen::MatrixXcd op = model.a * (q_operator(n) * pi) + model.b * pi;
    return MomentOperator(4, model.d, std::move(op));
}

/// ||<C^{(x)4} psi^{(x)4} C^{dagger (x)4}> - rho_Haar^(4)||_2^2 without
/// measurement: the exact three-term closed form and its leading order
/// 6 (1 - M)^2 / d^4.
struct NoMeasurementDistance {
    double exact = 0;
    double leading = 0;
    double term_i = 0, term_ii = 0, term_iii = 0;
};

inline NoMeasurementDistance no_measurement_distance(std::int64_t d_int, double m_lin) {
    detail::check_dimension(d_int, "no_measurement_distance");
    detail::check_magic(m_lin, "no_measurement_distance");
    const Rational d(d_int), m(m_lin);
    const Rational u = 1 - m;      // 1 - M
    const Rational k = d - 1 + m;  // d - 1 + M
    const Rational d2 = d * d;
    const Rational term_i = 6 * u * u / (d2 * (d + 1) * (d + 2)) -
                            48 * u * k / (d2 * (d2 - 1) * (d + 2) * (d + 4)) +
                            96 * k * k / (d2 * (d - 1) * (d - 1) * (d + 1) * (d + 2) * (d + 4) * (d + 4)) +
                            48 * u * k / (d2 * (d2 - 1) * (d + 2) * (d + 4)) -
                            192 * k * k / (d2 * (d - 1) * (d - 1) * (d + 1) * (d + 2) * (d + 4) * (d + 4)) +
                            24 * k * k * (d + 3) / (d * (d - 1) * (d - 1) * (d + 1) * (d + 2) * (d + 4) * (d + 4));
    const Rational term_ii = 24 * u / (d2 * (d + 1) * (d + 2) * (d + 3)) -
                             96 * k / (d2 * (d2 - 1) * (d + 2) * (d + 3) * (d + 4)) +
                             24 * k / (d * (d2 - 1) * (d + 2) * (d + 4));
    const Rational term_iii = Rational(24) / (d * (d + 1) * (d + 2) * (d + 3));
    NoMeasurementDistance out;
    out.exact = to_double(term_i - 2 * term_ii + term_iii);
    out.leading = to_double(6 * u * u / (d2 * d2));
    out.term_i = to_double(term_i);
    out.term_ii = to_double(term_ii);
    out.term_iii = to_double(term_iii);
    return out;
}

}  // namespace magicproj
