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

#include <bit>
#include <cmath>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "magicproj/core.hpp"
#include "magicproj/rng.hpp"

namespace magicproj {

/// Dense pure state on N qubits.
///
/// Qubit 0 is the most significant bit of the amplitude index, so qubit q
/// lives at bit position (N - 1 - q). Every public constructor leaves the
/// state normalized within NumericPolicy::state_norm.
class StateVector {
   public:
    /// Takes ownership of `amplitudes`; throws unless the length is 2^N and
    /// the norm is 1.
    StateVector(int num_qubits, std::vector<cplx> amplitudes, const NumericPolicy &policy = {})
        : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
        check_shape();
        double n = norm();
        if (std::abs(n - 1.0) > policy.state_norm) {
            throw NumericPolicyError("StateVector: amplitudes are not normalized (norm " + std::to_string(n) + ")");
        }
    }

    /// Rescales `amplitudes` to unit norm. Throws on the zero vector.
    static StateVector normalized(int num_qubits, std::vector<cplx> amplitudes) {
        double n2 = 0;
        for (const auto &a : amplitudes) n2 += std::norm(a);
        if (!(n2 > 0)) {
            throw NumericPolicyError("StateVector::normalized: zero vector");
        }
        double inv = 1.0 / std::sqrt(n2);
        for (auto &a : amplitudes) a *= inv;
        return StateVector(num_qubits, std::move(amplitudes));
    }

    int num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return amplitudes_.size(); }
    std::span<const cplx> amplitudes() const { return amplitudes_; }
    const cplx &operator[](std::size_t index) const { return amplitudes_[index]; }

    double norm() const {
        double n2 = 0;
        for (const auto &a : amplitudes_) n2 += std::norm(a);
        return std::sqrt(n2);
    }

    Eigen::Map<const Eigen::VectorXcd> as_eigen() const {
        return {amplitudes_.data(), static_cast<Eigen::Index>(amplitudes_.size())};
    }

    /// Bit mask of qubit `q` inside an amplitude index.
    std::size_t qubit_mask(int q) const { return std::size_t{1} << (num_qubits_ - 1 - q); }

    // Kernels below mutate in place; callers reach them through the free
    // functions, which take the state by value.
    std::vector<cplx> &mutable_amplitudes() & { return amplitudes_; }

   private:
    void check_shape() const {
        if (num_qubits_ < 1 || num_qubits_ > 30) {
            throw ArgumentError("StateVector: qubit count must be in [1, 30]");
        }
        if (amplitudes_.size() != pow2(num_qubits_)) {
            throw ArgumentError("StateVector: amplitude count must equal 2^N");
        }
    }

    int num_qubits_;
    std::vector<cplx> amplitudes_;
};

/// A 2x2 or 4x4 unitary. Two-qubit matrices index the ordered pair
/// (q1, q2) as 2*bit(q1) + bit(q2).
class GateMatrix {
   public:
    explicit GateMatrix(Eigen::MatrixXcd matrix, const NumericPolicy &policy = {}) : matrix_(std::move(matrix)) {
        if (matrix_.rows() != matrix_.cols() || (matrix_.rows() != 2 && matrix_.rows() != 4)) {
            throw ArgumentError("GateMatrix: must be 2x2 or 4x4");
        }
        auto defect = (matrix_.adjoint() * matrix_ - Eigen::MatrixXcd::Identity(matrix_.rows(), matrix_.cols()))
                          .cwiseAbs()
                          .maxCoeff();
        if (defect > policy.algebraic) {
            throw NumericPolicyError("GateMatrix: not unitary");
        }
    }

    int dimension() const { return static_cast<int>(matrix_.rows()); }
    const Eigen::MatrixXcd &matrix() const { return matrix_; }
    cplx operator()(int row, int col) const { return matrix_(row, col); }
    GateMatrix adjoint() const { return GateMatrix(matrix_.adjoint()); }

   private:
    Eigen::MatrixXcd matrix_;
};

namespace gates {

inline GateMatrix hadamard() {
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::MatrixXcd m(2, 2);
    m << s, s, s, -s;
    return GateMatrix(m);
}

/// Clifford phase gate diag(1, i).
inline GateMatrix phase_s() {
    Eigen::MatrixXcd m(2, 2);
    m << 1, 0, 0, cplx(0, 1);
    return GateMatrix(m);
}

/// diag(1, e^{i pi/4}); not a Clifford gate.
inline GateMatrix phase_t() {
    Eigen::MatrixXcd m(2, 2);
    m << 1, 0, 0, std::polar(1.0, kPi / 4);
    return GateMatrix(m);
}

inline GateMatrix pauli_x() {
    Eigen::MatrixXcd m(2, 2);
    m << 0, 1, 1, 0;
    return GateMatrix(m);
}

inline GateMatrix pauli_y() {
    Eigen::MatrixXcd m(2, 2);
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return GateMatrix(m);
}

inline GateMatrix pauli_z() {
    Eigen::MatrixXcd m(2, 2);
    m << 1, 0, 0, -1;
    return GateMatrix(m);
}

/// CNOT with the first qubit of the pair as control.
inline GateMatrix cnot() {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
    return GateMatrix(m);
}

}  // namespace gates

/// |bits>, with bits[0] the state of qubit 0.
inline StateVector basis_state(int num_qubits, std::string_view bits) {
    if (num_qubits < 1) throw ArgumentError("basis_state: need at least one qubit");
    if (bits.size() != static_cast<std::size_t>(num_qubits)) {
        throw ArgumentError("basis_state: bitstring length does not match qubit count");
    }
    std::size_t index = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') throw ArgumentError("basis_state: bitstring must contain only 0 and 1");
        index = (index << 1) | static_cast<std::size_t>(c == '1');
    }
    std::vector<cplx> amps(pow2(num_qubits));
    amps[index] = 1;
    return StateVector(num_qubits, std::move(amps));
}

/// 2^{-n/2} (|0> + e^{i theta}|1>)^{(x) n}
inline StateVector product_phase_state(int num_qubits, double theta) {
    if (num_qubits < 1) throw ArgumentError("product_phase_state: need at least one qubit");
    const std::size_t dim = pow2(num_qubits);
    const double scale = std::pow(2.0, -0.5 * num_qubits);
    std::vector<cplx> amps(dim);
    for (std::size_t b = 0; b < dim; ++b) {
        amps[b] = std::polar(scale, theta * std::popcount(b));
    }
    return StateVector::normalized(num_qubits, std::move(amps));
}

/// Haar-random pure state from i.i.d. complex Gaussian amplitudes.
template <typename Gen>
StateVector haar_random_state(int num_qubits, Gen &gen) {
    if (num_qubits < 1) throw ArgumentError("haar_random_state: need at least one qubit");
    std::vector<cplx> amps(pow2(num_qubits));
    for (auto &a : amps) {
        double re = standard_normal(gen);
        double im = standard_normal(gen);
        a = cplx(re, im);
    }
    return StateVector::normalized(num_qubits, std::move(amps));
}

namespace detail {

inline void check_qubit(const StateVector &state, int q, const char *what) {
    if (q < 0 || q >= state.num_qubits()) {
        throw ArgumentError(std::string(what) + ": qubit index out of range");
    }
}

inline void one_qubit_inplace(std::vector<cplx> &amps, int num_qubits, const Eigen::MatrixXcd &u, int target) {
    const std::size_t mask = std::size_t{1} << (num_qubits - 1 - target);
    const cplx u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & mask) continue;
        cplx a0 = amps[i], a1 = amps[i | mask];
        amps[i] = u00 * a0 + u01 * a1;
        amps[i | mask] = u10 * a0 + u11 * a1;
    }
}

inline void two_qubit_inplace(std::vector<cplx> &amps, int num_qubits, const Eigen::MatrixXcd &u, int q1, int q2) {
    const std::size_t m1 = std::size_t{1} << (num_qubits - 1 - q1);
    const std::size_t m2 = std::size_t{1} << (num_qubits - 1 - q2);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & (m1 | m2)) continue;
        const std::size_t idx[4] = {i, i | m2, i | m1, i | m1 | m2};
        cplx in[4] = {amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]};
        for (int r = 0; r < 4; ++r) {
            amps[idx[r]] = u(r, 0) * in[0] + u(r, 1) * in[1] + u(r, 2) * in[2] + u(r, 3) * in[3];
        }
    }
}

}  // namespace detail

inline StateVector apply_one_qubit(StateVector state, const GateMatrix &gate, int target) {
    if (gate.dimension() != 2) throw ArgumentError("apply_one_qubit: gate must be 2x2");
    detail::check_qubit(state, target, "apply_one_qubit");
    detail::one_qubit_inplace(state.mutable_amplitudes(), state.num_qubits(), gate.matrix(), target);
    return state;
}

inline StateVector apply_two_qubit(StateVector state, const GateMatrix &gate, int q1, int q2) {
    if (gate.dimension() != 4) throw ArgumentError("apply_two_qubit: gate must be 4x4");
    detail::check_qubit(state, q1, "apply_two_qubit");
    detail::check_qubit(state, q2, "apply_two_qubit");
    if (q1 == q2) throw ArgumentError("apply_two_qubit: qubits must be distinct");
    detail::two_qubit_inplace(state.mutable_amplitudes(), state.num_qubits(), gate.matrix(), q1, q2);
    return state;
}

/// <a|b>, conjugate-linear in a.
inline cplx inner_product(const StateVector &a, const StateVector &b) {
    if (a.num_qubits() != b.num_qubits()) throw ArgumentError("inner_product: qubit counts differ");
    cplx acc = 0;
    for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

}  // namespace magicproj
