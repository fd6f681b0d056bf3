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
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "magicproj/core.hpp"
#include "magicproj/parallel.hpp"
#include "magicproj/qstate.hpp"

namespace magicproj {

/// Pauli string stored as X and Z bit masks (Y sets both). Character k of
/// the word acts on qubit k, which is bit (n - 1 - k) of each mask, matching
/// the StateVector index convention.
class PauliString {
   public:
    PauliString(int num_qubits, std::uint64_t x_mask, std::uint64_t z_mask)
        : num_qubits_(num_qubits), x_(x_mask), z_(z_mask) {
        if (num_qubits < 1 || num_qubits > 31) throw ArgumentError("PauliString: qubit count must be in [1, 31]");
        const std::uint64_t limit = std::uint64_t{1} << num_qubits;
        if (x_mask >= limit || z_mask >= limit) throw ArgumentError("PauliString: mask wider than qubit count");
    }

    static PauliString parse(std::string_view word) {
        std::uint64_t x = 0, z = 0;
        for (char c : word) {
            x <<= 1;
            z <<= 1;
            switch (c) {
                case 'I': case '_': break;
                case 'X': x |= 1; break;
                case 'Y': x |= 1; z |= 1; break;
                case 'Z': z |= 1; break;
                default: throw ArgumentError("PauliString::parse: unexpected character");
            }
        }
        return PauliString(static_cast<int>(word.size()), x, z);
    }

    /// Inverse of `index()`.
    static PauliString from_index(int num_qubits, std::uint64_t index) {
        const std::uint64_t mask = (std::uint64_t{1} << num_qubits) - 1;
        return PauliString(num_qubits, index >> num_qubits, index & mask);
    }

    int num_qubits() const { return num_qubits_; }
    std::uint64_t x_mask() const { return x_; }
    std::uint64_t z_mask() const { return z_; }
    int y_count() const { return std::popcount(x_ & z_); }

    /// Position of this string in XiVector: (x_mask << n) | z_mask.
    std::uint64_t index() const { return (x_ << num_qubits_) | z_; }

    std::string str() const {
        std::string out;
        for (int k = num_qubits_ - 1; k >= 0; --k) {
            bool x = (x_ >> k) & 1, z = (z_ >> k) & 1;
            out += x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
        }
        return out;
    }

   private:
    int num_qubits_;
    std::uint64_t x_, z_;
};

/// i^k for k mod 4.
inline cplx i_pow(int k) {
    switch (k & 3) {
        case 0: return {1, 0};
        case 1: return {0, 1};
        case 2: return {-1, 0};
        default: return {0, -1};
    }
}

namespace detail {

/// <psi|P|psi> as a complex number, using P|b> = i^{#Y} (-1)^{|b & z|} |b ^ x>.
inline cplx pauli_braket(const StateVector &state, const PauliString &p) {
    const std::uint64_t x = p.x_mask(), z = p.z_mask();
    cplx acc = 0;
    for (std::uint64_t b = 0; b < state.dim(); ++b) {
        cplx term = std::conj(state[b ^ x]) * state[b];
        acc += (std::popcount(b & z) & 1) ? -term : term;
    }
    return i_pow(p.y_count()) * acc;
}

/// In-place unnormalized Walsh-Hadamard transform.
inline void walsh_hadamard(std::vector<cplx> &v) {
    for (std::size_t h = 1; h < v.size(); h <<= 1) {
        for (std::size_t i = 0; i < v.size(); i += h << 1) {
            for (std::size_t j = i; j < i + h; ++j) {
                cplx a = v[j], b = v[j + h];
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
    }
}

/// Writes <P>^2 for every P with X part `x` into out[z], z = 0..2^n-1.
/// For fixed x, sum_b (-1)^{b.z} conj(psi[b^x]) psi[b] is a Walsh-Hadamard
/// transform over b, so all 2^n Z parts cost O(n 2^n).
inline void squared_expectations_for_x(const StateVector &state, std::uint64_t x, std::vector<cplx> &scratch,
                                       double *out) {
    const std::size_t dim = state.dim();
    scratch.resize(dim);
    for (std::uint64_t b = 0; b < dim; ++b) scratch[b] = std::conj(state[b ^ x]) * state[b];
    walsh_hadamard(scratch);
    for (std::uint64_t z = 0; z < dim; ++z) {
        double e = (i_pow(std::popcount(x & z)) * scratch[z]).real();
        out[z] = e * e;
    }
}

inline void check_magic_cap(int n, int max_qubits) {
    if (n > max_qubits) {
        throw ResourceError("Pauli sweep over 4^n strings exceeds the configured qubit cap (" +
                            std::to_string(max_qubits) + ")");
    }
}

}  // namespace detail

/// <psi|P|psi>; the imaginary residue of the Hermitian expectation is dropped.
inline double pauli_expectation(const StateVector &state, const PauliString &p) {
    if (state.num_qubits() != p.num_qubits()) throw ArgumentError("pauli_expectation: qubit counts differ");
    return detail::pauli_braket(state, p).real();
}

/// Xi_P = 2^{-n} <psi|P|psi>^2 for all 4^n Pauli strings, indexed by
/// PauliString::index().
struct XiVector {
    int num_qubits = 0;
    std::vector<double> entries;

    double sum() const { return compensated_sum(entries); }
    double norm_squared() const {
        std::vector<double> sq(entries.size());
        for (std::size_t i = 0; i < entries.size(); ++i) sq[i] = entries[i] * entries[i];
        return compensated_sum(sq);
    }
};

/// The sweep is chunked by X part; each chunk owns a disjoint output slice,
/// so the result is bitwise identical for any thread count.
inline XiVector xi_vector(const StateVector &state, int max_qubits = kDefaultMaxMagicQubits, unsigned threads = 1) {
    const int n = state.num_qubits();
    detail::check_magic_cap(n, max_qubits);
    const std::size_t dim = state.dim();
    XiVector xi{n, std::vector<double>(dim * dim)};
    const double scale = 1.0 / static_cast<double>(dim);
    parallel_for(dim, threads, [&](std::size_t x) {
        std::vector<cplx> scratch;
        double *out = xi.entries.data() + x * dim;
        detail::squared_expectations_for_x(state, x, scratch, out);
        for (std::size_t z = 0; z < dim; ++z) out[z] *= scale;
    });
    return xi;
}

/// M_lin = 1 - 2^n ||Xi||_2^2. Roundoff below zero (stabilizer states) is
/// clamped to 0 when within NumericPolicy::algebraic.
inline double stabilizer_linear_entropy(const StateVector &state, int max_qubits = kDefaultMaxMagicQubits,
                                        unsigned threads = 1) {
    XiVector xi = xi_vector(state, max_qubits, threads);
    const double m = 1.0 - static_cast<double>(state.dim()) * xi.norm_squared();
    return m < 0 && m > -NumericPolicy{}.algebraic ? 0.0 : m;
}

/// Closed-form M_lin of product_phase_state(n, theta):
/// 1 - ((1 + cos^4 + sin^4) / 2)^n.
inline double product_phase_magic(int num_qubits, double theta) {
    if (num_qubits < 1) throw ArgumentError("product_phase_magic: need at least one qubit");
    const double c = std::cos(theta), s = std::sin(theta);
    const double per_qubit = (1.0 + c * c * c * c + s * s * s * s) / 2.0;
    return 1.0 - std::pow(per_qubit, num_qubits);
}

/// Angle in [0, pi/4] whose product state has the requested magic; throws if
/// the target exceeds the product-state maximum 1 - (3/4)^n.
inline double theta_for_magic(int num_qubits, double magic) {
    const double max_magic = product_phase_magic(num_qubits, kPi / 4);
    if (magic < 0 || magic > max_magic + 1e-15) {
        throw ArgumentError("theta_for_magic: magic " + std::to_string(magic) + " outside [0, " +
                            std::to_string(max_magic) + "]");
    }
    double lo = 0, hi = kPi / 4;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        double mid = 0.5 * (lo + hi);
        (product_phase_magic(num_qubits, mid) < magic ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace magicproj
