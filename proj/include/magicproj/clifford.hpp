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

#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "magicproj/core.hpp"
#include "magicproj/ensemble.hpp"
#include "magicproj/qstate.hpp"
#include "magicproj/rng.hpp"

namespace magicproj {

/// The five two-qubit layer gates: CNOT, H (x) I, S (x) I, I (x) H, I (x) S.
enum class GateId : std::uint8_t { CNOT, H_FIRST, S_FIRST, H_SECOND, S_SECOND };

inline constexpr std::array<GateId, 5> kLayerGates = {GateId::CNOT, GateId::H_FIRST, GateId::S_FIRST,
                                                      GateId::H_SECOND, GateId::S_SECOND};

inline std::string_view to_string(GateId g) {
    switch (g) {
        case GateId::CNOT: return "CNOT";
        case GateId::H_FIRST: return "H_FIRST";
        case GateId::S_FIRST: return "S_FIRST";
        case GateId::H_SECOND: return "H_SECOND";
        case GateId::S_SECOND: return "S_SECOND";
    }
    return "?";
}

/// One layer acting on the ordered pair (first, second). For CNOT, `first`
/// is the control.
struct GateInstruction {
    GateId gate;
    int first;
    int second;

    bool operator==(const GateInstruction &) const = default;
};

struct CliffordCircuit {
    int num_qubits = 0;
    std::vector<GateInstruction> layers;

    std::size_t depth() const { return layers.size(); }

    void validate() const {
        for (const auto &g : layers) {
            if (g.first < 0 || g.second < 0 || g.first >= num_qubits || g.second >= num_qubits ||
                g.first == g.second) {
                throw ArgumentError("CliffordCircuit: instruction pair out of range or not distinct");
            }
        }
    }
};

/// Which matrix plays "S". `LiteralPaperT` uses diag(1, e^{i pi/4}), which
/// breaks the Clifford property; it exists for comparison runs only.
enum class PhaseConvention { Clifford, LiteralPaperT };

/// Each layer draws an ordered distinct pair uniformly from the n(n-1)
/// candidates and a gate uniformly from kLayerGates. Pure in (seed, n, depth).
inline CliffordCircuit sample_circuit(std::uint64_t seed, int num_qubits, std::size_t depth) {
    if (num_qubits < 2) throw ArgumentError("sample_circuit: need at least two qubits");
    SplitMix64 gen(seed);
    CliffordCircuit circuit{num_qubits, {}};
    circuit.layers.reserve(depth);
    const auto n = static_cast<std::uint64_t>(num_qubits);
    for (std::size_t layer = 0; layer < depth; ++layer) {
        std::uint64_t pair = uniform_below(gen, n * (n - 1));
        int first = static_cast<int>(pair / (n - 1));
        int second = static_cast<int>(pair % (n - 1));
        if (second >= first) ++second;
        auto gate = kLayerGates[uniform_below(gen, kLayerGates.size())];
        circuit.layers.push_back({gate, first, second});
    }
    return circuit;
}

namespace detail {

inline void apply_h(std::vector<cplx> &amps, std::size_t mask) {
    const double s = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & mask) continue;
        cplx a0 = amps[i], a1 = amps[i | mask];
        amps[i] = s * (a0 + a1);
        amps[i | mask] = s * (a0 - a1);
    }
}

inline void apply_phase(std::vector<cplx> &amps, std::size_t mask, cplx phase) {
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & mask) amps[i] *= phase;
    }
}

inline void apply_cnot(std::vector<cplx> &amps, std::size_t control, std::size_t target) {
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & control) && !(i & target)) std::swap(amps[i], amps[i | target]);
    }
}

}  // namespace detail

/// Applies the layers in list order.
inline StateVector apply_circuit(const CliffordCircuit &circuit, StateVector state,
                                 PhaseConvention convention = PhaseConvention::Clifford) {
    if (circuit.num_qubits != state.num_qubits()) throw ArgumentError("apply_circuit: qubit counts differ");
    circuit.validate();
    const cplx phase = convention == PhaseConvention::Clifford ? cplx(0, 1) : std::polar(1.0, kPi / 4);
    auto &amps = state.mutable_amplitudes();
    for (const auto &g : circuit.layers) {
        const std::size_t m1 = state.qubit_mask(g.first), m2 = state.qubit_mask(g.second);
        switch (g.gate) {
            case GateId::CNOT: detail::apply_cnot(amps, m1, m2); break;
            case GateId::H_FIRST: detail::apply_h(amps, m1); break;
            case GateId::S_FIRST: detail::apply_phase(amps, m1, phase); break;
            case GateId::H_SECOND: detail::apply_h(amps, m2); break;
            case GateId::S_SECOND: detail::apply_phase(amps, m2, phase); break;
        }
    }
    return state;
}

/// One representative per element of the n-qubit Clifford group modulo
/// global phase, for n in {1, 2}.
class CliffordGroupTable {
   public:
    using Key = std::vector<long long>;

    CliffordGroupTable(int num_qubits, std::vector<Eigen::MatrixXcd> unitaries)
        : num_qubits_(num_qubits), unitaries_(std::move(unitaries)) {
        for (std::size_t i = 0; i < unitaries_.size(); ++i) index_.emplace(key_of(unitaries_[i]), i);
    }

    int num_qubits() const { return num_qubits_; }
    std::size_t size() const { return unitaries_.size(); }
    const std::vector<Eigen::MatrixXcd> &unitaries() const { return unitaries_; }
    const Eigen::MatrixXcd &operator[](std::size_t i) const { return unitaries_[i]; }

    /// Index of the element equal to `u` up to global phase.
    std::optional<std::size_t> find(const Eigen::MatrixXcd &u) const {
        auto it = index_.find(key_of(canonicalize(u)));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    /// Rotates the first nonzero entry (row-major) onto the positive real axis.
    static Eigen::MatrixXcd canonicalize(const Eigen::MatrixXcd &u) {
        for (Eigen::Index r = 0; r < u.rows(); ++r) {
            for (Eigen::Index c = 0; c < u.cols(); ++c) {
                double mag = std::abs(u(r, c));
                if (mag > 1e-9) return u * (std::conj(u(r, c)) / mag);
            }
        }
        return u;
    }

    /// Entries rounded to 1e-9; expects a canonicalized matrix.
    static Key key_of(const Eigen::MatrixXcd &u) {
        Key key;
        key.reserve(2 * u.size());
        for (Eigen::Index r = 0; r < u.rows(); ++r) {
            for (Eigen::Index c = 0; c < u.cols(); ++c) {
                key.push_back(std::llround(u(r, c).real() * 1e9));
                key.push_back(std::llround(u(r, c).imag() * 1e9));
            }
        }
        return key;
    }

   private:
    int num_qubits_;
    std::vector<Eigen::MatrixXcd> unitaries_;
    std::map<Key, std::size_t> index_;
};

namespace detail {

inline Eigen::MatrixXcd embed_one_qubit(const Eigen::MatrixXcd &u, int n, int q) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (int k = 0; k < n; ++k) {
        const Eigen::MatrixXcd factor = k == q ? u : Eigen::MatrixXcd::Identity(2, 2);
        Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
        for (Eigen::Index i = 0; i < out.rows(); ++i)
            for (Eigen::Index j = 0; j < out.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = out(i, j) * factor;
        out = std::move(next);
    }
    return out;
}

inline Eigen::MatrixXcd cnot_matrix(int n, int control, int target) {
    const std::size_t dim = pow2(n);
    const std::size_t cm = std::size_t{1} << (n - 1 - control), tm = std::size_t{1} << (n - 1 - target);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t b = 0; b < dim; ++b) out((b & cm) ? b ^ tm : b, b) = 1;
    return out;
}

}  // namespace detail

/// Breadth-first closure of {H_q, S_q, CNOT_(c,t)} modulo global phase.
inline CliffordGroupTable enumerate_clifford_group(int num_qubits) {
    if (num_qubits < 1) throw ArgumentError("enumerate_clifford_group: need at least one qubit");
    if (num_qubits > 2) throw ResourceError("enumerate_clifford_group: only n = 1 or 2 is supported");
    std::vector<Eigen::MatrixXcd> generators;
    for (int q = 0; q < num_qubits; ++q) {
        generators.push_back(detail::embed_one_qubit(gates::hadamard().matrix(), num_qubits, q));
        generators.push_back(detail::embed_one_qubit(gates::phase_s().matrix(), num_qubits, q));
    }
    for (int c = 0; c < num_qubits; ++c)
        for (int t = 0; t < num_qubits; ++t)
            if (c != t) generators.push_back(detail::cnot_matrix(num_qubits, c, t));

    const std::size_t dim = pow2(num_qubits);
    std::vector<Eigen::MatrixXcd> elements{Eigen::MatrixXcd::Identity(dim, dim)};
    std::map<CliffordGroupTable::Key, std::size_t> seen{{CliffordGroupTable::key_of(elements[0]), 0}};
    std::deque<std::size_t> frontier{0};
    while (!frontier.empty()) {
        const std::size_t current = frontier.front();
        frontier.pop_front();
        for (const auto &g : generators) {
            Eigen::MatrixXcd next = CliffordGroupTable::canonicalize(g * elements[current]);
            auto [it, inserted] = seen.emplace(CliffordGroupTable::key_of(next), elements.size());
            if (inserted) {
                elements.push_back(std::move(next));
                frontier.push_back(elements.size() - 1);
            }
        }
    }
    return CliffordGroupTable(num_qubits, std::move(elements));
}

/// Exact (1/|G|) sum_C (C psi)^{(x) t} (C psi)^{dagger (x) t}.
inline MomentOperator group_average_moment(const CliffordGroupTable &table, const StateVector &psi, int t,
                                           std::size_t max_rows = kDefaultMaxMomentRows) {
    if (psi.num_qubits() != table.num_qubits()) throw ArgumentError("group_average_moment: qubit counts differ");
    if (t < 1 || t > 4) throw ArgumentError("group_average_moment: order must be in 1..4");
    const std::size_t d = psi.dim();
    const std::size_t rows = checked_power(d, t, max_rows, "group_average_moment");
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(rows, rows);
    constexpr std::size_t kChunk = 512;
    const auto v = psi.as_eigen();
    for (std::size_t start = 0; start < table.size(); start += kChunk) {
        const std::size_t count = std::min(kChunk, table.size() - start);
        Eigen::MatrixXcd cols(rows, count);
        for (std::size_t k = 0; k < count; ++k) {
            Eigen::VectorXcd image = table[start + k] * v;
            cols.col(k) = tensor_power(image, t);
        }
        acc.noalias() += cols * cols.adjoint();
    }
    acc /= static_cast<double>(table.size());
    return MomentOperator(t, d, std::move(acc));
}

}  // namespace magicproj
