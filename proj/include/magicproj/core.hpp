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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace magicproj {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Invalid call: bad index, shape mismatch, precondition violated by the caller.
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A cost guard (memory or qubit cap) would be exceeded.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input that satisfies the shape contract but violates a numeric tolerance.
struct NumericPolicyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Tolerances shared across the library.
struct NumericPolicy {
    double state_norm = 1e-10;
    double algebraic = 1e-12;
    double probability_sum = 1e-9;
    /// Largest probability mass `projected_ensemble` may drop via its floor.
    double dropped_mass = 1e-12;
};

/// Row cap for dense operators on the t-fold tensor power.
inline constexpr std::size_t kDefaultMaxMomentRows = 4096;

/// Qubit cap for the 4^n Pauli sweep.
inline constexpr int kDefaultMaxMagicQubits = 10;

inline constexpr std::size_t pow2(int n) { return std::size_t{1} << n; }

inline std::size_t checked_power(std::size_t base, int exponent, std::size_t cap, const char *what) {
    std::size_t result = 1;
    for (int k = 0; k < exponent; ++k) {
        if (result > cap / base) {
            throw ResourceError(std::string(what) + ": operator dimension exceeds the memory guard");
        }
        result *= base;
    }
    if (result > cap) {
        throw ResourceError(std::string(what) + ": operator dimension exceeds the memory guard");
    }
    return result;
}

}  // namespace magicproj
