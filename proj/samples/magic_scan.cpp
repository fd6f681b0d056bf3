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

// Prints the stabilizer linear entropy of |Psi(theta)> = (|0> + e^{i theta}|1>)^{(x)n} / 2^{n/2}
// next to the linear prediction for a 3 + 4 qubit split.

#include <cstdio>

#include "magicproj/magicproj.hpp"

int main() {
    using namespace magicproj;
    const int n_a = 3, n_b = 4, n = n_a + n_b;
    std::printf("%8s %10s %12s %12s\n", "theta", "M_lin", "prediction", "epsilon");
    for (int k = 0; k <= 8; ++k) {
        const double theta = kPi / 4 * k / 8;
        const double m = stabilizer_linear_entropy(product_phase_state(n, theta));
        std::printf("%8.4f %10.6f %12.6e %12.4e\n", theta, m, theorem1_prediction(8, 16, m), error_estimate(8, 16, m));
    }
}
