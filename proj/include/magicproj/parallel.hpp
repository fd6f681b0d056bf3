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
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace magicproj {

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index
/// must write only its own output slot; the first exception is rethrown.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body &&body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(count);
                return;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    pool.clear();
    if (error) std::rethrow_exception(error);
}

/// Neumaier-compensated sum, accumulated in index order.
inline double compensated_sum(std::span<const double> values) {
    double sum = 0, carry = 0;
    for (double v : values) {
        double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    return sum + carry;
}

struct SampleStats {
    double mean = 0;
    /// Unbiased sample variance; 0 for a single sample.
    double variance = 0;
    double std_err = 0;
    std::size_t count = 0;
};

inline SampleStats sample_stats(std::span<const double> values) {
    SampleStats s;
    s.count = values.size();
    if (values.empty()) return s;
    s.mean = compensated_sum(values) / static_cast<double>(values.size());
    if (values.size() > 1) {
        std::vector<double> sq(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) sq[i] = (values[i] - s.mean) * (values[i] - s.mean);
        s.variance = compensated_sum(sq) / static_cast<double>(values.size() - 1);
        s.std_err = std::sqrt(s.variance / static_cast<double>(values.size()));
    }
    return s;
}

}  // namespace magicproj
