// Copyright 2026 The bell-kernels Authors
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
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "bell/core.hpp"
#include "bell/kernels.hpp"
#include "bell/quantum.hpp"

namespace bell {

template <class T>
struct BasicLhvResult {
    T max_value{};
    DeterministicStrategy argmax;
    T min_value{};
    DeterministicStrategy argmin;
    std::uint64_t strategy_count = 0;

    friend bool operator==(const BasicLhvResult &, const BasicLhvResult &) = default;
};

using LhvResult = BasicLhvResult<double>;

inline constexpr std::uint64_t kDefaultEnumerationCap = 100'000'000;

struct LhvOptions {
    std::uint64_t cap = kDefaultEnumerationCap;
    unsigned workers = 0;  // 0 means std::thread::hardware_concurrency()
};

inline unsigned resolve_workers(unsigned requested) {
    if (requested > 0) {
        return requested;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace internal {

template <class T>
struct ChunkBest {
    bool seen = false;
    T max_value{};
    std::uint64_t argmax = 0;
    T min_value{};
    std::uint64_t argmin = 0;
};

template <class T>
ChunkBest<T> scan_range(const BasicKernel<T> &k, std::uint64_t begin, std::uint64_t end) {
    ChunkBest<T> best;
    int d = k.d();
    for (std::uint64_t i = begin; i < end; ++i) {
        T v = strategy_kernel_value(k, DeterministicStrategy::from_index(i, d));
        if (!best.seen) {
            best = {true, v, i, v, i};
            continue;
        }
        if (v > best.max_value) {
            best.max_value = v;
            best.argmax = i;
        }
        if (v < best.min_value) {
            best.min_value = v;
            best.argmin = i;
        }
    }
    return best;
}

}  // namespace internal

/// Exhaustive maximum and minimum over all d^4 deterministic strategies.
///
/// Ties go to the lexicographically smallest strategy. Chunks are contiguous in enumeration order and
/// merged in that order, so the result does not depend on the worker count.
template <class T>
BasicLhvResult<T> lhv_oracle(const BasicKernel<T> &k, const LhvOptions &options = {}) {
    int d = k.d();
    std::uint64_t total = strategy_count(d);
    if (total > options.cap) {
        throw CapExceeded("lhv_oracle would enumerate " + std::to_string(total) + " strategies (cap " +
                          std::to_string(options.cap) + "); use lhv_fast");
    }
    std::uint64_t workers = std::min<std::uint64_t>(resolve_workers(options.workers), total);
    std::vector<internal::ChunkBest<T>> partial(workers);
    {
        std::vector<std::jthread> threads;
        for (std::uint64_t w = 0; w < workers; ++w) {
            std::uint64_t begin = total * w / workers;
            std::uint64_t end = total * (w + 1) / workers;
            threads.emplace_back([&k, &partial, w, begin, end] { partial[w] = internal::scan_range(k, begin, end); });
        }
    }
    internal::ChunkBest<T> best = partial.front();
    for (std::size_t w = 1; w < partial.size(); ++w) {
        const auto &p = partial[w];
        if (p.max_value > best.max_value) {
            best.max_value = p.max_value;
            best.argmax = p.argmax;
        }
        if (p.min_value < best.min_value) {
            best.min_value = p.min_value;
            best.argmin = p.argmin;
        }
    }
    return {best.max_value, DeterministicStrategy::from_index(best.argmax, d), best.min_value,
            DeterministicStrategy::from_index(best.argmin, d), total};
}

namespace internal {

// For fixed party-2 outcomes (b1, b2) a strategy's value is r1[a1] + r2[a2], with
// r1[a] = K11[a][b1] + K12[a][b2] and r2[a] = K21[a][b1] + K22[a][b2], added exactly as
// strategy_kernel_value does. Rounded addition is monotone, so the extremum is ext(r1) + ext(r2).
template <class T, class Better>
void best_response(const BasicKernel<T> &k, Better better, T &best_value, DeterministicStrategy &best_strategy) {
    int d = k.d();
    std::vector<T> r1(static_cast<std::size_t>(d));
    std::vector<T> r2(static_cast<std::size_t>(d));
    bool seen = false;
    for (int b1 = 0; b1 < d; ++b1) {
        for (int b2 = 0; b2 < d; ++b2) {
            for (int a = 0; a < d; ++a) {
                r1[a] = k({1, 1}, a, b1) + k({1, 2}, a, b2);
                r2[a] = k({2, 1}, a, b1) + k({2, 2}, a, b2);
            }
            T e1 = r1[0];
            T e2 = r2[0];
            for (int a = 1; a < d; ++a) {
                if (better(r1[a], e1)) e1 = r1[a];
                if (better(r2[a], e2)) e2 = r2[a];
            }
            T value = e1 + e2;
            if (seen && better(best_value, value)) {
                continue;
            }
            // Smallest a1 that can still reach value, then the smallest partner a2.
            int a1 = 0;
            while (!(r1[a1] + e2 == value)) ++a1;
            int a2 = 0;
            while (!(r1[a1] + r2[a2] == value)) ++a2;
            DeterministicStrategy candidate{{a1, a2}, {b1, b2}};
            if (!seen || better(value, best_value) || candidate < best_strategy) {
                best_value = value;
                best_strategy = candidate;
                seen = true;
            }
        }
    }
}

}  // namespace internal

/// Same result as lhv_oracle in O(d^3) time.
template <class T>
BasicLhvResult<T> lhv_fast(const BasicKernel<T> &k) {
    BasicLhvResult<T> out;
    out.strategy_count = strategy_count(k.d());
    internal::best_response(k, [](const T &x, const T &y) { return x > y; }, out.max_value, out.argmax);
    internal::best_response(k, [](const T &x, const T &y) { return x < y; }, out.min_value, out.argmin);
    return out;
}

inline constexpr double kViolationMargin = 1e-9;

struct ViolationReport {
    int d = 0;
    std::string kernel_name;
    double p_noise = 0;
    double quantum_value = 0;
    double lhv_max = 0;
    DeterministicStrategy lhv_argmax;
    double ratio = 0;  // quantum_value / lhv_max
    bool violated = false;
    std::optional<double> closed_form;   // known quantum value of the noiseless state
    std::optional<double> lhv_formula;   // analytic local bound, reported next to the measured one
};

struct ViolationOptions {
    MeasurementSettings settings = MeasurementSettings::canonical();
    KernelOptions kernel;
    double p_noise = 0;
};

inline ViolationReport violation_report(KernelKind kind, int d, const ViolationOptions &options = {}) {
    Kernel k = build_named_kernel(kind, d, options.kernel);
    Behavior b = noisy_behavior(d, options.settings, options.p_noise);
    LhvResult lhv = lhv_fast(k);
    ViolationReport r;
    r.d = d;
    r.kernel_name = std::string(kernel_label(kind));
    r.p_noise = options.p_noise;
    r.quantum_value = evaluate_kernel(k, b);
    r.lhv_max = lhv.max_value;
    r.lhv_argmax = lhv.argmax;
    r.ratio = r.quantum_value / r.lhv_max;
    r.violated = r.quantum_value > r.lhv_max + kViolationMargin;
    if (options.settings == MeasurementSettings::canonical()) {
        r.closed_form = named_kernel_closed_form(kind, d, options.kernel);
    }
    if (kind == KernelKind::Slk) {
        r.lhv_formula = slk_lhv_formula(d);
    }
    return r;
}

struct NoiseScanRow {
    double p_noise = 0;
    double value = 0;
    bool violated = false;
};

struct NoiseScan {
    int d = 0;
    std::string kernel_name;
    double lhv_max = 0;
    std::vector<NoiseScanRow> rows;

    /// Grid interval [p_i, p_{i+1}] where the violation is first lost, if it is.
    std::optional<std::pair<double, double>> crossover() const {
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (rows[i - 1].violated && !rows[i].violated) {
                return std::pair{rows[i - 1].p_noise, rows[i].p_noise};
            }
        }
        return std::nullopt;
    }
};

/// Kernel value on the noisy Bell-state behavior for p_noise = i / (steps - 1), i = 0..steps-1.
inline NoiseScan noise_tolerance_scan(KernelKind kind, int d, int steps, const ViolationOptions &options = {}) {
    if (steps < 2) {
        throw InvalidArgument("steps must be at least 2, got " + std::to_string(steps));
    }
    Kernel k = build_named_kernel(kind, d, options.kernel);
    Behavior pure = oracle_behavior(d, options.settings);
    Behavior noise = uniform_behavior<double>(d);
    NoiseScan scan;
    scan.d = d;
    scan.kernel_name = std::string(kernel_label(kind));
    scan.lhv_max = lhv_fast(k).max_value;
    for (int i = 0; i < steps; ++i) {
        double p = static_cast<double>(i) / (steps - 1);
        double value = evaluate_kernel(k, mix(pure, noise, p));
        scan.rows.push_back({p, value, value > scan.lhv_max + kViolationMargin});
    }
    return scan;
}

}  // namespace bell
