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
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bell/core.hpp"
#include "bell/correlators.hpp"

namespace bell {

/// Adds weight * (+1 on each alpha cell, -1 on each beta cell) of the family.
template <class T>
void add_family(PairTables<T> &coeffs, const CorrelatorFamily &family, const T &weight) {
    if (family.d() != coeffs.d()) {
        throw InvalidArgument("dimension mismatch between family and kernel");
    }
    int d = family.d();
    int m = 0;
    for (const CorrelatorSpec &spec : family.specs()) {
        auto [p1, p2] = correlator_cell(spec, m, spec.alpha, d);
        auto [q1, q2] = correlator_cell(spec, m, spec.beta, d);
        coeffs(spec.pair, p1, p2) += weight;
        coeffs(spec.pair, q1, q2) -= weight;
        ++m;
    }
}

/// Sum of the four k = 0 correlator families: +1 on v1 + v2 = 0 and -1 on v1 + v2 = -1 for (1,1) and
/// (2,2); +1 on 0 and -1 on 1 for (1,2); +1 on -1 and -1 on 0 for (2,1).
template <class T = double>
BasicKernel<T> build_cd_kernel(int d) {
    PairTables<T> coeffs(d);
    for (Pair p : kPairs) {
        add_family(coeffs, CorrelatorFamily::cd(d, p), T(1));
    }
    return BasicKernel<T>(std::move(coeffs));
}

/// (2/d^2) [csc^2(pi/4d) - csc^2(3pi/4d)].
inline double cd_quantum_closed_form(int d) {
    check_dimension(d);
    auto csc2 = [](double x) {
        double s = std::sin(x);
        return 1.0 / (s * s);
    };
    double dd = d;
    return 2.0 / (dd * dd) * (csc2(std::numbers::pi / (4 * dd)) - csc2(3 * std::numbers::pi / (4 * dd)));
}

/// Largest white-noise fraction for which the Bell state still exceeds the local bound 2.
inline double noise_threshold(int d) {
    return 1.0 - 2.0 / cd_quantum_closed_form(d);
}

enum class CglmpRange {
    Full,          // k = 0 .. floor(d/2)
    Conventional,  // k = 0 .. floor(d/2) - 1 for even d; same as Full for odd d
};

inline int cglmp_k_max(int d, CglmpRange range) {
    check_dimension(d);
    if (range == CglmpRange::Full || d % 2 == 1) {
        return d / 2;
    }
    return d / 2 - 1;
}

/// f(k) = 1 - 2k/(d-1).
template <class T = double>
T cglmp_weight(int d, int k) {
    return T(static_cast<std::int64_t>(d - 1 - 2 * k)) / T(static_cast<std::int64_t>(d - 1));
}

template <class T = double>
BasicKernel<T> build_cglmp_kernel(int d, int k_max) {
    check_dimension(d);
    if (k_max < 0 || k_max > d / 2) {
        throw InvalidArgument(
            "invalid k_max=" + std::to_string(k_max) + " for d=" + std::to_string(d) + ": must lie in [0, floor(d/2)]");
    }
    PairTables<T> coeffs(d);
    for (int k = 0; k <= k_max; ++k) {
        T weight = cglmp_weight<T>(d, k);
        for (Pair p : kPairs) {
            add_family(coeffs, CorrelatorFamily::cglmp(d, k, p), weight);
        }
    }
    return BasicKernel<T>(std::move(coeffs));
}

/// Phase constants of the trigonometric (SLK) coefficients: alpha_l = nu + alpha + nu_l.
struct SlkParams {
    Rational nu{1, 4};
    std::array<Rational, 4> nu_pair{};  // indexed by Pair::index()

    /// nu = 1/4, nu11 = nu22 = 0, nu21 = 1/2, nu12 = -1/2. With the canonical measurement settings this
    /// makes nu + nu_l = n1(i) + n2(j) for every pair.
    static SlkParams canonical() {
        SlkParams p;
        p.nu_pair = {Rational(0), Rational(-1, 2), Rational(1, 2), Rational(0)};
        return p;
    }

    /// Same as canonical() but nu12 = +1/2, which moves the (1,2) coefficients by one residue.
    static SlkParams shifted12() {
        SlkParams p = canonical();
        p.nu_pair[Pair{1, 2}.index()] = Rational(1, 2);
        return p;
    }

    const Rational &for_pair(Pair p) const {
        return nu_pair[check_pair(p).index()];
    }

    friend bool operator==(const SlkParams &, const SlkParams &) = default;
};

/// f_l(alpha) = sin(2 pi alpha_l) [cot(pi alpha_l / d) - cot(pi alpha_l)] / 4.
inline double slk_coefficient(int d, const SlkParams &params, Pair pair, int alpha) {
    check_dimension(d);
    if (alpha < 0 || alpha >= d) {
        throw InvalidArgument("alpha=" + std::to_string(alpha) + " out of range for d=" + std::to_string(d));
    }
    Rational alpha_l = params.nu + Rational(alpha) + params.for_pair(pair);
    if (is_integer(alpha_l)) {
        throw SingularFormula("SLK coefficient is singular: alpha_l=" + to_string(alpha_l) + " is an integer (pair " +
                              pair.label() + ")");
    }
    // sin(2 pi x) and cot(pi x) have period 1 in x, cot(pi x / d) has period d.
    double unit = to_double(rational_mod(alpha_l, 1));
    double wrapped = to_double(rational_mod(alpha_l, d));
    double pi = std::numbers::pi;
    auto cot = [](double x) { return std::cos(x) / std::sin(x); };
    return std::sin(2 * pi * unit) * (cot(pi * wrapped / d) - cot(pi * unit)) / 4;
}

inline std::vector<double> slk_pair_coefficients(int d, const SlkParams &params, Pair pair) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(d));
    for (int alpha = 0; alpha < d; ++alpha) {
        out.push_back(slk_coefficient(d, params, pair, alpha));
    }
    return out;
}

/// f_ij(alpha) on every cell with v1 + v2 = alpha (mod d), i.e. v1 = -m + alpha, v2 = m.
inline Kernel build_slk_kernel(int d, const SlkParams &params = SlkParams::canonical()) {
    PairTables<double> coeffs(d);
    for (Pair p : kPairs) {
        std::vector<double> f = slk_pair_coefficients(d, params, p);
        for (int alpha = 0; alpha < d; ++alpha) {
            for (int m = 0; m < d; ++m) {
                coeffs(p, nmod(alpha - m, d), m) += f[static_cast<std::size_t>(alpha)];
            }
        }
    }
    return Kernel(std::move(coeffs));
}

/// Local bound of the SLK kernel: (1/4) [3 cot(pi/4d) - cot(3pi/4d)] - 1.
inline double slk_lhv_formula(int d) {
    check_dimension(d);
    auto cot = [](double x) { return std::cos(x) / std::sin(x); };
    double dd = d;
    return 0.25 * (3 * cot(std::numbers::pi / (4 * dd)) - cot(3 * std::numbers::pi / (4 * dd))) - 1;
}

struct DecompositionTerm {
    int alpha = 0;  // source: positive coefficient
    int beta = 0;   // sink: negative coefficient
    double weight = 0;

    friend bool operator==(const DecompositionTerm &, const DecompositionTerm &) = default;
};

struct SignedDecomposition {
    std::vector<DecompositionTerm> terms;

    /// sum_t weight_t [delta(x = alpha_t) - delta(x = beta_t)] for x = 0..size-1.
    std::vector<double> reconstruct(std::size_t size) const {
        std::vector<double> out(size, 0.0);
        for (const DecompositionTerm &t : terms) {
            out[static_cast<std::size_t>(t.alpha)] += t.weight;
            out[static_cast<std::size_t>(t.beta)] -= t.weight;
        }
        return out;
    }
};

class NotDecomposable : public InvalidArgument {
   public:
    using InvalidArgument::InvalidArgument;
};

/// Splits a zero-sum coefficient list into nonnegative transfers from positive to negative entries.
/// Greedy: the largest remaining source is paired with the largest remaining sink (ties go to the
/// smaller index) with weight equal to the smaller residual.
inline SignedDecomposition decompose_zero_sum(std::span<const double> coeffs, double sum_tol = 1e-10) {
    double total = 0;
    double scale = 0;
    for (double c : coeffs) {
        total += c;
        scale = std::max(scale, std::abs(c));
    }
    if (std::abs(total) > sum_tol) {
        throw NotDecomposable("coefficients sum to " + std::to_string(total) + ", not zero");
    }
    // Residuals at or below this are leftovers of the zero-sum rounding.
    double eps = 1e-13 * std::max(1.0, scale);
    std::vector<double> residual(coeffs.begin(), coeffs.end());
    SignedDecomposition out;
    while (true) {
        int source = -1;
        int sink = -1;
        for (int i = 0; i < static_cast<int>(residual.size()); ++i) {
            double r = residual[static_cast<std::size_t>(i)];
            if (r > eps && (source < 0 || r > residual[static_cast<std::size_t>(source)])) {
                source = i;
            }
            if (r < -eps && (sink < 0 || r < residual[static_cast<std::size_t>(sink)])) {
                sink = i;
            }
        }
        if (source < 0 || sink < 0) {
            break;
        }
        double& rs = residual[static_cast<std::size_t>(source)];
        double& rt = residual[static_cast<std::size_t>(sink)];
        double w = std::min(rs, -rt);
        out.terms.push_back({source, sink, w});
        rs -= w;
        rt += w;
    }
    return out;
}

/// The SLK kernel written as weighted correlator differences: for each pair, the decomposition of
/// its coefficient list turned into general families C(alpha, beta) with sigma = -1.
inline std::vector<std::pair<double, CorrelatorFamily>> slk_correlator_terms(int d,
                                                                             const SlkParams &params =
                                                                                 SlkParams::canonical()) {
    std::vector<std::pair<double, CorrelatorFamily>> out;
    for (Pair p : kPairs) {
        std::vector<double> f = slk_pair_coefficients(d, params, p);
        for (const DecompositionTerm &t : decompose_zero_sum(f).terms) {
            out.emplace_back(t.weight, CorrelatorFamily::general(d, {p, -1, t.alpha, t.beta, false}));
        }
    }
    return out;
}

enum class KernelKind { Cd, Cglmp, CglmpFullRange, Slk };

inline constexpr std::array<KernelKind, 4> kKernelKinds{KernelKind::Cd, KernelKind::Cglmp,
                                                        KernelKind::CglmpFullRange, KernelKind::Slk};

inline std::string_view kernel_label(KernelKind kind) {
    switch (kind) {
        case KernelKind::Cd:
            return "cd";
        case KernelKind::Cglmp:
            return "cglmp";
        case KernelKind::CglmpFullRange:
            return "cglmp-full-range";
        case KernelKind::Slk:
            break;
    }
    return "slk";
}

inline KernelKind parse_kernel_kind(std::string_view label) {
    if (label == "cglmp-paper-range") {
        return KernelKind::CglmpFullRange;
    }
    for (KernelKind kind : kKernelKinds) {
        if (kernel_label(kind) == label) {
            return kind;
        }
    }
    throw InvalidArgument("unknown kernel label '" + std::string(label) +
                          "' (expected cd, cglmp, cglmp-full-range or slk)");
}

struct KernelOptions {
    SlkParams slk = SlkParams::canonical();
    std::optional<int> k_max;  // overrides the CGLMP preset range
};

inline int effective_k_max(KernelKind kind, int d, const KernelOptions &options) {
    if (options.k_max) {
        return *options.k_max;
    }
    return cglmp_k_max(d, kind == KernelKind::CglmpFullRange ? CglmpRange::Full : CglmpRange::Conventional);
}

inline Kernel build_named_kernel(KernelKind kind, int d, const KernelOptions &options = {}) {
    switch (kind) {
        case KernelKind::Cd:
            return build_cd_kernel<double>(d);
        case KernelKind::Cglmp:
        case KernelKind::CglmpFullRange:
            return build_cglmp_kernel<double>(d, effective_k_max(kind, d, options));
        case KernelKind::Slk:
            break;
    }
    return build_slk_kernel(d, options.slk);
}

/// Rational-backed variant for the kernels with rational coefficients; empty for SLK.
inline std::optional<ExactKernel> build_named_exact_kernel(KernelKind kind, int d, const KernelOptions &options = {}) {
    switch (kind) {
        case KernelKind::Cd:
            return build_cd_kernel<Rational>(d);
        case KernelKind::Cglmp:
        case KernelKind::CglmpFullRange:
            return build_cglmp_kernel<Rational>(d, effective_k_max(kind, d, options));
        case KernelKind::Slk:
            break;
    }
    return std::nullopt;
}

/// Closed-form quantum value under the canonical settings, when one is known.
inline std::optional<double> named_kernel_closed_form(KernelKind kind, int d, const KernelOptions &options = {}) {
    switch (kind) {
        case KernelKind::Cd:
            return cd_quantum_closed_form(d);
        case KernelKind::Cglmp:
        case KernelKind::CglmpFullRange: {
            double total = 0;
            int k_max = effective_k_max(kind, d, options);
            for (int k = 0; k <= k_max; ++k) {
                total += cglmp_weight<double>(d, k) * 4.0 * d * closed_form_correlator(d, k);
            }
            return total;
        }
        case KernelKind::Slk:
            break;
    }
    if (options.slk == SlkParams::canonical()) {
        return static_cast<double>(d - 1);
    }
    return std::nullopt;
}

}  // namespace bell
