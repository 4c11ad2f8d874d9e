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

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "bell/core.hpp"

namespace bell {

enum class FamilyKind {
    CdDiagonal,  // pairs (1,1), (2,2) of the C_d kernel
    CdCross12,   // pair (1,2) of the C_d kernel
    CdCross21,   // pair (2,1) of the C_d kernel
    Cglmp,       // k-th family of the CGLMP kernel
    Qubit,       // C_0 = P(0,0) - P(1,0), C_1 = P(1,1) - P(0,1)
    QubitDual,   // party roles swapped
    General,
};

/// d correlators C_m, m = 0..d-1, sharing pair, sign and offsets.
class CorrelatorFamily {
   public:
    /// The k = 0 family of the C_d kernel for the given pair. Positive on v1 + v2 = 0 (mod d) for the
    /// diagonal pairs and (1,2); (2,1) is shifted to v1 + v2 = -1.
    static CorrelatorFamily cd(int d, Pair pair) {
        check_pair(pair);
        if (pair.first == pair.second) {
            return CorrelatorFamily(d, FamilyKind::CdDiagonal, 0, {pair, -1, 0, -1, false});
        }
        if (pair.first == 1) {
            return CorrelatorFamily(d, FamilyKind::CdCross12, 0, {pair, -1, 0, 1, false});
        }
        return CorrelatorFamily(d, FamilyKind::CdCross21, 0, {pair, -1, -1, 0, false});
    }

    /// k-th CGLMP family, 0 <= k <= floor(d/2). The outcome sign is -1 because the Fourier
    /// measurements correlate v1 + v2; at k = 0 this coincides with cd(d, pair).
    static CorrelatorFamily cglmp(int d, int k, Pair pair) {
        check_dimension(d);
        check_pair(pair);
        if (k < 0 || k > d / 2) {
            throw InvalidArgument(
                "invalid k=" + std::to_string(k) + " for d=" + std::to_string(d) + ": must lie in [0, floor(d/2)]");
        }
        CorrelatorSpec spec{pair, -1, 0, 0, false};
        if (pair.first == pair.second) {
            spec.alpha = k;
            spec.beta = -k - 1;
        } else if (pair.first == 1) {
            spec.alpha = -k;
            spec.beta = k + 1;
        } else {
            spec.alpha = -k - 1;
            spec.beta = k;
        }
        return CorrelatorFamily(d, FamilyKind::Cglmp, k, spec);
    }

    static CorrelatorFamily qubit(Pair pair) {
        return CorrelatorFamily(2, FamilyKind::Qubit, 0, {check_pair(pair), 1, 0, 1, false});
    }

    static CorrelatorFamily qubit_dual(Pair pair) {
        return CorrelatorFamily(2, FamilyKind::QubitDual, 0, {check_pair(pair), 1, 0, 1, true});
    }

    static CorrelatorFamily general(int d, CorrelatorSpec spec) {
        return CorrelatorFamily(d, FamilyKind::General, 0, spec);
    }

    int d() const {
        return d_;
    }
    FamilyKind kind() const {
        return kind_;
    }
    int k() const {
        return k_;
    }
    Pair pair() const {
        return specs_.front().pair;
    }
    std::span<const CorrelatorSpec> specs() const {
        return specs_;
    }
    const CorrelatorSpec &spec() const {
        return specs_.front();
    }

    std::string name() const {
        std::string p = pair().label();
        switch (kind_) {
            case FamilyKind::CdDiagonal:
            case FamilyKind::CdCross12:
            case FamilyKind::CdCross21:
                return "cd(" + p + ")";
            case FamilyKind::Cglmp:
                return "cglmp(k=" + std::to_string(k_) + "," + p + ")";
            case FamilyKind::Qubit:
                return "qubit(" + p + ")";
            case FamilyKind::QubitDual:
                return "qubit-dual(" + p + ")";
            case FamilyKind::General:
                break;
        }
        const CorrelatorSpec &s = spec();
        return "general(" + p + ",sigma=" + std::to_string(s.sigma) + ",alpha=" + std::to_string(s.alpha) +
               ",beta=" + std::to_string(s.beta) + (s.dual ? ",dual" : "") + ")";
    }

   private:
    CorrelatorFamily(int d, FamilyKind kind, int k, CorrelatorSpec spec) : d_(check_dimension(d)), kind_(kind), k_(k) {
        check_spec(spec);
        spec.alpha = nmod(spec.alpha, d);
        spec.beta = nmod(spec.beta, d);
        specs_.assign(static_cast<std::size_t>(d), spec);
    }

    int d_;
    FamilyKind kind_;
    int k_;
    std::vector<CorrelatorSpec> specs_;
};

/// Cell (v1, v2) carrying the offset `offset` for correlator index m.
inline std::pair<int, int> correlator_cell(const CorrelatorSpec &spec, int m, int offset, int d) {
    int shifted = nmod(static_cast<std::int64_t>(spec.sigma) * m + offset, d);
    return spec.dual ? std::pair{m, shifted} : std::pair{shifted, m};
}

template <class T>
T correlator_value(const BasicBehavior<T> &b, const CorrelatorSpec &spec, int m) {
    check_spec(spec);
    int d = b.d();
    if (m < 0 || m >= d) {
        throw InvalidArgument("correlator index m=" + std::to_string(m) + " out of range for d=" + std::to_string(d));
    }
    auto [p1, p2] = correlator_cell(spec, m, spec.alpha, d);
    auto [q1, q2] = correlator_cell(spec, m, spec.beta, d);
    return b(spec.pair, p1, p2) - b(spec.pair, q1, q2);
}

template <class T>
std::vector<T> family_values(const BasicBehavior<T> &b, const CorrelatorFamily &family) {
    if (family.d() != b.d()) {
        throw InvalidArgument(
            "dimension mismatch: family d=" + std::to_string(family.d()) + ", behavior d=" + std::to_string(b.d()));
    }
    std::vector<T> out;
    out.reserve(family.specs().size());
    int m = 0;
    for (const CorrelatorSpec &spec : family.specs()) {
        out.push_back(correlator_value(b, spec, m++));
    }
    return out;
}

template <class T>
T family_sum(const BasicBehavior<T> &b, const CorrelatorFamily &family) {
    T total(0);
    for (const T &x : family_values(b, family)) {
        total += x;
    }
    return total;
}

enum class Condition { AllPositive, AllNegative, Indefinite };

inline const char *to_string(Condition c) {
    switch (c) {
        case Condition::AllPositive:
            return "all-positive";
        case Condition::AllNegative:
            return "all-negative";
        case Condition::Indefinite:
            break;
    }
    return "indefinite";
}

struct ConditionVerdict {
    std::vector<double> per_m_values;
    Condition classification = Condition::Indefinite;
};

inline constexpr double kStrictTolerance = 1e-10;

/// Strict sign test: every value above tol, or every value below -tol.
inline ConditionVerdict condition_check(std::span<const double> values, double tol = kStrictTolerance) {
    if (values.empty()) {
        throw InvalidArgument("condition_check needs at least one correlator value");
    }
    ConditionVerdict verdict{{values.begin(), values.end()}, Condition::Indefinite};
    bool all_positive = true;
    bool all_negative = true;
    for (double v : values) {
        all_positive = all_positive && v > tol;
        all_negative = all_negative && v < -tol;
    }
    if (all_positive) {
        verdict.classification = Condition::AllPositive;
    } else if (all_negative) {
        verdict.classification = Condition::AllNegative;
    }
    return verdict;
}

/// Quantum value of every member of the k-th CGLMP family under the canonical settings:
/// (1/2d^3) [csc^2((1+4k)pi/4d) - csc^2((3+4k)pi/4d)].
inline double closed_form_correlator(int d, int k) {
    check_dimension(d);
    if (k < 0 || k > d / 2) {
        throw InvalidArgument(
            "invalid k=" + std::to_string(k) + " for d=" + std::to_string(d) + ": must lie in [0, floor(d/2)]");
    }
    auto csc2 = [](double x) {
        double s = std::sin(x);
        return 1.0 / (s * s);
    };
    double dd = d;
    double a = (1.0 + 4.0 * k) * std::numbers::pi / (4.0 * dd);
    double b = (3.0 + 4.0 * k) * std::numbers::pi / (4.0 * dd);
    return (csc2(a) - csc2(b)) / (2.0 * dd * dd * dd);
}

}  // namespace bell
