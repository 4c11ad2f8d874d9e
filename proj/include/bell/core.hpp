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

#include <array>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

namespace bell {

using Rational = boost::rational<std::int64_t>;

class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input: bad dimension, out-of-range outcome, mismatched sizes.
class InvalidArgument : public Error {
   public:
    using Error::Error;
};

/// The computation is well-posed but this library declines to run it.
class Refusal : public Error {
   public:
    using Error::Error;
};

/// A closed-form expression does not apply (or diverges) at the requested point.
class SingularFormula : public Refusal {
   public:
    using Refusal::Refusal;
};

/// Exhaustive enumeration would exceed the configured strategy cap.
class CapExceeded : public Refusal {
   public:
    using Refusal::Refusal;
};

template <class T>
inline constexpr bool is_exact_v = false;
template <>
inline constexpr bool is_exact_v<Rational> = true;

inline double to_double(double x) {
    return x;
}
inline double to_double(const Rational &x) {
    return static_cast<double>(x.numerator()) / static_cast<double>(x.denominator());
}

/// Representative of x modulo d in [0, d-1], also for negative x.
inline int nmod(std::int64_t x, std::int64_t d) {
    if (d <= 0) {
        throw InvalidArgument("invalid modulus " + std::to_string(d) + ": must be positive");
    }
    std::int64_t r = x % d;
    return static_cast<int>(r < 0 ? r + d : r);
}

/// Largest integer not above x.
inline std::int64_t floor_of(const Rational &x) {
    std::int64_t p = x.numerator();
    std::int64_t q = x.denominator();
    return p >= 0 ? p / q : -((-p + q - 1) / q);
}

/// x - d*floor(x/d), in [0, d).
inline Rational rational_mod(const Rational &x, std::int64_t d) {
    return x - Rational(d) * Rational(floor_of(x / Rational(d)));
}

inline bool is_integer(const Rational &x) {
    return x.denominator() == 1;
}

inline std::string to_string(const Rational &x) {
    if (x.denominator() == 1) {
        return std::to_string(x.numerator());
    }
    return std::to_string(x.numerator()) + "/" + std::to_string(x.denominator());
}

inline int check_dimension(int d) {
    if (d < 2) {
        throw InvalidArgument("invalid dimension d=" + std::to_string(d) + ": must be at least 2");
    }
    return d;
}

/// A measurement-setting pair (i, j): party 1 uses setting i, party 2 setting j, both in {1, 2}.
struct Pair {
    int first = 1;
    int second = 1;

    constexpr std::size_t index() const {
        return static_cast<std::size_t>((first - 1) * 2 + (second - 1));
    }
    std::string label() const {
        return std::to_string(first) + std::to_string(second);
    }
    friend constexpr bool operator==(Pair, Pair) = default;
};

/// Canonical order (1,1), (1,2), (2,1), (2,2); fixes table layout everywhere.
inline constexpr std::array<Pair, 4> kPairs{{{1, 1}, {1, 2}, {2, 1}, {2, 2}}};

inline Pair check_pair(Pair p) {
    if (p.first < 1 || p.first > 2 || p.second < 1 || p.second > 2) {
        throw InvalidArgument(
            "invalid setting pair (" + std::to_string(p.first) + "," + std::to_string(p.second) + ")");
    }
    return p;
}

inline Pair parse_pair(std::string_view text) {
    if (text.size() != 2 || (text[0] != '1' && text[0] != '2') || (text[1] != '1' && text[1] != '2')) {
        throw InvalidArgument("invalid setting pair '" + std::string(text) + "': expected 11, 12, 21 or 22");
    }
    return {text[0] - '0', text[1] - '0'};
}

/// Four d x d tables indexed [pair][v1][v2], party 1 outcome as row.
template <class T>
class PairTables {
   public:
    explicit PairTables(int d) : d_(check_dimension(d)), cells_(4 * static_cast<std::size_t>(d) * d, T(0)) {
    }

    int d() const {
        return d_;
    }

    T &operator()(Pair p, int v1, int v2) {
        return cells_[offset(p, v1, v2)];
    }
    const T &operator()(Pair p, int v1, int v2) const {
        return cells_[offset(p, v1, v2)];
    }

    T &at(Pair p, int v1, int v2) {
        check(p, v1, v2);
        return cells_[offset(p, v1, v2)];
    }
    const T &at(Pair p, int v1, int v2) const {
        check(p, v1, v2);
        return cells_[offset(p, v1, v2)];
    }

    std::span<const T> table(Pair p) const {
        std::size_t n = static_cast<std::size_t>(d_) * d_;
        return std::span<const T>(cells_).subspan(check_pair(p).index() * n, n);
    }
    std::span<const T> cells() const {
        return cells_;
    }
    std::span<T> cells() {
        return cells_;
    }

    friend bool operator==(const PairTables &, const PairTables &) = default;

   private:
    std::size_t offset(Pair p, int v1, int v2) const {
        return (p.index() * d_ + static_cast<std::size_t>(v1)) * d_ + static_cast<std::size_t>(v2);
    }
    void check(Pair p, int v1, int v2) const {
        check_pair(p);
        if (v1 < 0 || v1 >= d_ || v2 < 0 || v2 >= d_) {
            throw InvalidArgument(
                "outcome (" + std::to_string(v1) + "," + std::to_string(v2) + ") out of range for d=" +
                std::to_string(d_));
        }
    }

    int d_;
    std::vector<T> cells_;
};

inline constexpr double kProbabilityTolerance = 1e-9;

/// Joint outcome probabilities for the four setting pairs.
template <class T>
class BasicBehavior {
   public:
    explicit BasicBehavior(PairTables<T> tables) : tables_(std::move(tables)) {
        validate();
    }

    int d() const {
        return tables_.d();
    }
    const T &operator()(Pair p, int v1, int v2) const {
        return tables_(p, v1, v2);
    }
    const T &at(Pair p, int v1, int v2) const {
        return tables_.at(p, v1, v2);
    }
    std::span<const T> table(Pair p) const {
        return tables_.table(p);
    }
    const PairTables<T> &tables() const {
        return tables_;
    }

    friend bool operator==(const BasicBehavior &, const BasicBehavior &) = default;

   private:
    void validate() const {
        for (Pair p : kPairs) {
            T total(0);
            for (const T &x : tables_.table(p)) {
                if constexpr (is_exact_v<T>) {
                    if (x < T(0) || x > T(1)) {
                        throw InvalidArgument("behavior entry outside [0, 1] in table " + p.label());
                    }
                } else {
                    if (!(x >= -kProbabilityTolerance && x <= 1 + kProbabilityTolerance)) {
                        throw InvalidArgument("behavior entry outside [0, 1] in table " + p.label());
                    }
                }
                total += x;
            }
            if constexpr (is_exact_v<T>) {
                if (total != T(1)) {
                    throw InvalidArgument("behavior table " + p.label() + " does not sum to 1");
                }
            } else {
                if (std::abs(total - 1) > kProbabilityTolerance) {
                    throw InvalidArgument("behavior table " + p.label() + " does not sum to 1");
                }
            }
        }
    }

    PairTables<T> tables_;
};

/// Coefficients of a Bell expression; its value on a behavior is the entrywise dot product.
template <class T>
class BasicKernel {
   public:
    explicit BasicKernel(PairTables<T> coeffs) : coeffs_(std::move(coeffs)) {
        if constexpr (!is_exact_v<T>) {
            for (const T &x : coeffs_.cells()) {
                if (!std::isfinite(x)) {
                    throw InvalidArgument("kernel coefficients must be finite");
                }
            }
        }
    }

    int d() const {
        return coeffs_.d();
    }
    const T &operator()(Pair p, int v1, int v2) const {
        return coeffs_(p, v1, v2);
    }
    const T &at(Pair p, int v1, int v2) const {
        return coeffs_.at(p, v1, v2);
    }
    std::span<const T> table(Pair p) const {
        return coeffs_.table(p);
    }
    const PairTables<T> &tables() const {
        return coeffs_;
    }

    friend bool operator==(const BasicKernel &, const BasicKernel &) = default;

   private:
    PairTables<T> coeffs_;
};

using Behavior = BasicBehavior<double>;
using ExactBehavior = BasicBehavior<Rational>;
using Kernel = BasicKernel<double>;
using ExactKernel = BasicKernel<Rational>;

/// Local phase parameters n[party][setting] of the Fourier-type measurement bases.
class MeasurementSettings {
   public:
    MeasurementSettings(std::array<Rational, 2> party1, std::array<Rational, 2> party2)
        : n_{party1, party2} {
    }

    /// (n1(1), n2(1), n1(2), n2(2)) = (0, 1/4, 1/2, -1/4).
    static MeasurementSettings canonical() {
        return MeasurementSettings({Rational(0), Rational(1, 2)}, {Rational(1, 4), Rational(-1, 4)});
    }

    const Rational &phase(int party, int setting) const {
        if (party < 1 || party > 2 || setting < 1 || setting > 2) {
            throw InvalidArgument("invalid party/setting index");
        }
        return n_[party - 1][setting - 1];
    }

    /// n1(i) + n2(j) for the pair (i, j).
    Rational pair_offset(Pair p) const {
        return phase(1, p.first) + phase(2, p.second);
    }

    friend bool operator==(const MeasurementSettings &, const MeasurementSettings &) = default;

   private:
    std::array<std::array<Rational, 2>, 2> n_;
};

/// Predetermined outcomes; member order gives the lexicographic order (v1(1), v1(2), v2(1), v2(2)).
struct DeterministicStrategy {
    std::array<int, 2> v1{};
    std::array<int, 2> v2{};

    auto operator<=>(const DeterministicStrategy &) const = default;

    std::array<int, 4> tuple() const {
        return {v1[0], v1[1], v2[0], v2[1]};
    }

    /// Position in lexicographic enumeration order.
    std::uint64_t index(int d) const {
        std::uint64_t n = static_cast<std::uint64_t>(d);
        return ((static_cast<std::uint64_t>(v1[0]) * n + v1[1]) * n + v2[0]) * n + v2[1];
    }

    static DeterministicStrategy from_index(std::uint64_t index, int d) {
        std::uint64_t n = static_cast<std::uint64_t>(d);
        DeterministicStrategy s;
        s.v2[1] = static_cast<int>(index % n);
        index /= n;
        s.v2[0] = static_cast<int>(index % n);
        index /= n;
        s.v1[1] = static_cast<int>(index % n);
        index /= n;
        s.v1[0] = static_cast<int>(index);
        return s;
    }
};

inline void check_strategy(const DeterministicStrategy &s, int d) {
    for (int v : s.tuple()) {
        if (v < 0 || v >= d) {
            throw InvalidArgument(
                "strategy outcome " + std::to_string(v) + " out of range for d=" + std::to_string(d));
        }
    }
}

inline std::uint64_t strategy_count(int d) {
    std::uint64_t n = static_cast<std::uint64_t>(d);
    return n * n * n * n;
}

/// One correlator C_m = P(v1 = sigma*m + alpha, v2 = m) - P(v1 = sigma*m + beta, v2 = m).
/// With dual set, the roles of the parties are swapped (party 1 outcome is m).
struct CorrelatorSpec {
    Pair pair{1, 1};
    int sigma = 1;
    int alpha = 0;
    int beta = 1;
    bool dual = false;

    friend bool operator==(const CorrelatorSpec &, const CorrelatorSpec &) = default;
};

inline void check_spec(const CorrelatorSpec &spec) {
    check_pair(spec.pair);
    if (spec.sigma != 1 && spec.sigma != -1) {
        throw InvalidArgument("correlator sigma must be +1 or -1, got " + std::to_string(spec.sigma));
    }
}

template <class T = double>
BasicBehavior<T> strategy_behavior(const DeterministicStrategy &s, int d) {
    check_strategy(s, d);
    PairTables<T> tables(d);
    for (Pair p : kPairs) {
        tables(p, s.v1[p.first - 1], s.v2[p.second - 1]) = T(1);
    }
    return BasicBehavior<T>(std::move(tables));
}

template <class T = double>
BasicBehavior<T> uniform_behavior(int d) {
    PairTables<T> tables(d);
    T cell = T(1) / T(static_cast<std::int64_t>(d) * d);
    for (T &x : tables.cells()) {
        x = cell;
    }
    return BasicBehavior<T>(std::move(tables));
}

/// Convex combination (1 - weight_b) * a + weight_b * b.
template <class T>
BasicBehavior<T> mix(const BasicBehavior<T> &a, const BasicBehavior<T> &b, T weight_b) {
    if (a.d() != b.d()) {
        throw InvalidArgument("cannot mix behaviors of different dimension");
    }
    if (weight_b < T(0) || weight_b > T(1)) {
        throw InvalidArgument("mixing weight must lie in [0, 1]");
    }
    PairTables<T> out(a.d());
    auto x = a.tables().cells();
    auto y = b.tables().cells();
    auto z = out.cells();
    T weight_a = T(1) - weight_b;
    for (std::size_t i = 0; i < z.size(); ++i) {
        z[i] = weight_a * x[i] + weight_b * y[i];
    }
    return BasicBehavior<T>(std::move(out));
}

template <class T>
BasicKernel<T> scale(const BasicKernel<T> &k, T factor) {
    PairTables<T> out = k.tables();
    for (T &x : out.cells()) {
        x *= factor;
    }
    return BasicKernel<T>(std::move(out));
}

inline Kernel to_double(const ExactKernel &k) {
    PairTables<double> out(k.d());
    auto src = k.tables().cells();
    auto dst = out.cells();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] = to_double(src[i]);
    }
    return Kernel(std::move(out));
}

inline Behavior to_double(const ExactBehavior &b) {
    PairTables<double> out(b.d());
    auto src = b.tables().cells();
    auto dst = out.cells();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] = to_double(src[i]);
    }
    return Behavior(std::move(out));
}

// Per-pair partial sums are combined as (s11 + s12) + (s21 + s22), the same association
// strategy_kernel_value uses, so deterministic behaviors evaluate bit-identically.
template <class T>
T evaluate_kernel(const BasicKernel<T> &k, const BasicBehavior<T> &b) {
    if (k.d() != b.d()) {
        throw InvalidArgument(
            "dimension mismatch: kernel d=" + std::to_string(k.d()) + ", behavior d=" + std::to_string(b.d()));
    }
    std::array<T, 4> partial{T(0), T(0), T(0), T(0)};
    for (Pair p : kPairs) {
        auto coeffs = k.table(p);
        auto probs = b.table(p);
        T sum(0);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            sum += coeffs[i] * probs[i];
        }
        partial[p.index()] = sum;
    }
    return (partial[0] + partial[1]) + (partial[2] + partial[3]);
}

template <class T>
T strategy_kernel_value(const BasicKernel<T> &k, const DeterministicStrategy &s) {
    check_strategy(s, k.d());
    const T &k11 = k({1, 1}, s.v1[0], s.v2[0]);
    const T &k12 = k({1, 2}, s.v1[0], s.v2[1]);
    const T &k21 = k({2, 1}, s.v1[1], s.v2[0]);
    const T &k22 = k({2, 2}, s.v1[1], s.v2[1]);
    return (k11 + k12) + (k21 + k22);
}

}  // namespace bell
