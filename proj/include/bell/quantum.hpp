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
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bell/core.hpp"
#include "bell/correlators.hpp"

namespace bell {

using Amplitude = std::complex<double>;

/// An orthonormal basis of C^d; vector(l) is the eigenvector for outcome l.
class MeasurementBasis {
   public:
    /// vector(l)[m] = exp(2 pi i m (l + n) / d) / sqrt(d).
    static MeasurementBasis fourier(int d, const Rational &n) {
        check_dimension(d);
        MeasurementBasis basis(d);
        basis.phase_ = n;
        double norm = 1.0 / std::sqrt(static_cast<double>(d));
        for (int l = 0; l < d; ++l) {
            for (int m = 0; m < d; ++m) {
                // Reduce the phase exactly before going to floating point.
                Rational turns = rational_mod(Rational(m) * (Rational(l) + n), d);
                double angle = 2.0 * std::numbers::pi * to_double(turns) / d;
                basis.vectors_[static_cast<std::size_t>(l * d + m)] = std::polar(norm, angle);
            }
        }
        return basis;
    }

    static MeasurementBasis pauli_z() {
        MeasurementBasis basis(2);
        basis.vectors_ = {1.0, 0.0, 0.0, 1.0};
        return basis;
    }

    /// |v>_x = (|0> + (-1)^v |1>) / sqrt(2).
    static MeasurementBasis pauli_x() {
        MeasurementBasis basis(2);
        double h = std::numbers::sqrt2 / 2;
        basis.vectors_ = {h, h, h, -h};
        return basis;
    }

    int d() const {
        return d_;
    }
    const std::optional<Rational> &phase() const {
        return phase_;
    }
    std::span<const Amplitude> vector(int l) const {
        return std::span<const Amplitude>(vectors_).subspan(static_cast<std::size_t>(l * d_), d_);
    }

    /// max over (l, l') of |<l|l'> - delta(l, l')|.
    double orthonormality_error() const {
        double worst = 0;
        for (int a = 0; a < d_; ++a) {
            for (int b = 0; b < d_; ++b) {
                Amplitude dot = 0;
                auto u = vector(a);
                auto w = vector(b);
                for (int m = 0; m < d_; ++m) {
                    dot += std::conj(u[m]) * w[m];
                }
                worst = std::max(worst, std::abs(dot - Amplitude(a == b ? 1.0 : 0.0)));
            }
        }
        return worst;
    }

   private:
    explicit MeasurementBasis(int d) : d_(d), vectors_(static_cast<std::size_t>(d) * d) {
    }

    int d_;
    std::optional<Rational> phase_;
    std::vector<Amplitude> vectors_;
};

/// Pure state on C^d (x) C^d, amplitudes indexed a * d + b.
class TwoPartyState {
   public:
    TwoPartyState(int d, std::vector<Amplitude> amplitudes) : d_(d) {
        if (amplitudes.size() != static_cast<std::size_t>(d) * d) {
            throw InvalidArgument("state needs d^2 amplitudes");
        }
        for (std::size_t i = 0; i < amplitudes.size(); ++i) {
            if (amplitudes[i] != Amplitude(0)) {
                support_.push_back({static_cast<int>(i) / d, static_cast<int>(i) % d, amplitudes[i]});
            }
        }
        amplitudes_ = std::move(amplitudes);
    }

    int d() const {
        return d_;
    }
    std::span<const Amplitude> amplitudes() const {
        return amplitudes_;
    }

    double norm() const {
        double total = 0;
        for (const Amplitude &a : amplitudes_) {
            total += std::norm(a);
        }
        return std::sqrt(total);
    }

    /// |(<u| (x) <w|) psi|^2.
    double probability(std::span<const Amplitude> u, std::span<const Amplitude> w) const {
        Amplitude overlap = 0;
        for (const Term &t : support_) {
            overlap += std::conj(u[t.a]) * std::conj(w[t.b]) * t.amplitude;
        }
        return std::norm(overlap);
    }

   private:
    struct Term {
        int a;
        int b;
        Amplitude amplitude;
    };

    int d_;
    std::vector<Amplitude> amplitudes_;
    std::vector<Term> support_;
};

/// (1/sqrt(d)) sum_v |v>|v>.
inline TwoPartyState bell_state(int d) {
    check_dimension(d);
    std::vector<Amplitude> amps(static_cast<std::size_t>(d) * d, 0.0);
    double a = 1.0 / std::sqrt(static_cast<double>(d));
    for (int v = 0; v < d; ++v) {
        amps[static_cast<std::size_t>(v * d + v)] = a;
    }
    return TwoPartyState(d, std::move(amps));
}

/// Joint distributions of a pure state for two local bases per party.
inline Behavior measure(const TwoPartyState &state, const std::array<MeasurementBasis, 2> &party1,
                        const std::array<MeasurementBasis, 2> &party2) {
    int d = state.d();
    for (const auto &b : party1) {
        if (b.d() != d) throw InvalidArgument("basis dimension does not match state");
    }
    for (const auto &b : party2) {
        if (b.d() != d) throw InvalidArgument("basis dimension does not match state");
    }
    PairTables<double> tables(d);
    for (Pair p : kPairs) {
        const MeasurementBasis &u = party1[p.first - 1];
        const MeasurementBasis &w = party2[p.second - 1];
        for (int v1 = 0; v1 < d; ++v1) {
            for (int v2 = 0; v2 < d; ++v2) {
                tables(p, v1, v2) = state.probability(u.vector(v1), w.vector(v2));
            }
        }
    }
    return Behavior(std::move(tables));
}

/// Bell-state behavior computed by explicit inner products in the Fourier bases.
inline Behavior oracle_behavior(int d, const MeasurementSettings &settings = MeasurementSettings::canonical()) {
    check_dimension(d);
    std::array<MeasurementBasis, 2> party1{MeasurementBasis::fourier(d, settings.phase(1, 1)),
                                           MeasurementBasis::fourier(d, settings.phase(1, 2))};
    std::array<MeasurementBasis, 2> party2{MeasurementBasis::fourier(d, settings.phase(2, 1)),
                                           MeasurementBasis::fourier(d, settings.phase(2, 2))};
    return measure(bell_state(d), party1, party2);
}

/// 1 / (2 d^3 sin^2(pi (v1 + v2 + n1 + n2) / d)).
///
/// Exact only when sin^2(pi (n1 + n2)) = 1/2, i.e. 4 (n1 + n2) is an odd integer; this covers the
/// canonical settings. Any other offset (including those where the sine vanishes) is refused.
inline double closed_form_probability(int d, const MeasurementSettings &settings, Pair pair, int v1, int v2) {
    check_dimension(d);
    check_pair(pair);
    if (v1 < 0 || v1 >= d || v2 < 0 || v2 >= d) {
        throw InvalidArgument("outcome out of range for d=" + std::to_string(d));
    }
    Rational offset = settings.pair_offset(pair);
    Rational quarter = offset * Rational(4);
    if (!is_integer(quarter) || quarter.numerator() % 2 == 0) {
        throw SingularFormula("closed-form probability does not apply for n1+n2=" + to_string(offset) +
                              " in pair " + pair.label() + "; use oracle_behavior");
    }
    Rational x = rational_mod(Rational(v1 + v2) + offset, d);
    double s = std::sin(std::numbers::pi * to_double(x) / d);
    double dd = d;
    return 1.0 / (2.0 * dd * dd * dd * s * s);
}

inline Behavior closed_form_behavior(int d, const MeasurementSettings &settings = MeasurementSettings::canonical()) {
    check_dimension(d);
    PairTables<double> tables(d);
    for (Pair p : kPairs) {
        for (int v1 = 0; v1 < d; ++v1) {
            for (int v2 = 0; v2 < d; ++v2) {
                tables(p, v1, v2) = closed_form_probability(d, settings, p, v1, v2);
            }
        }
    }
    return Behavior(std::move(tables));
}

/// Bell state mixed with white noise: (1 - p) * oracle + p * uniform.
inline Behavior noisy_behavior(int d, const MeasurementSettings &settings, double p_noise) {
    if (!(p_noise >= 0.0 && p_noise <= 1.0)) {
        throw InvalidArgument("p_noise must lie in [0, 1], got " + std::to_string(p_noise));
    }
    return mix(oracle_behavior(d, settings), uniform_behavior<double>(d), p_noise);
}

// Two-qubit demonstration. Setting 1 is sigma_z and setting 2 is sigma_x for both parties, so pair
// (1,1) is (sigma_z, sigma_z) and pair (2,2) is (sigma_x, sigma_x).

/// sin(xi)|00> + cos(xi)|11>.
inline TwoPartyState qubit_state(double xi) {
    return TwoPartyState(2, {std::sin(xi), 0.0, 0.0, std::cos(xi)});
}

/// Behavior of the pure state, or of its dephased mixture sin^2(xi)|00><00| + cos^2(xi)|11><11|.
inline Behavior qubit_demo_behavior(double xi, bool dephased) {
    std::array<MeasurementBasis, 2> bases{MeasurementBasis::pauli_z(), MeasurementBasis::pauli_x()};
    if (!dephased) {
        return measure(qubit_state(xi), bases, bases);
    }
    double w00 = std::sin(xi) * std::sin(xi);
    Behavior b00 = measure(TwoPartyState(2, {1.0, 0.0, 0.0, 0.0}), bases, bases);
    Behavior b11 = measure(TwoPartyState(2, {0.0, 0.0, 0.0, 1.0}), bases, bases);
    return mix(b11, b00, w00);
}

struct QubitDemoResult {
    double c_pure = 0;
    double c_mixed = 0;
};

/// C^(x) + C^(z) for the pure state and for its dephased mixture.
inline QubitDemoResult qubit_pure_vs_mixed_demo(double xi) {
    if (!(xi >= 0.0 && xi <= std::numbers::pi / 2)) {
        throw InvalidArgument("xi must lie in [0, pi/2]");
    }
    auto total = [](const Behavior &b) {
        return family_sum(b, CorrelatorFamily::qubit({2, 2})) + family_sum(b, CorrelatorFamily::qubit({1, 1}));
    };
    return {total(qubit_demo_behavior(xi, false)), total(qubit_demo_behavior(xi, true))};
}

}  // namespace bell
