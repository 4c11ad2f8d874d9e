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

#include "bell/quantum.hpp"

#include <random>

#include "gtest/gtest.h"

using namespace bell;

TEST(quantum, fourier_basis_orthonormal) {
    for (int d = 2; d <= 12; ++d) {
        ASSERT_LT(MeasurementBasis::fourier(d, Rational(1, 4)).orthonormality_error(), 1e-13) << d;
        ASSERT_LT(MeasurementBasis::fourier(d, Rational(-1, 4)).orthonormality_error(), 1e-13) << d;
    }
    ASSERT_LT(MeasurementBasis::pauli_x().orthonormality_error(), 1e-15);
    ASSERT_LT(MeasurementBasis::pauli_z().orthonormality_error(), 1e-15);
}

TEST(quantum, bell_state_normalized) {
    for (int d = 2; d <= 20; ++d) {
        ASSERT_NEAR(bell_state(d).norm(), 1.0, 1e-14);
    }
    ASSERT_THROW(bell_state(1), InvalidArgument);
}

TEST(quantum, oracle_matches_closed_form) {
    for (int d = 2; d <= 12; ++d) {
        Behavior o = oracle_behavior(d);
        Behavior c = closed_form_behavior(d);
        for (std::size_t i = 0; i < o.tables().cells().size(); ++i) {
            ASSERT_NEAR(o.tables().cells()[i], c.tables().cells()[i], 1e-13) << "d=" << d;
        }
    }
}

TEST(quantum, frozen_probability) {
    // (2 + sqrt 2) / 8.
    ASSERT_NEAR(oracle_behavior(2)({1, 1}, 0, 0), 0.426776695296637, 1e-14);
    ASSERT_NEAR(closed_form_probability(2, MeasurementSettings::canonical(), {1, 1}, 0, 0), 0.426776695296637,
                1e-14);
}

TEST(quantum, marginals_uniform) {
    for (int d : {2, 3, 7}) {
        Behavior b = oracle_behavior(d);
        for (Pair p : kPairs) {
            for (int v = 0; v < d; ++v) {
                double row = 0;
                double col = 0;
                for (int w = 0; w < d; ++w) {
                    row += b(p, v, w);
                    col += b(p, w, v);
                }
                ASSERT_NEAR(row, 1.0 / d, 1e-13);
                ASSERT_NEAR(col, 1.0 / d, 1e-13);
            }
        }
    }
}

TEST(quantum, closed_form_refuses_other_offsets) {
    MeasurementSettings zero({Rational(0), Rational(0)}, {Rational(0), Rational(0)});
    ASSERT_THROW(closed_form_probability(3, zero, {1, 1}, 0, 0), SingularFormula);
    MeasurementSettings eighth({Rational(1, 8), Rational(0)}, {Rational(0), Rational(1, 4)});
    ASSERT_THROW(closed_form_probability(3, eighth, {1, 1}, 0, 0), SingularFormula);
    ASSERT_NO_THROW(closed_form_probability(3, eighth, {2, 2}, 0, 0));
    ASSERT_THROW(closed_form_probability(3, MeasurementSettings::canonical(), {1, 1}, 3, 0), InvalidArgument);
    // The oracle still works where the closed form does not.
    ASSERT_NO_THROW(oracle_behavior(3, zero));
}

TEST(quantum, identical_bases_perfectly_anticorrelated_sum) {
    // With n1 + n2 = 0 the Bell state gives v1 + v2 = 0 (mod d) with certainty.
    MeasurementSettings zero({Rational(0), Rational(0)}, {Rational(0), Rational(0)});
    Behavior b = oracle_behavior(5, zero);
    for (int v = 0; v < 5; ++v) {
        ASSERT_NEAR(b({1, 1}, v, nmod(-v, 5)), 0.2, 1e-13);
    }
}

TEST(quantum, noisy_behavior_affine) {
    Behavior pure = oracle_behavior(4);
    Behavior noisy = noisy_behavior(4, MeasurementSettings::canonical(), 0.3);
    for (std::size_t i = 0; i < pure.tables().cells().size(); ++i) {
        ASSERT_NEAR(noisy.tables().cells()[i], 0.7 * pure.tables().cells()[i] + 0.3 / 16, 1e-15);
    }
    ASSERT_THROW(noisy_behavior(4, MeasurementSettings::canonical(), 1.5), InvalidArgument);
    ASSERT_THROW(noisy_behavior(4, MeasurementSettings::canonical(), -0.1), InvalidArgument);
}

TEST(quantum, qubit_demo_pure_follows_sine_law) {
    for (double xi : {0.0, 0.1, 0.4, 0.7853981633974483, 1.2, 1.5707963267948966}) {
        QubitDemoResult r = qubit_pure_vs_mixed_demo(xi);
        ASSERT_NEAR(r.c_pure, 1 + std::sin(2 * xi), 1e-12) << xi;
        ASSERT_NEAR(r.c_mixed, 1.0, 1e-12) << xi;
    }
    ASSERT_THROW(qubit_pure_vs_mixed_demo(-0.1), InvalidArgument);
    ASSERT_THROW(qubit_pure_vs_mixed_demo(2.0), InvalidArgument);
}

TEST(quantum, qubit_product_behaviors_have_opposite_signs) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 1000; ++trial) {
        // Independent local distributions per setting.
        std::array<double, 2> p1{u(rng), u(rng)};
        std::array<double, 2> p2{u(rng), u(rng)};
        PairTables<double> t(2);
        for (Pair p : kPairs) {
            double a = p1[p.first - 1];
            double b = p2[p.second - 1];
            t(p, 0, 0) = a * b;
            t(p, 0, 1) = a * (1 - b);
            t(p, 1, 0) = (1 - a) * b;
            t(p, 1, 1) = (1 - a) * (1 - b);
        }
        Behavior beh(t);
        for (Pair p : kPairs) {
            std::vector<double> c = family_values(beh, CorrelatorFamily::qubit(p));
            ASSERT_LE(c[0] * c[1], 1e-15);
        }
    }
}
