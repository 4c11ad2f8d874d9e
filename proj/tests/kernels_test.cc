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

#include "bell/kernels.hpp"

#include <numeric>

#include "bell/quantum.hpp"
#include "gtest/gtest.h"

using namespace bell;

TEST(kernels, cd_d2_is_chsh) {
    ExactKernel k = build_cd_kernel<Rational>(2);
    std::array<std::array<int, 4>, 4> expected{{
        {1, -1, -1, 1},   // (1,1)
        {1, -1, -1, 1},   // (1,2)
        {-1, 1, 1, -1},   // (2,1)
        {1, -1, -1, 1},   // (2,2)
    }};
    for (Pair p : kPairs) {
        auto t = k.table(p);
        for (std::size_t i = 0; i < 4; ++i) {
            ASSERT_EQ(t[i], Rational(expected[p.index()][i])) << p.label() << " " << i;
        }
    }
}

TEST(kernels, cd_cells_by_residue) {
    int d = 5;
    ExactKernel k = build_cd_kernel<Rational>(d);
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            int s = nmod(a + b, d);
            Rational diag = s == 0 ? Rational(1) : s == d - 1 ? Rational(-1) : Rational(0);
            Rational c12 = s == 0 ? Rational(1) : s == 1 ? Rational(-1) : Rational(0);
            Rational c21 = s == d - 1 ? Rational(1) : s == 0 ? Rational(-1) : Rational(0);
            ASSERT_EQ(k({1, 1}, a, b), diag);
            ASSERT_EQ(k({2, 2}, a, b), diag);
            ASSERT_EQ(k({1, 2}, a, b), c12);
            ASSERT_EQ(k({2, 1}, a, b), c21);
        }
    }
}

TEST(kernels, cd_quantum_values) {
    ASSERT_NEAR(cd_quantum_closed_form(2), 2.82842712474619, 1e-13);
    ASSERT_NEAR(cd_quantum_closed_form(3), 2.87293405117234, 1e-13);
    ASSERT_NEAR(cd_quantum_closed_form(4), 2.87928919503058, 1e-13);
    ASSERT_NEAR(cd_quantum_closed_form(1000), 2.88202477915917, 1e-11);
    for (int d = 2; d <= 12; ++d) {
        ASSERT_NEAR(evaluate_kernel(build_cd_kernel(d), oracle_behavior(d)), cd_quantum_closed_form(d), 1e-12);
    }
}

TEST(kernels, cd_increasing_with_limit) {
    double prev = 0;
    for (int d = 2; d <= 100; ++d) {
        double v = cd_quantum_closed_form(d);
        ASSERT_GT(v, prev) << d;
        prev = v;
    }
    double limit = std::pow(16 / (3 * std::numbers::pi), 2);
    ASSERT_NEAR(limit, 2.88202477915983, 1e-13);
    ASSERT_NEAR(cd_quantum_closed_form(1000), limit, 1e-8);
}

TEST(kernels, noise_threshold_values) {
    ASSERT_NEAR(noise_threshold(2), 0.292893218813452, 1e-13);
    ASSERT_NEAR(noise_threshold(3), 0.303847577293368, 1e-13);
    ASSERT_NEAR(noise_threshold(200), 0.306043440449382, 1e-12);
    ASSERT_NEAR(1 - 2 / std::pow(16 / (3 * std::numbers::pi), 2), 0.306043440548404, 1e-13);
}

TEST(kernels, cglmp_ranges) {
    ASSERT_EQ(cglmp_k_max(2, CglmpRange::Conventional), 0);
    ASSERT_EQ(cglmp_k_max(2, CglmpRange::Full), 1);
    ASSERT_EQ(cglmp_k_max(5, CglmpRange::Conventional), 2);
    ASSERT_EQ(cglmp_k_max(6, CglmpRange::Conventional), 2);
    ASSERT_EQ(cglmp_k_max(6, CglmpRange::Full), 3);
    ASSERT_THROW(build_cglmp_kernel<double>(4, 3), InvalidArgument);
    ASSERT_EQ(cglmp_weight<Rational>(5, 1), Rational(1, 2));
    ASSERT_EQ(cglmp_weight<Rational>(4, 2), Rational(-1, 3));
}

TEST(kernels, cglmp_k0_is_cd) {
    for (int d = 2; d <= 6; ++d) {
        ASSERT_EQ(build_cglmp_kernel<Rational>(d, 0), build_cd_kernel<Rational>(d));
    }
}

TEST(kernels, cglmp_conventional_quantum_values) {
    std::array<double, 4> expected{2.896243218, 2.910544808, 2.920203606, 2.927160942};
    for (int d = 4; d <= 7; ++d) {
        Kernel k = build_named_kernel(KernelKind::Cglmp, d);
        double q = evaluate_kernel(k, oracle_behavior(d));
        ASSERT_NEAR(q, expected[d - 4], 1e-9) << d;
        ASSERT_NEAR(q, *named_kernel_closed_form(KernelKind::Cglmp, d), 1e-12);
    }
    ASSERT_NEAR(evaluate_kernel(build_named_kernel(KernelKind::CglmpFullRange, 2), oracle_behavior(2)),
                4 * std::sqrt(2.0), 1e-12);
}

TEST(kernels, slk_coefficients) {
    SlkParams p = SlkParams::canonical();
    ASSERT_NEAR(slk_coefficient(2, p, {1, 1}, 0), 0.353553390593274, 1e-14);
    ASSERT_NEAR(slk_coefficient(2, p, {1, 1}, 1), -0.353553390593274, 1e-14);
    ASSERT_THROW(slk_coefficient(2, p, {1, 1}, 2), InvalidArgument);
    for (int d = 2; d <= 12; ++d) {
        for (Pair pair : kPairs) {
            std::vector<double> f = slk_pair_coefficients(d, p, pair);
            ASSERT_NEAR(std::accumulate(f.begin(), f.end(), 0.0), 0.0, 1e-12);
        }
    }
}

TEST(kernels, slk_singular_parameters) {
    SlkParams p = SlkParams::canonical();
    p.nu = Rational(0);
    ASSERT_THROW(slk_coefficient(3, p, {1, 1}, 0), SingularFormula);
    ASSERT_THROW(build_slk_kernel(3, p), SingularFormula);
}

TEST(kernels, slk_quantum_value) {
    Kernel k = build_slk_kernel(3);
    for (int d = 2; d <= 10; ++d) {
        Kernel kd = build_slk_kernel(d);
        Behavior b = oracle_behavior(d);
        ASSERT_NEAR(evaluate_kernel(kd, b), d - 1, 1e-10) << d;
        for (Pair pair : kPairs) {
            double s = 0;
            for (std::size_t i = 0; i < kd.table(pair).size(); ++i) s += kd.table(pair)[i] * b.table(pair)[i];
            ASSERT_NEAR(s, (d - 1) / 4.0, 1e-10) << d << " " << pair.label();
        }
    }
}

TEST(kernels, slk_shifted_preset_moves_one_pair) {
    int d = 3;
    Kernel a = build_slk_kernel(d, SlkParams::canonical());
    Kernel b = build_slk_kernel(d, SlkParams::shifted12());
    ASSERT_TRUE(std::ranges::equal(a.table({1, 1}), b.table({1, 1})));
    ASSERT_FALSE(std::ranges::equal(a.table({1, 2}), b.table({1, 2})));
    Behavior q = oracle_behavior(d);
    double s = 0;
    for (std::size_t i = 0; i < b.table({1, 2}).size(); ++i) s += b.table({1, 2})[i] * q.table({1, 2})[i];
    ASSERT_NEAR(s, -0.394338, 1e-6);
}

TEST(kernels, slk_cells_constant_along_sum_residue) {
    int d = 4;
    Kernel k = build_slk_kernel(d);
    for (Pair p : kPairs) {
        for (int a = 0; a < d; ++a) {
            for (int b = 0; b < d; ++b) {
                ASSERT_EQ(k(p, a, b), k(p, nmod(a + 1, d), nmod(b - 1, d)));
            }
        }
    }
}

TEST(kernels, slk_lhv_formula_values) {
    ASSERT_NEAR(slk_lhv_formula(2), 0.70710678, 1e-8);
    ASSERT_NEAR(slk_lhv_formula(3), 1.54903811, 1e-8);
    ASSERT_NEAR(slk_lhv_formula(4), 2.39635318, 1e-8);
    ASSERT_NEAR(slk_lhv_formula(500) / 499, 0.8485234, 1e-6);
}

TEST(kernels, decompose_zero_sum) {
    std::vector<double> f{0.5, -0.2, 0.1, -0.4};
    SignedDecomposition dec = decompose_zero_sum(f);
    for (const auto &t : dec.terms) ASSERT_GT(t.weight, 0);
    std::vector<double> back = dec.reconstruct(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) ASSERT_NEAR(back[i], f[i], 1e-15);
    ASSERT_EQ(dec.terms.front(), (DecompositionTerm{0, 3, 0.4}));
    std::vector<double> bad{0.5, -0.2};
    ASSERT_THROW(decompose_zero_sum(bad), NotDecomposable);
    ASSERT_TRUE(decompose_zero_sum(std::vector<double>{0, 0, 0}).terms.empty());
}

TEST(kernels, slk_rebuilt_from_correlator_terms) {
    for (int d = 2; d <= 7; ++d) {
        PairTables<double> t(d);
        for (const auto &[w, family] : slk_correlator_terms(d)) add_family(t, family, w);
        Kernel direct = build_slk_kernel(d);
        for (std::size_t i = 0; i < t.cells().size(); ++i) {
            ASSERT_NEAR(t.cells()[i], direct.tables().cells()[i], 1e-14);
        }
    }
}

TEST(kernels, labels) {
    for (KernelKind k : kKernelKinds) ASSERT_EQ(parse_kernel_kind(kernel_label(k)), k);
    ASSERT_THROW(parse_kernel_kind("chsh"), InvalidArgument);
    ASSERT_EQ(parse_kernel_kind("cglmp-paper-range"), KernelKind::CglmpFullRange);
    ASSERT_FALSE(build_named_exact_kernel(KernelKind::Slk, 3).has_value());
    ASSERT_TRUE(build_named_exact_kernel(KernelKind::CglmpFullRange, 3).has_value());
    KernelOptions o;
    o.slk = SlkParams::shifted12();
    ASSERT_FALSE(named_kernel_closed_form(KernelKind::Slk, 3, o).has_value());
    ASSERT_EQ(*named_kernel_closed_form(KernelKind::Slk, 3), 2.0);
}
