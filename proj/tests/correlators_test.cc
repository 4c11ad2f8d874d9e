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

#include "bell/correlators.hpp"

#include <random>

#include "bell/quantum.hpp"
#include "gtest/gtest.h"

using namespace bell;

namespace {

Behavior random_product_behavior(int d, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(0.01, 1);
    std::array<std::vector<double>, 2> p1;
    std::array<std::vector<double>, 2> p2;
    for (auto *side : {&p1, &p2}) {
        for (auto &dist : *side) {
            double total = 0;
            for (int v = 0; v < d; ++v) {
                dist.push_back(u(rng));
                total += dist.back();
            }
            for (double &x : dist) x /= total;
        }
    }
    PairTables<double> t(d);
    for (Pair p : kPairs) {
        for (int a = 0; a < d; ++a) {
            for (int b = 0; b < d; ++b) {
                t(p, a, b) = p1[p.first - 1][a] * p2[p.second - 1][b];
            }
        }
    }
    return Behavior(t);
}

}  // namespace

TEST(correlators, cells_follow_sign_and_offset) {
    CorrelatorSpec spec{{1, 2}, -1, 0, 1, false};
    ASSERT_EQ(correlator_cell(spec, 1, 0, 3), (std::pair{2, 1}));
    ASSERT_EQ(correlator_cell(spec, 1, 1, 3), (std::pair{0, 1}));
    spec.dual = true;
    ASSERT_EQ(correlator_cell(spec, 1, 1, 3), (std::pair{1, 0}));
    spec.sigma = 1;
    spec.dual = false;
    ASSERT_EQ(correlator_cell(spec, 2, 2, 3), (std::pair{1, 2}));
}

TEST(correlators, value_on_deterministic_behavior) {
    // v1 = (1, 0), v2 = (2, 0) at d = 3: pair (1,1) has v1 + v2 = 0.
    Behavior b = strategy_behavior({{1, 0}, {2, 0}}, 3);
    std::vector<double> c = family_values(b, CorrelatorFamily::cd(3, {1, 1}));
    ASSERT_EQ(c, (std::vector<double>{0, 0, 1}));
    ASSERT_THROW(correlator_value(b, CorrelatorSpec{{1, 1}, 2, 0, 1, false}, 0), InvalidArgument);
    ASSERT_THROW(correlator_value(b, CorrelatorSpec{}, 3), InvalidArgument);
}

TEST(correlators, cd_equals_cglmp_zero) {
    for (int d = 2; d <= 7; ++d) {
        for (Pair p : kPairs) {
            auto a = CorrelatorFamily::cd(d, p).specs();
            auto b = CorrelatorFamily::cglmp(d, 0, p).specs();
            ASSERT_TRUE(std::equal(a.begin(), a.end(), b.begin(), b.end()));
        }
    }
}

TEST(correlators, cglmp_index_range) {
    ASSERT_NO_THROW(CorrelatorFamily::cglmp(5, 2, {1, 1}));
    ASSERT_THROW(CorrelatorFamily::cglmp(5, 3, {1, 1}), InvalidArgument);
    ASSERT_THROW(CorrelatorFamily::cglmp(5, -1, {1, 1}), InvalidArgument);
    ASSERT_THROW(closed_form_correlator(4, 3), InvalidArgument);
}

TEST(correlators, quantum_families_positive) {
    for (int d = 2; d <= 8; ++d) {
        Behavior b = oracle_behavior(d);
        for (Pair p : kPairs) {
            ConditionVerdict v = condition_check(family_values(b, CorrelatorFamily::cd(d, p)));
            ASSERT_EQ(v.classification, Condition::AllPositive) << "d=" << d << " pair " << p.label();
        }
    }
}

TEST(correlators, cglmp_families_match_closed_form) {
    for (int d = 2; d <= 12; ++d) {
        Behavior b = oracle_behavior(d);
        for (int k = 0; k <= d / 2; ++k) {
            double expected = closed_form_correlator(d, k);
            for (Pair p : kPairs) {
                for (double x : family_values(b, CorrelatorFamily::cglmp(d, k, p))) {
                    ASSERT_NEAR(x, expected, 1e-12) << "d=" << d << " k=" << k << " pair " << p.label();
                }
            }
        }
    }
}

TEST(correlators, frozen_closed_forms) {
    ASSERT_NEAR(closed_form_correlator(2, 0), 0.353553390593274, 1e-14);
    ASSERT_NEAR(closed_form_correlator(2, 1), -0.353553390593274, 1e-14);
    ASSERT_NEAR(closed_form_correlator(3, 0), 0.239411170931028, 1e-14);
    ASSERT_NEAR(closed_form_correlator(3, 1), 0.0, 1e-14);
    ASSERT_NEAR(closed_form_correlator(4, 1), 0.00317887939277429, 1e-14);
    ASSERT_NEAR(closed_form_correlator(4, 2), -0.00317887939277429, 1e-14);
    ASSERT_NEAR(closed_form_correlator(5, 0), 0.144046472770969, 1e-14);
    ASSERT_NEAR(closed_form_correlator(5, 1), 0.00296153526527000, 1e-14);
    ASSERT_NEAR(closed_form_correlator(5, 2), 0.0, 1e-14);
}

TEST(correlators, product_behaviors_never_definite) {
    std::mt19937_64 rng(2024);
    for (int d : {2, 3, 5}) {
        for (int trial = 0; trial < 1000; ++trial) {
            Behavior b = random_product_behavior(d, rng);
            for (Pair p : kPairs) {
                for (int k = 0; k <= d / 2; ++k) {
                    ConditionVerdict v = condition_check(family_values(b, CorrelatorFamily::cglmp(d, k, p)));
                    ASSERT_EQ(v.classification, Condition::Indefinite);
                }
            }
        }
    }
}

TEST(correlators, condition_check_strictness) {
    std::vector<double> pos{0.1, 0.2};
    std::vector<double> neg{-0.1, -1e-3};
    std::vector<double> edge{0.1, 1e-11};
    ASSERT_EQ(condition_check(pos).classification, Condition::AllPositive);
    ASSERT_EQ(condition_check(neg).classification, Condition::AllNegative);
    ASSERT_EQ(condition_check(edge).classification, Condition::Indefinite);
    ASSERT_EQ(condition_check(edge).per_m_values, edge);
    ASSERT_THROW(condition_check(std::vector<double>{}), InvalidArgument);
}

TEST(correlators, family_names) {
    ASSERT_EQ(CorrelatorFamily::cd(3, {2, 1}).name(), "cd(21)");
    ASSERT_EQ(CorrelatorFamily::cglmp(5, 2, {1, 2}).name(), "cglmp(k=2,12)");
    ASSERT_EQ(CorrelatorFamily::general(3, {{1, 1}, -1, 4, -1, false}).name(), "general(11,sigma=-1,alpha=1,beta=2)");
    ASSERT_EQ(CorrelatorFamily::qubit_dual({2, 2}).name(), "qubit-dual(22)");
}

TEST(correlators, dimension_mismatch) {
    ASSERT_THROW(family_values(oracle_behavior(3), CorrelatorFamily::cd(4, {1, 1})), InvalidArgument);
}
