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
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bell/core.hpp"
#include "bell/kernels.hpp"
#include "bell/lhv.hpp"

namespace bell {

/// Positions of the chi variables, in the order chi11, chi12, chi22, chi21.
enum class ChiSlot { Chi11 = 0, Chi12 = 1, Chi22 = 2, Chi21 = 3 };

inline constexpr std::array<ChiSlot, 4> kChiSlots{ChiSlot::Chi11, ChiSlot::Chi12, ChiSlot::Chi22, ChiSlot::Chi21};

inline const char *to_string(ChiSlot slot) {
    switch (slot) {
        case ChiSlot::Chi11:
            return "chi11";
        case ChiSlot::Chi12:
            return "chi12";
        case ChiSlot::Chi22:
            return "chi22";
        case ChiSlot::Chi21:
            break;
    }
    return "chi21";
}

/// Each entry is 0, -1, or empty when the residue scores nothing.
struct ChiProfile {
    std::array<std::optional<int>, 4> chi;
    std::array<int, 4> residue{};

    std::optional<int> operator[](ChiSlot slot) const {
        return chi[static_cast<std::size_t>(slot)];
    }

    int count(int value) const {
        int n = 0;
        for (const auto &c : chi) {
            n += c == value ? 1 : 0;
        }
        return n;
    }
    bool all_active() const {
        for (const auto &c : chi) {
            if (!c) return false;
        }
        return true;
    }

    /// (#0) - (#-1), the C_d kernel value of the strategy.
    int value() const {
        return count(0) - count(-1);
    }

    /// Three zeros and one -1.
    bool is_class_i() const {
        return count(0) == 3 && count(-1) == 1;
    }
    /// All four -1.
    bool is_class_ii() const {
        return count(-1) == 4;
    }

    /// Slot holding the single -1 of a class-(i) profile.
    std::optional<ChiSlot> minus_one_slot() const {
        if (!is_class_i()) return std::nullopt;
        for (ChiSlot s : kChiSlots) {
            if ((*this)[s] == -1) return s;
        }
        return std::nullopt;
    }
};

/// Residues chi11 = v1(1) + v2(1), chi12 = -v1(1) - v2(2), chi22 = v1(2) + v2(2),
/// chi21 = -v1(2) - v2(1) - 1, all mod d; 0 scores 0, d-1 scores -1.
inline ChiProfile chi_profile(const DeterministicStrategy &s, int d) {
    check_dimension(d);
    check_strategy(s, d);
    std::array<std::int64_t, 4> raw{
        s.v1[0] + s.v2[0],
        -s.v1[0] - s.v2[1],
        s.v1[1] + s.v2[1],
        -s.v1[1] - s.v2[0] - 1,
    };
    ChiProfile p;
    for (std::size_t i = 0; i < 4; ++i) {
        int r = nmod(raw[i], d);
        p.residue[i] = r;
        if (r == 0) {
            p.chi[i] = 0;
        } else if (r == d - 1) {
            p.chi[i] = -1;
        }
    }
    return p;
}

inline std::vector<DeterministicStrategy> strategies_with_cd_value(int d, const Rational &target,
                                                                   const LhvOptions &options = {}) {
    check_dimension(d);
    std::uint64_t total = strategy_count(d);
    if (total > options.cap) {
        throw CapExceeded("enumerating " + std::to_string(total) + " strategies exceeds the cap " +
                          std::to_string(options.cap));
    }
    ExactKernel k = build_cd_kernel<Rational>(d);
    std::vector<DeterministicStrategy> out;
    for (std::uint64_t i = 0; i < total; ++i) {
        DeterministicStrategy s = DeterministicStrategy::from_index(i, d);
        if (strategy_kernel_value(k, s) == target) {
            out.push_back(s);
        }
    }
    return out;
}

/// Every deterministic strategy on which the C_d kernel attains its local maximum, in lexicographic order.
inline std::vector<DeterministicStrategy> hyperplane_generators(int d, const LhvOptions &options = {}) {
    ExactKernel k = build_cd_kernel<Rational>(d);
    Rational max = lhv_oracle(k, options).max_value;
    return strategies_with_cd_value(d, max, options);
}

/// The strategies with three chi = 0 and one chi = -1.
inline std::vector<DeterministicStrategy> class_i_generators(int d, const LhvOptions &options = {}) {
    std::vector<DeterministicStrategy> out;
    for (const DeterministicStrategy &s : hyperplane_generators(d, options)) {
        if (chi_profile(s, d).is_class_i()) {
            out.push_back(s);
        }
    }
    return out;
}

using BigInt = boost::multiprecision::cpp_int;

/// Rank of an integer matrix by fraction-free (Bareiss) elimination with full pivot search.
inline std::size_t integer_rank(std::vector<std::vector<BigInt>> m) {
    std::size_t rows = m.size();
    std::size_t cols = rows == 0 ? 0 : m.front().size();
    for (const auto &row : m) {
        if (row.size() != cols) {
            throw InvalidArgument("ragged matrix");
        }
    }
    std::vector<std::size_t> col(cols);
    for (std::size_t j = 0; j < cols; ++j) col[j] = j;
    BigInt prev = 1;
    std::size_t rank = 0;
    while (rank < rows && rank < cols) {
        std::optional<std::pair<std::size_t, std::size_t>> pivot;
        for (std::size_t i = rank; i < rows && !pivot; ++i) {
            for (std::size_t j = rank; j < cols; ++j) {
                if (m[i][col[j]] != 0) {
                    pivot = std::pair{i, j};
                    break;
                }
            }
        }
        if (!pivot) break;
        std::swap(m[rank], m[pivot->first]);
        std::swap(col[rank], col[pivot->second]);
        const BigInt p = m[rank][col[rank]];
        for (std::size_t i = rank + 1; i < rows; ++i) {
            const BigInt lead = m[i][col[rank]];
            for (std::size_t j = rank + 1; j < cols; ++j) {
                BigInt &x = m[i][col[j]];
                x = (p * x - lead * m[rank][col[j]]) / prev;
            }
            m[i][col[rank]] = 0;
        }
        prev = p;
        ++rank;
    }
    return rank;
}

/// The behavior of s as a 0/1 vector of length 4d^2 in PairTables layout.
inline std::vector<int> generator_vector(const DeterministicStrategy &s, int d) {
    Behavior b = strategy_behavior(s, d);
    std::vector<int> out;
    out.reserve(b.tables().cells().size());
    for (double x : b.tables().cells()) {
        out.push_back(x == 1.0 ? 1 : 0);
    }
    return out;
}

/// Number of linearly independent behaviors among the generators, computed exactly.
inline std::size_t generator_rank(std::span<const DeterministicStrategy> gens, int d) {
    if (gens.empty()) {
        throw InvalidArgument("generator_rank needs at least one generator");
    }
    std::vector<std::vector<BigInt>> m;
    m.reserve(gens.size());
    for (const DeterministicStrategy &s : gens) {
        std::vector<int> v = generator_vector(s, d);
        m.emplace_back(v.begin(), v.end());
    }
    return integer_rank(std::move(m));
}

struct TightnessReport {
    int d = 0;
    Rational lhv_max;
    Rational lhv_min;
    std::size_t hyperplane_count = 0;
    std::size_t rank = 0;
    std::size_t required = 0;  // 4d(d-1)
    bool condition1 = false;   // local maximum of the kernel is 2
    bool condition2 = false;   // rank >= required
    bool tight = false;
    std::size_t class_i_count = 0;
    std::size_t class_i_rank = 0;
};

inline TightnessReport tightness_report(int d, const LhvOptions &options = {}) {
    check_dimension(d);
    ExactKernel k = build_cd_kernel<Rational>(d);
    BasicLhvResult<Rational> lhv = lhv_oracle(k, options);
    std::vector<DeterministicStrategy> gens = strategies_with_cd_value(d, lhv.max_value, options);
    std::vector<DeterministicStrategy> class_i;
    for (const DeterministicStrategy &s : gens) {
        if (chi_profile(s, d).is_class_i()) class_i.push_back(s);
    }
    TightnessReport r;
    r.d = d;
    r.lhv_max = lhv.max_value;
    r.lhv_min = lhv.min_value;
    r.hyperplane_count = gens.size();
    r.rank = generator_rank(gens, d);
    r.required = 4 * static_cast<std::size_t>(d) * static_cast<std::size_t>(d - 1);
    r.condition1 = lhv.max_value == Rational(2);
    r.condition2 = r.rank >= r.required;
    r.tight = r.condition1 && r.condition2;
    r.class_i_count = class_i.size();
    r.class_i_rank = class_i.empty() ? 0 : generator_rank(class_i, d);
    return r;
}

using Ket = std::pair<int, int>;

/// Per-pair relabeling of outcome kets, in pair order (1,1), (1,2), (2,1), (2,2):
/// |a1,b1> -> |a1, a1+b1>, |a1,b2> -> |a1, a1+b2>, |a2,b1> -> |-b1, -a2-b1-1>, |a2,b2> -> |-b2, a2+b2>.
/// Each map is a permutation of the d^2 kets of its table.
inline std::array<Ket, 4> transform_kets(const DeterministicStrategy &s, int d) {
    check_strategy(s, d);
    int a1 = s.v1[0];
    int a2 = s.v1[1];
    int b1 = s.v2[0];
    int b2 = s.v2[1];
    return {{
        {a1, nmod(a1 + b1, d)},
        {a1, nmod(a1 + b2, d)},
        {nmod(-b1, d), nmod(-a2 - b1 - 1, d)},
        {nmod(-b2, d), nmod(a2 + b2, d)},
    }};
}

/// The four hyperplane templates, with v the free outcome.
inline std::array<Ket, 4> generator_template(int v, ChiSlot slot, int d) {
    auto k = [d](int x, int y) { return Ket{nmod(x, d), nmod(y, d)}; };
    switch (slot) {
        case ChiSlot::Chi11:
            return {k(v, -1), k(v, 0), k(v + 1, 0), k(v, 0)};
        case ChiSlot::Chi12:
            return {k(v, 0), k(v, 1), k(v, 0), k(v - 1, 0)};
        case ChiSlot::Chi22:
            return {k(v, 0), k(v, 0), k(v, 0), k(v, -1)};
        case ChiSlot::Chi21:
            break;
    }
    return {k(v, 0), k(v, 0), k(v, -1), k(v, 0)};
}

struct TransformedGenerator {
    DeterministicStrategy strategy;
    int v = 0;
    ChiSlot slot = ChiSlot::Chi11;
    std::array<Ket, 4> kets;
};

/// (v, slot) whose template equals the transformed kets of s, if any.
inline std::optional<std::pair<int, ChiSlot>> template_match(const DeterministicStrategy &s, int d) {
    std::array<Ket, 4> kets = transform_kets(s, d);
    for (ChiSlot slot : kChiSlots) {
        int v = s.v1[0];
        if (generator_template(v, slot, d) == kets) {
            return std::pair{v, slot};
        }
    }
    return std::nullopt;
}

/// Class-(i) generators in template form. Throws if one matches no template, disagrees with its chi
/// profile, or the map onto {0..d-1} x slots is not a bijection.
inline std::vector<TransformedGenerator> transformed_generators(int d, const LhvOptions &options = {}) {
    std::vector<TransformedGenerator> out;
    std::set<std::pair<int, int>> seen;
    for (const DeterministicStrategy &s : class_i_generators(d, options)) {
        auto match = template_match(s, d);
        if (!match) {
            throw Error("internal inconsistency: class-(i) generator matches no template");
        }
        if (chi_profile(s, d).minus_one_slot() != match->second) {
            throw Error("internal inconsistency: template slot disagrees with chi profile");
        }
        if (!seen.insert({match->first, static_cast<int>(match->second)}).second) {
            throw Error("internal inconsistency: two generators share a template");
        }
        out.push_back({s, match->first, match->second, transform_kets(s, d)});
    }
    if (seen.size() != 4 * static_cast<std::size_t>(d)) {
        throw Error("internal inconsistency: templates not covered bijectively");
    }
    return out;
}

}  // namespace bell
