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

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "json.hpp"

#include "bell/core.hpp"
#include "bell/kernels.hpp"
#include "bell/lhv.hpp"
#include "bell/tightness.hpp"

namespace bell {

using Json = nlohmann::ordered_json;

namespace internal {

inline std::int64_t parse_int64(std::string_view text, std::string_view what) {
    std::int64_t out = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw InvalidArgument("malformed " + std::string(what) + ": '" + std::string(text) + "'");
    }
    return out;
}

}  // namespace internal

/// Parses "p" or "p/q" (q > 0).
inline Rational parse_rational(std::string_view text, std::string_view what = "rational") {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Rational(internal::parse_int64(text, what));
    }
    std::int64_t p = internal::parse_int64(text.substr(0, slash), what);
    std::int64_t q = internal::parse_int64(text.substr(slash + 1), what);
    if (q <= 0) {
        throw InvalidArgument("malformed " + std::string(what) + ": '" + std::string(text) +
                              "' (denominator must be positive)");
    }
    return Rational(p, q);
}

inline Rational rational_from_json(const Json &j, std::string_view what) {
    if (j.is_string()) {
        return parse_rational(j.get<std::string>(), what);
    }
    if (j.is_number_integer()) {
        return Rational(j.get<std::int64_t>());
    }
    throw InvalidArgument("field '" + std::string(what) + "' must be a rational string such as \"1/4\"");
}

inline Json value_to_json(double x) {
    return x;
}
inline Json value_to_json(const Rational &x) {
    return to_string(x);
}

template <class T>
T value_from_json(const Json &j, std::string_view what) {
    if constexpr (is_exact_v<T>) {
        return rational_from_json(j, what);
    } else {
        if (j.is_number()) {
            return j.get<double>();
        }
        return to_double(rational_from_json(j, what));
    }
}

template <class T>
Json tables_to_json(const PairTables<T> &t) {
    Json tables = Json::object();
    int d = t.d();
    for (Pair p : kPairs) {
        Json rows = Json::array();
        for (int v1 = 0; v1 < d; ++v1) {
            Json row = Json::array();
            for (int v2 = 0; v2 < d; ++v2) {
                row.push_back(value_to_json(t(p, v1, v2)));
            }
            rows.push_back(std::move(row));
        }
        tables[p.label()] = std::move(rows);
    }
    return Json{{"d", d}, {"tables", std::move(tables)}};
}

template <class T>
PairTables<T> tables_from_json(const Json &j) {
    if (!j.is_object() || !j.contains("d") || !j["d"].is_number_integer()) {
        throw InvalidArgument("table JSON needs an integer field 'd'");
    }
    int d = j["d"].get<int>();
    check_dimension(d);
    if (!j.contains("tables") || !j["tables"].is_object()) {
        throw InvalidArgument("table JSON needs an object field 'tables'");
    }
    const Json &tables = j["tables"];
    PairTables<T> out(d);
    for (Pair p : kPairs) {
        std::string key = p.label();
        if (!tables.contains(key)) {
            throw InvalidArgument("table JSON is missing 'tables." + key + "'");
        }
        const Json &rows = tables[key];
        if (!rows.is_array() || rows.size() != static_cast<std::size_t>(d)) {
            throw InvalidArgument("'tables." + key + "' must have d rows");
        }
        for (int v1 = 0; v1 < d; ++v1) {
            const Json &row = rows[static_cast<std::size_t>(v1)];
            if (!row.is_array() || row.size() != static_cast<std::size_t>(d)) {
                throw InvalidArgument("'tables." + key + "' must have d columns per row");
            }
            for (int v2 = 0; v2 < d; ++v2) {
                out(p, v1, v2) = value_from_json<T>(row[static_cast<std::size_t>(v2)], "tables." + key);
            }
        }
    }
    return out;
}

template <class T>
Json to_json(const BasicKernel<T> &k) {
    return tables_to_json(k.tables());
}
template <class T>
Json to_json(const BasicBehavior<T> &b) {
    return tables_to_json(b.tables());
}

template <class T = double>
BasicKernel<T> kernel_from_json(const Json &j) {
    return BasicKernel<T>(tables_from_json<T>(j));
}
template <class T = double>
BasicBehavior<T> behavior_from_json(const Json &j) {
    return BasicBehavior<T>(tables_from_json<T>(j));
}

inline Json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot open file '" + path + "'");
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw InvalidArgument("malformed JSON in '" + path + "': " + e.what());
    }
}

inline Json to_json(const MeasurementSettings &s) {
    return Json{{"n11", to_string(s.phase(1, 1))},
                {"n21", to_string(s.phase(2, 1))},
                {"n12", to_string(s.phase(1, 2))},
                {"n22", to_string(s.phase(2, 2))}};
}

/// Keys n<party><setting>.
inline MeasurementSettings settings_from_json(const Json &j) {
    if (!j.is_object()) {
        throw InvalidArgument("settings JSON must be an object");
    }
    auto get = [&j](const char *key) {
        if (!j.contains(key)) {
            throw InvalidArgument(std::string("settings JSON is missing field '") + key + "'");
        }
        return rational_from_json(j[key], key);
    };
    return MeasurementSettings({get("n11"), get("n12")}, {get("n21"), get("n22")});
}

/// Named settings presets: "canonical" (alias "paper-eq9").
inline MeasurementSettings settings_preset(std::string_view name) {
    if (name == "canonical" || name == "paper-eq9") {
        return MeasurementSettings::canonical();
    }
    throw InvalidArgument("unknown settings preset '" + std::string(name) + "'");
}

inline Json to_json(const SlkParams &p) {
    return Json{{"nu", to_string(p.nu)},
                {"nu11", to_string(p.for_pair({1, 1}))},
                {"nu22", to_string(p.for_pair({2, 2}))},
                {"nu21", to_string(p.for_pair({2, 1}))},
                {"nu12", to_string(p.for_pair({1, 2}))}};
}

/// Missing keys keep their canonical values.
inline SlkParams slk_params_from_json(const Json &j) {
    if (!j.is_object()) {
        throw InvalidArgument("SLK parameter JSON must be an object");
    }
    SlkParams p = SlkParams::canonical();
    if (j.contains("nu")) {
        p.nu = rational_from_json(j["nu"], "nu");
    }
    for (Pair pair : kPairs) {
        std::string key = "nu" + pair.label();
        if (j.contains(key)) {
            p.nu_pair[pair.index()] = rational_from_json(j[key], key);
        }
    }
    return p;
}

inline Json to_json(const CorrelatorSpec &s, int d) {
    return Json{{"pair", s.pair.label()}, {"sigma", s.sigma}, {"alpha", s.alpha}, {"beta", s.beta}, {"d", d}};
}

/// {"pair": "12", "sigma": -1, "alpha": 0, "beta": 1, "d": 3}, optional "dual": bool.
inline CorrelatorFamily family_from_json(const Json &j) {
    if (!j.is_object()) {
        throw InvalidArgument("family descriptor must be an object");
    }
    for (const char *key : {"pair", "sigma", "alpha", "beta", "d"}) {
        if (!j.contains(key)) {
            throw InvalidArgument(std::string("family descriptor is missing field '") + key + "'");
        }
    }
    auto integer = [&j](const char *key) {
        if (!j[key].is_number_integer()) {
            throw InvalidArgument(std::string("family descriptor field '") + key + "' must be an integer");
        }
        return j[key].get<int>();
    };
    if (!j["pair"].is_string()) {
        throw InvalidArgument("family descriptor field 'pair' must be a string such as \"12\"");
    }
    CorrelatorSpec spec;
    spec.pair = parse_pair(j["pair"].get<std::string>());
    spec.sigma = integer("sigma");
    spec.alpha = integer("alpha");
    spec.beta = integer("beta");
    spec.dual = j.value("dual", false);
    return CorrelatorFamily::general(integer("d"), spec);
}

inline Json to_json(const DeterministicStrategy &s) {
    auto t = s.tuple();
    return Json::array({t[0], t[1], t[2], t[3]});
}

inline Json to_json(const ViolationReport &r) {
    Json j{{"kernel", r.kernel_name},
           {"d", r.d},
           {"p_noise", r.p_noise},
           {"quantum", r.quantum_value},
           {"lhv_max", r.lhv_max},
           {"lhv_argmax", to_json(r.lhv_argmax)},
           {"violated", r.violated},
           {"ratio", r.ratio}};
    if (r.closed_form) j["closed_form"] = *r.closed_form;
    if (r.lhv_formula) {
        j["lhv_formula"] = *r.lhv_formula;
        j["lhv_formula_minus_measured"] = *r.lhv_formula - r.lhv_max;
    }
    return j;
}

inline Json to_json(const TightnessReport &r) {
    auto number = [](const Rational &x) -> Json {
        if (is_integer(x)) return x.numerator();
        return to_double(x);
    };
    return Json{{"d", r.d},
                {"lhv_max", number(r.lhv_max)},
                {"lhv_min", number(r.lhv_min)},
                {"hyperplane_count", r.hyperplane_count},
                {"rank", r.rank},
                {"required", r.required},
                {"condition1", r.condition1},
                {"condition2", r.condition2},
                {"tight", r.tight},
                {"class_i_count", r.class_i_count},
                {"class_i_rank", r.class_i_rank}};
}

}  // namespace bell
