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

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bell/bell.hpp"

namespace bell::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitRefused = 3;

enum class Format { Json, Csv, Table };

struct RunConfig {
    std::string command;
    int d = 3;
    std::optional<int> d_max;
    std::string kernel = "cd";
    std::optional<std::string> settings_path;
    std::optional<std::string> slk_params_path;
    std::optional<std::string> family_path;
    std::optional<std::string> output_path;
    std::optional<int> k_max;
    double p_noise = 0;
    int steps = 101;
    Format format = Format::Json;
    unsigned workers = 0;
    std::uint64_t seed = 0;
    std::string engine = "fast";
    double xi = std::numbers::pi / 4;
};

/// Thrown for configuration problems; the message names the offending flag.
class ConfigError : public InvalidArgument {
   public:
    using InvalidArgument::InvalidArgument;
};

inline void check_d(int d, const char *flag = "--d") {
    if (d < 2) {
        throw ConfigError(std::string("invalid value for ") + flag + ": d=" + std::to_string(d) +
                          " (must be at least 2)");
    }
}

inline MeasurementSettings load_settings(const RunConfig &c) {
    if (!c.settings_path) {
        return MeasurementSettings::canonical();
    }
    const std::string &s = *c.settings_path;
    if (!std::filesystem::exists(s)) {
        try {
            return settings_preset(s);
        } catch (const InvalidArgument &) {
            throw ConfigError("invalid value for --settings: '" + s + "' is neither a file nor a preset");
        }
    }
    try {
        return settings_from_json(read_json_file(s));
    } catch (const InvalidArgument &e) {
        throw ConfigError(std::string("invalid --settings file: ") + e.what());
    }
}

inline KernelOptions load_kernel_options(const RunConfig &c) {
    KernelOptions o;
    o.k_max = c.k_max;
    if (c.slk_params_path) {
        try {
            o.slk = slk_params_from_json(read_json_file(*c.slk_params_path));
        } catch (const InvalidArgument &e) {
            throw ConfigError(std::string("invalid --slk-params file: ") + e.what());
        }
    }
    return o;
}

inline KernelKind load_kernel_kind(const RunConfig &c) {
    try {
        return parse_kernel_kind(c.kernel);
    } catch (const InvalidArgument &e) {
        throw ConfigError(std::string("invalid value for --kernel: ") + e.what());
    }
}

/// Uniform coefficients in [-1, 1] drawn from a seeded mt19937_64.
inline Kernel random_kernel(int d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    PairTables<double> t(d);
    for (double &x : t.cells()) {
        x = dist(rng);
    }
    return Kernel(std::move(t));
}

// Output. A report is a JSON object; CSV and table modes flatten it. Objects carrying a "rows" array
// of objects are printed as one line per row.

inline std::string format_number(const Json &v, bool short_form) {
    if (v.is_number_float() && short_form) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.7g", v.get<double>());
        return buf;
    }
    if (v.is_string()) {
        return v.get<std::string>();
    }
    return v.dump();
}

inline void flatten(const Json &v, const std::string &prefix, std::vector<std::pair<std::string, Json>> &out) {
    if (v.is_object()) {
        for (auto it = v.begin(); it != v.end(); ++it) {
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
        }
    } else if (v.is_array() && !v.empty() && v.front().is_structured()) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            flatten(v[i], prefix + "[" + std::to_string(i) + "]", out);
        }
    } else {
        out.emplace_back(prefix, v);
    }
}

inline std::string cell_text(const Json &v, bool short_form) {
    if (v.is_array()) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            s += (i ? " " : "") + format_number(v[i], short_form);
        }
        return s;
    }
    return format_number(v, short_form);
}

inline void print_report(const Json &report, Format format, std::ostream &out) {
    if (format == Format::Json) {
        out << report.dump(2) << "\n";
        return;
    }
    bool table = format == Format::Table;
    const char *sep = table ? "  " : ",";
    if (report.contains("rows") && report["rows"].is_array() && !report["rows"].empty() &&
        report["rows"].front().is_object()) {
        const Json &rows = report["rows"];
        std::vector<std::string> keys;
        for (auto it = rows.front().begin(); it != rows.front().end(); ++it) keys.push_back(it.key());
        std::vector<std::vector<std::string>> lines;
        lines.push_back(keys);
        for (const Json &row : rows) {
            std::vector<std::string> line;
            for (const std::string &k : keys) line.push_back(cell_text(row[k], table));
            lines.push_back(std::move(line));
        }
        std::vector<std::size_t> width(keys.size(), 0);
        for (const auto &line : lines) {
            for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
        }
        for (const auto &line : lines) {
            for (std::size_t i = 0; i < line.size(); ++i) {
                if (i) out << sep;
                if (table) {
                    out << std::left << std::setw(static_cast<int>(width[i])) << line[i];
                } else {
                    out << line[i];
                }
            }
            out << "\n";
        }
        return;
    }
    std::vector<std::pair<std::string, Json>> flat;
    flatten(report, "", flat);
    std::string d = report.contains("d") ? report["d"].dump() : "";
    if (table) {
        std::size_t width = 0;
        for (const auto &[k, v] : flat) width = std::max(width, k.size());
        for (const auto &[k, v] : flat) {
            out << std::left << std::setw(static_cast<int>(width)) << k << sep << cell_text(v, true) << "\n";
        }
        return;
    }
    out << "d,quantity,value\n";
    for (const auto &[k, v] : flat) {
        if (k == "d") continue;
        out << d << "," << k << "," << cell_text(v, false) << "\n";
    }
}

// Commands.

inline Json cmd_quantum_value(const RunConfig &c) {
    KernelKind kind = load_kernel_kind(c);
    MeasurementSettings settings = load_settings(c);
    KernelOptions options = load_kernel_options(c);
    Kernel k = build_named_kernel(kind, c.d, options);
    Behavior b = noisy_behavior(c.d, settings, c.p_noise);
    Json per_pair = Json::object();
    for (Pair p : kPairs) {
        auto coeffs = k.table(p);
        auto probs = b.table(p);
        double s = 0;
        for (std::size_t i = 0; i < coeffs.size(); ++i) s += coeffs[i] * probs[i];
        per_pair[p.label()] = s;
    }
    Json j{{"kernel", c.kernel}, {"d", c.d}, {"p_noise", c.p_noise}, {"quantum", evaluate_kernel(k, b)},
           {"per_pair", per_pair}};
    if (settings == MeasurementSettings::canonical() && c.p_noise == 0) {
        if (auto cf = named_kernel_closed_form(kind, c.d, options)) j["closed_form"] = *cf;
    }
    return j;
}

inline Json lhv_json(const LhvResult &r) {
    return Json{{"lhv_max", r.max_value},
                {"lhv_argmax", to_json(r.argmax)},
                {"lhv_min", r.min_value},
                {"lhv_argmin", to_json(r.argmin)},
                {"strategy_count", r.strategy_count}};
}

inline Json cmd_lhv_bound(const RunConfig &c) {
    if (c.engine != "fast" && c.engine != "oracle" && c.engine != "both") {
        throw ConfigError("invalid value for --engine: '" + c.engine + "' (expected fast, oracle or both)");
    }
    bool random = c.kernel == "random";
    std::optional<KernelKind> kind;
    if (!random) kind = load_kernel_kind(c);
    Kernel k = random ? random_kernel(c.d, c.seed) : build_named_kernel(*kind, c.d, load_kernel_options(c));
    LhvOptions options;
    options.workers = c.workers;
    std::string engine = random ? "both" : c.engine;
    Json j{{"kernel", c.kernel}, {"d", c.d}};
    if (random) j["seed"] = c.seed;
    j["engine"] = engine;
    std::optional<LhvResult> fast;
    std::optional<LhvResult> oracle;
    if (engine != "oracle") fast = lhv_fast(k);
    if (engine != "fast") oracle = lhv_oracle(k, options);
    j.update(lhv_json(fast ? *fast : *oracle));
    if (fast && oracle) {
        j["engines_agree"] = *fast == *oracle;
    }
    if (kind == KernelKind::Slk) {
        double formula = slk_lhv_formula(c.d);
        j["lhv_formula"] = formula;
        j["lhv_formula_minus_measured"] = formula - j["lhv_max"].get<double>();
    }
    return j;
}

inline Json cmd_violation(const RunConfig &c) {
    ViolationOptions o;
    o.settings = load_settings(c);
    o.kernel = load_kernel_options(c);
    o.p_noise = c.p_noise;
    ViolationReport r = violation_report(load_kernel_kind(c), c.d, o);
    return to_json(r);
}

inline Json cmd_noise_scan(const RunConfig &c) {
    ViolationOptions o;
    o.settings = load_settings(c);
    o.kernel = load_kernel_options(c);
    KernelKind kind = load_kernel_kind(c);
    if (c.steps < 2) {
        throw ConfigError("invalid value for --steps: " + std::to_string(c.steps) + " (must be at least 2)");
    }
    NoiseScan scan = noise_tolerance_scan(kind, c.d, c.steps, o);
    Json j{{"kernel", c.kernel}, {"d", c.d}, {"lhv_max", scan.lhv_max}};
    if (auto x = scan.crossover()) {
        j["crossover"] = Json::array({x->first, x->second});
    }
    if (kind == KernelKind::Cd && o.settings == MeasurementSettings::canonical()) {
        j["threshold"] = noise_threshold(c.d);
    }
    Json rows = Json::array();
    for (const NoiseScanRow &r : scan.rows) {
        rows.push_back(Json{{"p_noise", r.p_noise}, {"value", r.value}, {"violated", r.violated}});
    }
    j["rows"] = std::move(rows);
    return j;
}

inline Json cmd_noise_threshold(const RunConfig &c) {
    int last = c.d_max.value_or(c.d);
    if (last < c.d) {
        throw ConfigError("invalid value for --d-max: must not be below --d");
    }
    if (!c.d_max) {
        return Json{{"d", c.d}, {"quantum", cd_quantum_closed_form(c.d)}, {"threshold", noise_threshold(c.d)}};
    }
    Json rows = Json::array();
    for (int d = c.d; d <= last; ++d) {
        rows.push_back(Json{{"d", d}, {"quantum", cd_quantum_closed_form(d)}, {"threshold", noise_threshold(d)}});
    }
    return Json{{"rows", std::move(rows)}};
}

inline Json cmd_tightness(const RunConfig &c) {
    LhvOptions options;
    options.workers = c.workers;
    return to_json(tightness_report(c.d, options));
}

inline Json family_json(const CorrelatorFamily &f, const Behavior &b, std::optional<double> closed_form) {
    std::vector<double> values = family_values(b, f);
    ConditionVerdict v = condition_check(values);
    double sum = 0;
    for (double x : values) sum += x;
    Json j{{"name", f.name()}, {"descriptor", to_json(f.spec(), f.d())}, {"values", values}, {"sum", sum},
           {"condition", to_string(v.classification)}};
    if (closed_form) j["closed_form"] = *closed_form;
    return j;
}

inline Json cmd_correlators(const RunConfig &c) {
    MeasurementSettings settings = load_settings(c);
    bool canonical = settings == MeasurementSettings::canonical() && c.p_noise == 0;
    Json families = Json::array();
    int d = c.d;
    if (c.family_path) {
        CorrelatorFamily f = [&] {
            try {
                return family_from_json(read_json_file(*c.family_path));
            } catch (const InvalidArgument &e) {
                throw ConfigError(std::string("invalid --family file: ") + e.what());
            }
        }();
        d = f.d();
        Behavior b = noisy_behavior(d, settings, c.p_noise);
        families.push_back(family_json(f, b, std::nullopt));
    } else {
        KernelKind kind = load_kernel_kind(c);
        if (kind == KernelKind::Slk) {
            throw ConfigError("invalid value for --kernel: correlators lists cd or cglmp families");
        }
        Behavior b = noisy_behavior(d, settings, c.p_noise);
        int k_max = kind == KernelKind::Cd ? 0 : effective_k_max(kind, d, load_kernel_options(c));
        if (k_max < 0 || k_max > d / 2) {
            throw ConfigError("invalid value for --k-max: must lie in [0, floor(d/2)]");
        }
        for (int k = 0; k <= k_max; ++k) {
            for (Pair p : kPairs) {
                CorrelatorFamily f = kind == KernelKind::Cd ? CorrelatorFamily::cd(d, p) : CorrelatorFamily::cglmp(d, k, p);
                std::optional<double> cf;
                if (canonical) cf = closed_form_correlator(d, k);
                families.push_back(family_json(f, b, cf));
            }
        }
    }
    return Json{{"d", d}, {"p_noise", c.p_noise}, {"families", std::move(families)}};
}

inline Json cmd_kernel_export(const RunConfig &c) {
    KernelKind kind = load_kernel_kind(c);
    KernelOptions options = load_kernel_options(c);
    if (auto exact = build_named_exact_kernel(kind, c.d, options)) {
        return to_json(*exact);
    }
    return to_json(build_named_kernel(kind, c.d, options));
}

inline Json cmd_demo_qubit(const RunConfig &c) {
    QubitDemoResult r = qubit_pure_vs_mixed_demo(c.xi);
    return Json{{"xi", c.xi}, {"c_pure", r.c_pure}, {"c_mixed", r.c_mixed},
                {"one_plus_sin_2xi", 1 + std::sin(2 * c.xi)}};
}

inline Json dispatch(const RunConfig &c) {
    if (c.command != "demo-qubit" && !(c.command == "correlators" && c.family_path)) {
        check_d(c.d);
    }
    if (c.d_max) check_d(*c.d_max, "--d-max");
    if (c.command == "quantum-value") return cmd_quantum_value(c);
    if (c.command == "lhv-bound") return cmd_lhv_bound(c);
    if (c.command == "violation") return cmd_violation(c);
    if (c.command == "noise-scan") return cmd_noise_scan(c);
    if (c.command == "noise-threshold") return cmd_noise_threshold(c);
    if (c.command == "tightness") return cmd_tightness(c);
    if (c.command == "correlators") return cmd_correlators(c);
    if (c.command == "kernel-export") return cmd_kernel_export(c);
    return cmd_demo_qubit(c);
}

/// Runs one invocation; args excludes the program name. Returns the process exit status.
inline int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Bipartite qudit Bell kernels: quantum values, local bounds and tightness", "bell"};
    app.require_subcommand(1, 1);
    RunConfig c;
    std::map<std::string, Format> formats{{"json", Format::Json}, {"csv", Format::Csv}, {"table", Format::Table}};

    struct Command {
        const char *name;
        const char *help;
    };
    const Command commands[] = {
        {"quantum-value", "Kernel value on the (noisy) Bell-state behavior"},
        {"lhv-bound", "Local maximum and minimum over deterministic strategies"},
        {"violation", "Quantum value against the local bound"},
        {"noise-scan", "Kernel value over a grid of white-noise fractions"},
        {"noise-threshold", "Critical white-noise fraction of the C_d kernel"},
        {"tightness", "Generator rank test of the C_d kernel"},
        {"correlators", "Correlator families on the quantum behavior"},
        {"kernel-export", "Kernel coefficients as JSON"},
        {"demo-qubit", "Two-qubit pure vs dephased comparison"},
    };
    for (const Command &cmd : commands) {
        CLI::App *sub = app.add_subcommand(cmd.name, cmd.help);
        sub->callback([&c, name = std::string(cmd.name)] { c.command = name; });
        sub->add_option("--d", c.d, "Local dimension");
        sub->add_option("--kernel", c.kernel, "cd, cglmp, cglmp-full-range or slk");
        sub->add_option("--k-max", c.k_max, "Largest CGLMP family index");
        sub->add_option("--settings", c.settings_path, "Settings JSON file or preset name (canonical)");
        sub->add_option("--slk-params", c.slk_params_path, "SLK parameter JSON file")->check(CLI::ExistingFile);
        sub->add_option("--p-noise", c.p_noise, "White-noise fraction");
        sub->add_option("--steps", c.steps, "Grid points for noise-scan");
        sub->add_option("--format", c.format, "json, csv or table")->transform(CLI::CheckedTransformer(formats));
        sub->add_option("--workers", c.workers, "Enumeration threads (0: hardware concurrency)");
        sub->add_option("--seed", c.seed, "Seed for randomized kernels");
        if (std::string(cmd.name) == "lhv-bound") {
            sub->add_option("--engine", c.engine, "fast, oracle or both");
        }
        if (std::string(cmd.name) == "noise-threshold") {
            sub->add_option("--d-max", c.d_max, "Sweep d up to this value");
        }
        if (std::string(cmd.name) == "correlators") {
            sub->add_option("--family", c.family_path, "Family descriptor JSON")->check(CLI::ExistingFile);
        }
        if (std::string(cmd.name) == "kernel-export") {
            sub->add_option("--output", c.output_path, "Write to this file instead of stdout");
        }
        if (std::string(cmd.name) == "demo-qubit") {
            sub->add_option("--xi", c.xi, "State angle in [0, pi/2]");
        }
    }

    std::vector<const char *> argv{"bell"};
    for (const std::string &a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    }

    try {
        Json report = dispatch(c);
        if (c.command == "kernel-export" && c.output_path) {
            std::ofstream f(*c.output_path);
            if (!f) {
                throw ConfigError("invalid value for --output: cannot write '" + *c.output_path + "'");
            }
            f << report.dump(2) << "\n";
            return kExitOk;
        }
        print_report(report, c.format, out);
        return kExitOk;
    } catch (const Refusal &e) {
        err << "refused: " << e.what() << "\n";
        return kExitRefused;
    } catch (const InvalidArgument &e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

}  // namespace bell::cli
