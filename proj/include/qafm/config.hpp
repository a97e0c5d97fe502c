#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qafm/errors.hpp"
#include "qafm/io.hpp"
#include "qafm/units.hpp"

namespace qafm::config {

inline constexpr const char* kModule = "cli-io";

/// How a parameter is spelled and converted at the boundary.
///   distance:  SI name in m, alias "<name>-nm"
///   frequency: SI name in rad/s, alias "<name>-hz" (cyclic)
enum class Kind { real, distance, frequency, integer, text };

struct ParamSpec {
    std::string name;
    Kind kind = Kind::real;
    std::optional<std::variant<double, std::string>> fallback; // absent: required unless optional
    bool optional = false;
    std::string unit;
    std::string help;
};

using Value = std::variant<double, std::string>;

enum class Format { csv, json, svg };

struct OutputSpec {
    std::string path = "-"; // "-" is stdout
    std::optional<Format> format;
};

struct RunConfig {
    std::string command;
    std::map<std::string, Value> parameters; // canonical names, SI units
    OutputSpec output;

    bool has(const std::string& name) const { return parameters.count(name) != 0; }
    double number(const std::string& name) const {
        const auto it = parameters.find(name);
        if (it == parameters.end()) throw ValidationError(kModule, "missing parameter '" + name + "' for " + command);
        return std::get<double>(it->second);
    }
    std::optional<double> maybe(const std::string& name) const {
        if (!has(name)) return std::nullopt;
        return number(name);
    }
    long long integer(const std::string& name) const { return static_cast<long long>(number(name)); }
    std::string text(const std::string& name) const {
        const auto it = parameters.find(name);
        if (it == parameters.end()) return {};
        return std::get<std::string>(it->second);
    }
};

inline const std::vector<std::string>& commands() {
    static const std::vector<std::string> names{"force", "modes", "squeeze", "quadratures", "approach", "omega-map",
                                                "trace"};
    return names;
}

namespace detail {

inline ParamSpec req(std::string name, Kind kind, std::string unit, std::string help) {
    return {std::move(name), kind, std::nullopt, false, std::move(unit), std::move(help)};
}
inline ParamSpec opt(std::string name, Kind kind, std::string unit, std::string help) {
    return {std::move(name), kind, std::nullopt, true, std::move(unit), std::move(help)};
}
inline ParamSpec def(std::string name, Kind kind, double v, std::string unit, std::string help) {
    return {std::move(name), kind, Value{v}, false, std::move(unit), std::move(help)};
}
inline ParamSpec def_text(std::string name, std::string v, std::string help) {
    return {std::move(name), Kind::text, Value{std::move(v)}, false, "", std::move(help)};
}

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline std::vector<ParamSpec> tip_sample() {
    return {def("H", Kind::real, 1e-20, "J", "Hamaker constant"),
            def("R", Kind::distance, 1e-8, "m", "tip radius")};
}

} // namespace detail

/// Parameter table for one subcommand. Throws for unknown commands.
inline std::vector<ParamSpec> schema(std::string_view command) {
    using namespace detail;
    std::vector<ParamSpec> s;
    auto add = [&s](std::vector<ParamSpec> more) { s.insert(s.end(), more.begin(), more.end()); };
    if (command == "force") {
        add(tip_sample());
        add({def("a0", Kind::distance, 0.165e-9, "m", "onset of repulsion"),
             def("E-tip", Kind::real, 150e9, "Pa", "tip Young modulus"),
             def("E-sample", Kind::real, 150e9, "Pa", "sample Young modulus"),
             def("nu-tip", Kind::real, 0.4, "", "tip Poisson ratio"),
             def("nu-sample", Kind::real, 0.4, "", "sample Poisson ratio"),
             def("smoothing", Kind::real, 0.0, "", "cubic blend half-width around a0, fraction of a0"),
             def("d-min", Kind::distance, 0.05e-9, "m", "smallest separation"),
             def("d-max", Kind::distance, 5e-9, "m", "largest separation"),
             def("count", Kind::integer, 200, "", "number of samples")});
    } else if (command == "modes") {
        add({def("L", Kind::real, 100e-6, "m", "beam length"), def("width", Kind::real, 20e-6, "m", "beam width"),
             def("thickness", Kind::real, 3e-6, "m", "beam thickness"),
             def("density", Kind::real, 3.1e3, "kg/m^3", "mass density"),
             def("E", Kind::real, 2.5e11, "Pa", "Young modulus"),
             def("tip-mass", Kind::real, 0.0, "kg", "point mass at the free end"),
             def("n-modes", Kind::integer, 5, "", "number of modes"),
             def("shape-samples", Kind::integer, 0, "", "mode-shape samples along the beam (0 = none)"),
             def_text("shapes-path", "", "where to write mode-shape samples (CSV)")});
    } else if (command == "squeeze") {
        add({def("m", Kind::real, 3e-11, "kg", "effective mass"),
             def("omega1", Kind::frequency, kTwoPi * 1e6, "rad/s", "free fundamental frequency"),
             req("z0", Kind::distance, "m", "rest distance")});
        add(tip_sample());
    } else if (command == "quadratures" || command == "trace") {
        const bool trace = command == "trace";
        add({def("temp", Kind::real, trace ? 0.0 : 0.01, "K", "temperature"),
             def("omega1", Kind::frequency, kTwoPi * (trace ? 0.5e6 : 1e6), "rad/s", "free fundamental frequency"),
             def("chi-min", Kind::real, 1e-2, "", "smallest coupling"),
             def("chi-max", Kind::real, 1e2, "", "largest coupling"),
             def("chi-count", Kind::integer, trace ? 101 : 41, "", "couplings, log spaced"),
             opt("r", Kind::real, "", "squeezing parameter (overrides z0)"),
             opt("z0", Kind::distance, "m", "rest distance used to derive r"),
             def("m", Kind::real, 3e-11, "kg", "effective mass")});
        if (!trace) s.push_back(opt("chi", Kind::real, "", "single coupling value (overrides the range)"));
        add(tip_sample());
    } else if (command == "approach") {
        add({def("m", Kind::real, 3e-11, "kg", "effective mass"),
             def("omega1", Kind::frequency, kTwoPi * 1e6, "rad/s", "free fundamental frequency"),
             req("z0", Kind::distance, "m", "rest distance"),
             def("a0", Kind::distance, 0.165e-9, "m", "onset of repulsion (snap-in threshold)"),
             def("t0", Kind::real, 1e-5, "s", "approach timescale"),
             opt("t-start", Kind::real, "s", "start time (default -20 t0)"),
             opt("t-end", Kind::real, "s", "end time (default 20 t0 + 100 periods)"),
             opt("dt", Kind::real, "s", "time step (default 1/200 of the shortest period)"),
             opt("Q", Kind::real, "", "quality factor (default undamped)"),
             def("n-modes", Kind::integer, 1, "", "Galerkin modes"),
             def("drive-amp", Kind::real, 0.0, "N", "harmonic drive amplitude"),
             def("drive-omega", Kind::frequency, 0.0, "rad/s", "harmonic drive frequency"),
             def("drive-phase", Kind::real, 0.0, "rad", "harmonic drive phase"),
             def("q1-init", Kind::distance, 0.0, "m", "initial modal coordinate of mode 1"),
             def("v1-init", Kind::real, 0.0, "m/s", "initial modal velocity of mode 1"),
             def("frozen", Kind::integer, 0, "", "1 holds the force at full strength"),
             def("stride", Kind::integer, 1, "", "store every stride-th step"),
             opt("settle", Kind::real, "s", "start of the analysis window (default 10 t0)"),
             def_text("summary", "", "summary JSON path (default <output>.summary.json)")});
        add(tip_sample());
    } else if (command == "omega-map") {
        add({def("m", Kind::real, 3e-11, "kg", "effective mass"),
             def("a0", Kind::distance, 0.165e-9, "m", "reference distance for default z0 range"),
             opt("z0-min", Kind::distance, "m", "default 0.5 a0"), opt("z0-max", Kind::distance, "m", "default 20 a0"),
             def("z0-count", Kind::integer, 80, "", "z0 samples"),
             def_text("z0-scale", "linear", "linear or log"),
             def("omega1-min", Kind::frequency, kTwoPi * 0.1e6, "rad/s", "smallest free frequency"),
             def("omega1-max", Kind::frequency, kTwoPi * 2e6, "rad/s", "largest free frequency"),
             def("omega1-count", Kind::integer, 60, "", "omega1 samples"),
             def_text("omega1-scale", "linear", "linear or log"),
             def("threads", Kind::integer, 1, "", "worker threads"),
             def("stamp", Kind::integer, 0, "", "1 adds a creation timestamp to the metadata")});
        add(tip_sample());
    } else {
        throw ValidationError(kModule, "unknown command '" + std::string(command) + "'");
    }
    return s;
}

namespace detail {

struct Alias {
    const ParamSpec* spec;
    double scale;
};

/// name or alias -> (spec, factor to SI).
inline std::map<std::string, Alias> spellings(const std::vector<ParamSpec>& specs) {
    std::map<std::string, Alias> out;
    for (const auto& p : specs) {
        out[p.name] = {&p, 1.0};
        if (p.kind == Kind::distance) out[p.name + "-nm"] = {&p, nanometer};
        if (p.kind == Kind::frequency) out[p.name + "-hz"] = {&p, kTwoPi};
    }
    return out;
}

inline std::string expected(const ParamSpec& p, double scale) {
    if (p.kind == Kind::text) return "text";
    if (p.kind == Kind::integer) return "an integer";
    if (scale == nanometer) return "a number in nm";
    if (scale == kTwoPi) return "a number in Hz";
    return p.unit.empty() ? "a number" : "a number in " + p.unit;
}

inline Value convert_text(const std::string& key, const ParamSpec& p, double scale, const std::string& raw) {
    if (p.kind == Kind::text) return raw;
    double v = 0.0;
    try {
        v = io::parse_double(raw);
    } catch (const ValidationError&) {
        throw ValidationError(kModule, "parameter '" + key + "' expects " + expected(p, scale) + ", got '" + raw + "'");
    }
    return v * scale;
}

// Reads one source into canonical names; both spellings of one parameter in a single source is an error.
inline std::map<std::string, Value> from_json(const nlohmann::json& obj, const std::vector<ParamSpec>& specs,
                                              const std::string& command) {
    const auto names = spellings(specs);
    std::map<std::string, Value> out;
    for (const auto& [key, val] : obj.items()) {
        const auto it = names.find(key);
        if (it == names.end()) {
            throw ValidationError(kModule, "unknown parameter '" + key + "' for command " + command);
        }
        const ParamSpec& p = *it->second.spec;
        if (out.count(p.name)) throw ValidationError(kModule, "parameter '" + p.name + "' given twice");
        if (p.kind == Kind::text) {
            if (!val.is_string()) throw ValidationError(kModule, "parameter '" + key + "' expects text");
            out[p.name] = val.get<std::string>();
        } else {
            if (!val.is_number()) {
                throw ValidationError(kModule, "parameter '" + key + "' expects " + expected(p, it->second.scale));
            }
            out[p.name] = val.get<double>() * it->second.scale;
        }
    }
    return out;
}

inline std::map<std::string, Value> from_flags(const std::map<std::string, std::string>& flags,
                                               const std::vector<ParamSpec>& specs, const std::string& command) {
    const auto names = spellings(specs);
    std::map<std::string, Value> out;
    for (const auto& [key, raw] : flags) {
        const auto it = names.find(key);
        if (it == names.end()) {
            throw ValidationError(kModule, "unknown parameter '" + key + "' for command " + command);
        }
        const ParamSpec& p = *it->second.spec;
        if (out.count(p.name)) throw ValidationError(kModule, "parameter '" + p.name + "' given twice");
        out[p.name] = convert_text(key, p, it->second.scale, raw);
    }
    return out;
}

inline Format parse_format(const std::string& s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    if (s == "svg") return Format::svg;
    throw ValidationError(kModule, "unknown output format '" + s + "' (expected csv, json or svg)");
}

} // namespace detail

inline std::string format_name(Format f) {
    switch (f) {
    case Format::csv: return "csv";
    case Format::json: return "json";
    case Format::svg: return "svg";
    }
    return "csv";
}

/// Builds a validated RunConfig from an optional JSON document and command-line flags.
///
/// Flags override document values parameter by parameter. Unknown keys are
/// rejected at every level. The document may carry "results" and "meta"
/// sections (as written by the json outputs); those are ignored so outputs can be
/// fed back as configs.
inline RunConfig load_config_json(std::string command, const nlohmann::json* doc,
                                  const std::map<std::string, std::string>& flags = {},
                                  const std::optional<OutputSpec>& output = std::nullopt) {
    RunConfig cfg;
    std::map<std::string, Value> from_file;
    if (doc) {
        if (!doc->is_object()) throw ValidationError(kModule, "config must be a JSON object");
        for (const auto& [key, val] : doc->items()) {
            if (key != "command" && key != "parameters" && key != "output" && key != "results" && key != "meta") {
                throw ValidationError(kModule, "unknown config key '" + key + "'");
            }
        }
        if (doc->contains("command")) {
            const auto file_cmd = (*doc)["command"].get<std::string>();
            if (command.empty()) command = file_cmd;
            else if (command != file_cmd) {
                throw ValidationError(kModule, "config is for command " + file_cmd + ", not " + command);
            }
        }
    }
    if (command.empty()) throw ValidationError(kModule, "no command given");
    const auto specs = schema(command);
    cfg.command = command;

    if (doc && doc->contains("parameters")) {
        const auto& params = (*doc)["parameters"];
        if (!params.is_object()) throw ValidationError(kModule, "'parameters' must be an object");
        from_file = detail::from_json(params, specs, command);
    }
    if (doc && doc->contains("output")) {
        const auto& o = (*doc)["output"];
        for (const auto& [key, val] : o.items()) {
            if (key == "path") cfg.output.path = val.get<std::string>();
            else if (key == "format") cfg.output.format = detail::parse_format(val.get<std::string>());
            else throw ValidationError(kModule, "unknown output key '" + key + "'");
        }
    }

    cfg.parameters = from_file;
    for (auto& [k, v] : detail::from_flags(flags, specs, command)) cfg.parameters[k] = v;

    for (const auto& p : specs) {
        if (cfg.parameters.count(p.name)) {
            if (p.kind == Kind::integer) {
                const double v = std::get<double>(cfg.parameters[p.name]);
                if (v != std::floor(v)) {
                    throw ValidationError(kModule, "parameter '" + p.name + "' expects an integer");
                }
            }
            continue;
        }
        if (p.fallback) cfg.parameters[p.name] = *p.fallback;
        else if (!p.optional) {
            throw ValidationError(kModule, "missing required parameter '" + p.name + "' for command " + command);
        }
    }
    if (output) {
        if (output->path != "-") cfg.output.path = output->path;
        if (output->format) cfg.output.format = output->format;
    }
    return cfg;
}

inline RunConfig load_config(std::string command, const std::optional<std::filesystem::path>& file,
                             const std::map<std::string, std::string>& flags = {},
                             const std::optional<OutputSpec>& output = std::nullopt) {
    if (!file) return load_config_json(std::move(command), nullptr, flags, output);
    const std::string text = io::read_file(*file);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(kModule, "config " + file->string() + " is not valid JSON: " + e.what());
    }
    return load_config_json(std::move(command), &doc, flags, output);
}

/// Parameters as a JSON object with canonical names and SI values.
inline nlohmann::json parameters_json(const RunConfig& cfg) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : cfg.parameters) {
        if (const auto* d = std::get_if<double>(&v)) j[k] = *d;
        else j[k] = std::get<std::string>(v);
    }
    return j;
}

inline Format parse_format(const std::string& s) { return detail::parse_format(s); }

} // namespace qafm::config
