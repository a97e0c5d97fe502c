#pragma once

#include <chrono>
#include <cmath>
#include <ctime>
#include <iostream>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qafm/beam.hpp"
#include "qafm/config.hpp"
#include "qafm/dynamics.hpp"
#include "qafm/errors.hpp"
#include "qafm/force.hpp"
#include "qafm/io.hpp"
#include "qafm/oscillator.hpp"
#include "qafm/quantum.hpp"
#include "qafm/svg.hpp"
#include "qafm/sweep.hpp"
#include "qafm/version.hpp"

namespace qafm::commands {

using config::Format;
using config::RunConfig;

enum ExitCode : int { kOk = 0, kValidation = 2, kPhysics = 3, kIo = 4 };

namespace detail {

inline nlohmann::json provenance(const RunConfig& cfg, bool stamp = false) {
    nlohmann::json meta{{"command", cfg.command}, {"parameters", config::parameters_json(cfg)},
                        {"version", kVersion}};
    if (stamp) {
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[32];
        std::tm tm{};
        gmtime_r(&now, &tm);
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
        meta["created"] = buf;
    }
    return meta;
}

inline void emit(const RunConfig& cfg, const std::string& content, std::ostream& out) {
    if (cfg.output.path == "-" || cfg.output.path.empty()) {
        out << content;
        return;
    }
    io::write_atomic(cfg.output.path, content);
}

inline Format format_or(const RunConfig& cfg, Format fallback) { return cfg.output.format.value_or(fallback); }

inline void require_format(const RunConfig& cfg, Format f, std::initializer_list<Format> allowed) {
    for (auto a : allowed) if (a == f) return;
    throw ValidationError("cli-io", "format " + config::format_name(f) + " is not available for " + cfg.command);
}

inline ForceParams force_params(const RunConfig& cfg) {
    ForceParams p;
    p.hamaker = cfg.number("H");
    p.radius = cfg.number("R");
    if (cfg.has("a0")) p.a0 = cfg.number("a0");
    if (cfg.has("E-tip")) p.young_tip = cfg.number("E-tip");
    if (cfg.has("E-sample")) p.young_sample = cfg.number("E-sample");
    if (cfg.has("nu-tip")) p.poisson_tip = cfg.number("nu-tip");
    if (cfg.has("nu-sample")) p.poisson_sample = cfg.number("nu-sample");
    if (cfg.has("smoothing")) p.smoothing = cfg.number("smoothing");
    p.validate();
    return p;
}

inline std::size_t count_param(const RunConfig& cfg, const std::string& name, long long min_value) {
    const long long v = cfg.integer(name);
    if (v < min_value) {
        throw ValidationError("cli-io", "parameter '" + name + "' must be at least " + std::to_string(min_value));
    }
    return static_cast<std::size_t>(v);
}

inline AxisScale axis_scale(const std::string& s) {
    if (s == "linear") return AxisScale::linear;
    if (s == "log") return AxisScale::log;
    throw ValidationError("cli-io", "axis scale must be linear or log, got '" + s + "'");
}

/// Squeezing parameter for quadratures/trace: explicit r, else from z0 via the reduction, else 0.
inline double squeezing_from(const RunConfig& cfg) {
    if (cfg.has("r")) return cfg.number("r");
    if (!cfg.has("z0")) return 0.0;
    const double alpha = cfg.number("H") * cfg.number("R") / 6.0;
    return reduce(EffectiveOscillator{cfg.number("m"), cfg.number("omega1"), cfg.number("z0"), alpha}).r;
}

inline std::vector<double> chi_values(const RunConfig& cfg) {
    if (cfg.has("chi")) return {cfg.number("chi")};
    Axis ax{"chi", cfg.number("chi-min"), cfg.number("chi-max"), count_param(cfg, "chi-count", 2), AxisScale::log};
    ax.validate();
    return ax.samples();
}

} // namespace detail

inline void run_force(const RunConfig& cfg, std::ostream& out) {
    const auto p = detail::force_params(cfg);
    detail::require_format(cfg, detail::format_or(cfg, Format::csv), {Format::csv});
    Axis ax{"d", cfg.number("d-min"), cfg.number("d-max"), detail::count_param(cfg, "count", 2), AxisScale::linear};
    ax.validate();
    qafm::detail::require(ax.min > 0.0, "force-model", "separation must be positive");
    io::CsvWriter w;
    w.comment("meta: " + detail::provenance(cfg).dump());
    w.header({"d_m", "gamma_N"});
    for (std::size_t i = 0; i < ax.count; ++i) {
        const double d = ax.at(i);
        w.field(d).field(force_static(p, d)).end_row();
    }
    detail::emit(cfg, w.str(), out);
}

inline void run_modes(const RunConfig& cfg, std::ostream& out) {
    ProbeSpec spec;
    spec.length = cfg.number("L");
    spec.width = cfg.number("width");
    spec.thickness = cfg.number("thickness");
    spec.density = cfg.number("density");
    spec.young = cfg.number("E");
    spec.tip_mass = cfg.number("tip-mass");
    spec.validate();
    detail::require_format(cfg, detail::format_or(cfg, Format::csv), {Format::csv});
    const std::size_t n = detail::count_param(cfg, "n-modes", 1);
    const auto modes = compute_modes(spec, n);

    io::CsvWriter w;
    w.comment("meta: " + detail::provenance(cfg).dump());
    w.header({"n", "lambda", "gamma", "omega_rad_s", "freq_hz"});
    for (std::size_t k = 0; k < n; ++k) {
        w.field_int(static_cast<long long>(k + 1)).field(modes.lambdas[k]).field(modes.gammas[k]);
        w.field(modes.omegas[k]).field(cyclic_from_angular(modes.omegas[k])).end_row();
    }
    detail::emit(cfg, w.str(), out);

    const std::size_t samples = detail::count_param(cfg, "shape-samples", 0);
    if (samples == 0) return;
    qafm::detail::require(samples >= 2, "beam-modes", "shape-samples must be 0 or at least 2");
    io::CsvWriter sw;
    sw.comment("meta: " + detail::provenance(cfg).dump());
    sw.field("x_m");
    for (std::size_t k = 1; k <= n; ++k) sw.field("X" + std::to_string(k));
    sw.end_row();
    for (std::size_t i = 0; i < samples; ++i) {
        const double x = i + 1 == samples ? spec.length
                                          : spec.length * static_cast<double>(i) / static_cast<double>(samples - 1);
        sw.field(x);
        for (std::size_t k = 1; k <= n; ++k) sw.field(mode_shape(spec, modes, k, x));
        sw.end_row();
    }
    const auto path = cfg.text("shapes-path");
    if (path.empty()) out << sw.str();
    else io::write_atomic(path, sw.str());
}

/// All squeeze results as JSON; the document is also a valid config for `squeeze`.
inline nlohmann::json squeeze_json(const RunConfig& cfg) {
    const double alpha = cfg.number("H") * cfg.number("R") / 6.0;
    const double z0 = cfg.number("z0");
    qafm::detail::require(cfg.number("H") > 0 && cfg.number("R") > 0, "force-model", "H and R must be positive");
    EffectiveOscillator osc{cfg.number("m"), cfg.number("omega1"), z0, alpha};
    const auto red = reduce(osc);
    const auto da = sensitivity_dqbar_dalpha(osc);
    nlohmann::json res{
        {"Omega", red.omega},
        {"delta", red.delta},
        {"q_bar", red.q_bar},
        {"r", red.r},
        {"r_tilde", red.r_tilde},
        {"zeta", red.zeta},
        {"z_crit", osc.z_crit()},
        {"alpha", alpha},
        {"dqbar_dz0", sensitivity_dqbar_dz0(osc)},
        {"dqbar_dalpha",
         {{"finite_difference", da.finite_difference},
          {"analytic", da.analytic},
          {"rtilde_form", da.rtilde_form},
          {"printed_form", da.printed_form},
          {"ratio", da.ratio}}},
    };
    return {{"command", "squeeze"},
            {"parameters", config::parameters_json(cfg)},
            {"results", res},
            {"meta", {{"version", kVersion}}}};
}

inline void run_squeeze(const RunConfig& cfg, std::ostream& out) {
    detail::require_format(cfg, detail::format_or(cfg, Format::json), {Format::json});
    detail::emit(cfg, squeeze_json(cfg).dump(2) + "\n", out);
}

inline void run_quadratures(const RunConfig& cfg, std::ostream& out) {
    const auto fmt = detail::format_or(cfg, Format::csv);
    detail::require_format(cfg, fmt, {Format::csv, Format::svg});
    const double r = detail::squeezing_from(cfg);
    const auto env = ThermalEnvironment::at(cfg.number("omega1"), cfg.number("temp"));
    const auto trace = uncertainty_trace(detail::chi_values(cfg), env, r);
    auto meta = detail::provenance(cfg);
    meta["r"] = r;
    if (fmt == Format::csv) {
        detail::emit(cfg, trace_to_csv(trace, meta), out);
        return;
    }
    svg::Curve fr{"free", "#1f5fbf", {}, {}}, sq{"squeezed r=" + io::format_double(r), "#c0392b", {}, {}};
    for (const auto& p : trace) {
        fr.x.push_back(p.free.dX1);
        fr.y.push_back(p.free.dX2);
        sq.x.push_back(p.squeezed.dX1);
        sq.y.push_back(p.squeezed.dX2);
    }
    detail::emit(cfg, svg::curves({fr, sq}, "quadrature uncertainties", "dX1", "dX2"), out);
}

inline void run_trace(const RunConfig& cfg, std::ostream& out) { run_quadratures(cfg, out); }

struct ApproachSummary {
    bool snap_in = false;
    double snap_in_time = 0.0;
    std::optional<double> frequency;
    std::optional<double> mean_q1;
    std::optional<double> mean_tip;
    std::optional<double> z_crit_omega;
    std::string frequency_error;
};

inline void run_approach(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    detail::require_format(cfg, detail::format_or(cfg, Format::csv), {Format::csv});
    ForceParams fp;
    fp.hamaker = cfg.number("H");
    fp.radius = cfg.number("R");
    fp.a0 = cfg.number("a0");
    fp.validate();

    const std::size_t n = detail::count_param(cfg, "n-modes", 1);
    const double mass = cfg.number("m");
    const double omega1 = cfg.number("omega1");
    const auto sys = ModalSystem::from_oscillator(mass, omega1, n, fp);

    ApproachProtocol proto;
    proto.z0 = cfg.number("z0");
    proto.t0 = cfg.number("t0");
    proto.z_far = std::max(proto.z_far, 2.0 * proto.z0);
    proto.validate();

    DynamicsConfig dc;
    dc.n_modes = n;
    dc.dt = cfg.maybe("dt").value_or(default_time_step(sys, n));
    const double period = 2.0 * std::numbers::pi / omega1;
    dc.t_start = cfg.maybe("t-start").value_or(-20.0 * proto.t0);
    dc.t_end = cfg.maybe("t-end").value_or(20.0 * proto.t0 + 100.0 * period);
    dc.quality = cfg.maybe("Q");
    if (cfg.number("drive-amp") != 0.0) {
        dc.drive = Drive{cfg.number("drive-amp"), cfg.number("drive-omega"), cfg.number("drive-phase")};
    }
    dc.q_init = {cfg.number("q1-init")};
    dc.v_init = {cfg.number("v1-init")};
    dc.frozen_force = cfg.integer("frozen") != 0;
    dc.stride = detail::count_param(cfg, "stride", 1);

    const auto traj = integrate(sys, proto, dc);

    io::CsvWriter w;
    w.comment("meta: " + detail::provenance(cfg).dump());
    w.field("t");
    for (std::size_t k = 1; k <= n; ++k) w.field("q" + std::to_string(k));
    w.field("w_tip").field("gap").field("energy").end_row();
    for (std::size_t s = 0; s < traj.size(); ++s) {
        w.field(traj.times[s]);
        for (std::size_t k = 0; k < n; ++k) w.field(traj.q(s, k));
        w.field(traj.tip_deflection[s]).field(traj.gap[s]).field(traj.energy[s]).end_row();
    }

    nlohmann::json summary{{"snap_in", traj.snap_in}, {"steps_stored", traj.size()}, {"dt", dc.dt}};
    summary["snap_in_time"] = traj.snap_in ? nlohmann::json(traj.snap_in_time) : nlohmann::json(nullptr);
    summary["energy_drift"] = traj.diagnostics.energy_checked ? nlohmann::json(traj.diagnostics.energy_drift)
                                                              : nlohmann::json(nullptr);
    summary["stable"] = traj.diagnostics.stable;
    const double settle = cfg.maybe("settle").value_or(10.0 * proto.t0);
    try {
        const auto st = ringdown_stats(traj, settle);
        summary["frequency_rad_s"] = st.omega;
        summary["mean_q1"] = st.mean;
        summary["mean_w_tip"] = 2.0 * st.mean;
        summary["cycles"] = st.cycles;
    } catch (const ValidationError& e) {
        summary["frequency_rad_s"] = nullptr;
        summary["frequency_error"] = e.what();
    }
    EffectiveOscillator osc{mass, omega1, proto.z0, fp.alpha()};
    summary["z_crit"] = osc.z_crit();
    summary["Omega_closed_form"] = osc.oscillates() ? nlohmann::json(reduce(osc).omega) : nlohmann::json(nullptr);
    summary["meta"] = detail::provenance(cfg);

    detail::emit(cfg, w.str(), out);
    std::string summary_path = cfg.text("summary");
    if (summary_path.empty() && cfg.output.path != "-" && !cfg.output.path.empty()) {
        summary_path = cfg.output.path + ".summary.json";
    }
    if (summary_path.empty()) err << summary.dump() << "\n";
    else io::write_atomic(summary_path, summary.dump(2) + "\n");
}

inline MapResult omega_map_for(const RunConfig& cfg) {
    const double a0 = cfg.number("a0");
    const double alpha = cfg.number("H") * cfg.number("R") / 6.0;
    SweepGrid grid;
    grid.x = {"z0_m", cfg.maybe("z0-min").value_or(0.5 * a0), cfg.maybe("z0-max").value_or(20.0 * a0),
              detail::count_param(cfg, "z0-count", 2), detail::axis_scale(cfg.text("z0-scale"))};
    grid.y = {"omega1_rad_s", cfg.number("omega1-min"), cfg.number("omega1-max"),
              detail::count_param(cfg, "omega1-count", 2), detail::axis_scale(cfg.text("omega1-scale"))};
    const auto threads = static_cast<unsigned>(detail::count_param(cfg, "threads", 1));
    auto map = omega_map(grid, cfg.number("m"), alpha, threads);
    auto meta = detail::provenance(cfg, cfg.integer("stamp") != 0);
    meta["parameters"].erase("threads"); // output must not depend on the thread count
    meta["map"] = map.meta;
    map.meta = meta;
    return map;
}

inline void run_omega_map(const RunConfig& cfg, std::ostream& out) {
    const auto fmt = detail::format_or(cfg, Format::csv);
    detail::require_format(cfg, fmt, {Format::csv, Format::svg});
    const auto map = omega_map_for(cfg);
    if (fmt == Format::csv) detail::emit(cfg, map_to_csv(map), out);
    else detail::emit(cfg, svg::heatmap(map, "Omega over (z0, omega1); white = suppressed"), out);
}

/// Dispatches cfg; module errors propagate as exceptions.
inline void dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.command == "force") run_force(cfg, out);
    else if (cfg.command == "modes") run_modes(cfg, out);
    else if (cfg.command == "squeeze") run_squeeze(cfg, out);
    else if (cfg.command == "quadratures") run_quadratures(cfg, out);
    else if (cfg.command == "trace") run_trace(cfg, out);
    else if (cfg.command == "approach") run_approach(cfg, out, err);
    else if (cfg.command == "omega-map") run_omega_map(cfg, out);
    else throw ValidationError("cli-io", "unknown command '" + cfg.command + "'");
}

/// Writes "error: <module>: <message>" on one line and maps the error class to an exit code.
inline int report(const std::exception& e, std::ostream& err) {
    std::string msg = e.what();
    for (auto& c : msg) if (c == '\n') c = ' ';
    int code = kValidation;
    std::string module = "cli-io";
    if (const auto* qe = dynamic_cast<const Error*>(&e)) {
        module = qe->module();
        if (dynamic_cast<const PhysicsError*>(&e)) code = kPhysics;
        else if (dynamic_cast<const IoError*>(&e)) code = kIo;
    }
    err << "error: " << module << ": " << msg << "\n";
    return code;
}

inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    try {
        dispatch(cfg, out, err);
        return kOk;
    } catch (const std::exception& e) {
        return report(e, err);
    }
}

} // namespace qafm::commands
