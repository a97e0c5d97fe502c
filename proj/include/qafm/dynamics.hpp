#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "qafm/beam.hpp"
#include "qafm/errors.hpp"
#include "qafm/force.hpp"
#include "qafm/oscillator.hpp"
#include "qafm/rk4.hpp"

namespace qafm {

/// Galerkin-truncated probe: every mode has generalized mass m = mu L and tip weight 2.
struct ModalSystem {
    double mass = 0.0;
    std::vector<double> omegas;
    std::optional<ForceParams> force; // nullopt switches the tip-sample interaction off

    static ModalSystem from_probe(const ProbeSpec& spec, const ModeSet& modes, std::optional<ForceParams> force) {
        spec.validate();
        return {spec.mass() + 4.0 * spec.tip_mass, modes.omegas, std::move(force)};
    }

    /// Effective-oscillator parameters with higher modes placed at omega1 (lambda_n / lambda_1)^2.
    static ModalSystem from_oscillator(double mass, double omega1, std::size_t n_modes,
                                       std::optional<ForceParams> force) {
        detail::require(mass > 0.0 && omega1 > 0.0, "approach-dynamics", "mass and omega1 must be positive");
        const auto lambdas = solve_eigenvalues(n_modes);
        ModalSystem sys{mass, {}, std::move(force)};
        for (double l : lambdas) sys.omegas.push_back(omega1 * (l / lambdas[0]) * (l / lambdas[0]));
        return sys;
    }
};

struct Drive {
    double amplitude = 0.0; // a_D, N
    double omega = 0.0;     // rad/s
    double phase = 0.0;     // rad

    double at(double t) const { return amplitude * std::cos(omega * t + phase); }
};

struct DynamicsConfig {
    std::size_t n_modes = 1;
    std::optional<double> quality; // absent = undamped
    std::optional<Drive> drive;
    double dt = 0.0;
    double t_start = 0.0;
    double t_end = 0.0;
    std::vector<double> q_init; // per mode, m; missing entries are zero
    std::vector<double> v_init; // per mode, m/s
    /// Hold the interaction at full strength (the t >> t0 limit) instead of ramping it.
    bool frozen_force = false;
    /// Keep every stride-th step in the trajectory (the final step is always kept).
    std::size_t stride = 1;

    void validate(const ModalSystem& sys) const {
        constexpr const char* mod = "approach-dynamics";
        detail::require(n_modes >= 1, mod, "n_modes must be at least 1");
        detail::require(sys.omegas.size() >= n_modes, mod, "system provides fewer modes than requested");
        detail::require(dt > 0.0, mod, "dt must be positive");
        detail::require(t_end > t_start, mod, "t_end must exceed t_start");
        detail::require(!quality || *quality > 0.0, mod, "Q must be positive when given");
        detail::require(q_init.size() <= n_modes && v_init.size() <= n_modes, mod,
                        "more initial values than modes");
        detail::require(stride >= 1, mod, "stride must be at least 1");
    }
};

/// Default step: 200 steps per period of the highest retained mode.
inline double default_time_step(const ModalSystem& sys, std::size_t n_modes) {
    return 2.0 * std::numbers::pi / (200.0 * sys.omegas.at(n_modes - 1));
}

struct Diagnostics {
    bool energy_checked = false; // only meaningful for undamped, undriven, time-independent runs
    double energy_drift = 0.0;   // max |E - E0| / oscillation energy scale
    bool stable = true;
};

struct Trajectory {
    std::size_t n_modes = 0;
    std::vector<double> times;
    std::vector<double> modal;         // row-major, n_modes per stored step
    std::vector<double> velocity;      // same layout as modal
    std::vector<double> tip_deflection; // w(L,t) = 2 sum q_n
    std::vector<double> gap;           // z0 + w(L,t)
    std::vector<double> energy;        // kinetic + elastic + interaction
    bool snap_in = false;
    double snap_in_time = std::numeric_limits<double>::quiet_NaN();
    Diagnostics diagnostics;

    std::size_t size() const { return times.size(); }
    double q(std::size_t step, std::size_t mode) const { return modal[step * n_modes + mode]; }
};

inline constexpr double kEnergyDriftLimit = 1e-6;

/// Fixed-step RK4 integration of
///   m q_n'' + (m omega_n / Q) q_n' + m omega_n^2 q_n = 2 [Gamma(t, w) + F_D(t)],  w = 2 sum q_n.
/// Stops (snap_in = true) the first time the gap z0 + w drops to a0 or below.
inline Trajectory integrate(const ModalSystem& sys, const ApproachProtocol& proto, const DynamicsConfig& cfg) {
    constexpr const char* mod = "approach-dynamics";
    cfg.validate(sys);
    proto.validate();
    if (sys.force) sys.force->validate();
    detail::require(sys.mass > 0.0, mod, "modal mass must be positive");

    const std::size_t n = cfg.n_modes;
    const double a0 = sys.force ? sys.force->a0 : 0.0;
    const double alpha = sys.force ? sys.force->alpha() : 0.0;
    const double z0 = proto.z0;

    std::vector<double> y(2 * n, 0.0);
    for (std::size_t i = 0; i < cfg.q_init.size(); ++i) y[i] = cfg.q_init[i];
    for (std::size_t i = 0; i < cfg.v_init.size(); ++i) y[n + i] = cfg.v_init[i];

    auto tip = [n](std::span<const double> s) {
        double w = 0.0;
        for (std::size_t i = 0; i < n; ++i) w += 2.0 * s[i];
        return w;
    };
    auto weight = [&](double t) { return cfg.frozen_force ? 1.0 : proto.switch_on(t); };

    detail::require(!sys.force || z0 + tip(y) > a0, mod, "initial gap must exceed a0");

    bool touched = false;
    auto rhs = [&](double t, std::span<const double> s, std::span<double> ds) {
        double load = cfg.drive ? cfg.drive->at(t) : 0.0;
        if (sys.force) {
            double g = z0 + tip(s);
            if (g <= a0) {
                touched = true;
                g = a0;
            }
            load += -alpha / (g * g) * weight(t);
        }
        const double gen = 2.0 * load / sys.mass;
        for (std::size_t i = 0; i < n; ++i) {
            const double om = sys.omegas[i];
            double acc = -om * om * s[i] + gen;
            if (cfg.quality) acc -= om / *cfg.quality * s[n + i];
            ds[i] = s[n + i];
            ds[n + i] = acc;
        }
    };

    auto energy = [&](double t, std::span<const double> s) {
        double e = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double om = sys.omegas[i];
            e += 0.5 * sys.mass * (s[n + i] * s[n + i] + om * om * s[i] * s[i]);
        }
        if (sys.force) e += -alpha / (z0 + tip(s)) * weight(t);
        return e;
    };

    Trajectory traj;
    traj.n_modes = n;
    auto store = [&](double t, std::span<const double> s) {
        traj.times.push_back(t);
        for (std::size_t i = 0; i < n; ++i) {
            traj.modal.push_back(s[i]);
            traj.velocity.push_back(s[n + i]);
        }
        const double w = tip(s);
        traj.tip_deflection.push_back(w);
        traj.gap.push_back(z0 + w);
        traj.energy.push_back(energy(t, s));
    };

    const auto steps = static_cast<std::size_t>(std::ceil((cfg.t_end - cfg.t_start) / cfg.dt - 1e-9));
    const std::size_t reserve = steps / cfg.stride + 2;
    traj.times.reserve(reserve);
    traj.modal.reserve(reserve * n);
    traj.velocity.reserve(reserve * n);

    const double e0 = energy(cfg.t_start, y);
    double max_dev = 0.0;
    double max_kinetic = 0.0;
    const bool conservative = !cfg.quality && !cfg.drive && (cfg.frozen_force || !sys.force);

    RungeKutta4 stepper(2 * n);
    store(cfg.t_start, y);
    for (std::size_t k = 1; k <= steps; ++k) {
        const double t_prev = cfg.t_start + static_cast<double>(k - 1) * cfg.dt;
        const double t = cfg.t_start + static_cast<double>(k) * cfg.dt;
        stepper.step(rhs, std::span<double>(y), t_prev, cfg.dt);
        if (sys.force && (touched || !(z0 + tip(y) > a0))) {
            traj.snap_in = true;
            traj.snap_in_time = t;
            break;
        }
        if (conservative) {
            max_dev = std::max(max_dev, std::abs(energy(t, y) - e0));
            double kin = 0.0;
            for (std::size_t i = 0; i < n; ++i) kin += 0.5 * sys.mass * y[n + i] * y[n + i];
            max_kinetic = std::max(max_kinetic, kin);
        }
        if (k % cfg.stride == 0 || k == steps) store(t, y);
    }

    if (conservative) {
        traj.diagnostics.energy_checked = true;
        const double scale = max_kinetic > 0.0 ? max_kinetic : std::abs(e0);
        traj.diagnostics.energy_drift = scale > 0.0 ? max_dev / scale : 0.0;
        traj.diagnostics.stable = traj.diagnostics.energy_drift <= kEnergyDriftLimit;
    }
    return traj;
}

/// Statistics of mode 1 over whole cycles after t_from, delimited by upward zero crossings.
struct RingdownStats {
    double omega = 0.0;  // rad/s
    double mean = 0.0;   // m, mean of q_1 over the counted cycles
    std::size_t cycles = 0;
};

inline RingdownStats ringdown_stats(const Trajectory& traj, double t_from = -std::numeric_limits<double>::infinity(),
                                    std::size_t mode = 0) {
    constexpr const char* mod = "approach-dynamics";
    detail::require(mode < traj.n_modes, mod, "mode index out of range");
    std::size_t first = 0;
    while (first < traj.size() && traj.times[first] < t_from) ++first;
    const std::size_t count = traj.size() - first;
    if (count < 3) throw ValidationError(mod, "insufficient data: fewer than 10 cycles after the transient");

    double mean = 0.0;
    for (std::size_t k = first; k < traj.size(); ++k) mean += traj.q(k, mode);
    mean /= static_cast<double>(count);

    std::vector<double> ups;
    for (std::size_t k = first + 1; k < traj.size(); ++k) {
        const double a = traj.q(k - 1, mode) - mean;
        const double b = traj.q(k, mode) - mean;
        if (a < 0.0 && b >= 0.0) {
            const double frac = a / (a - b);
            ups.push_back(traj.times[k - 1] + frac * (traj.times[k] - traj.times[k - 1]));
        }
    }
    if (ups.size() < 11) throw ValidationError(mod, "insufficient data: fewer than 10 cycles after the transient");

    RingdownStats st;
    st.cycles = ups.size() - 1;
    st.omega = 2.0 * std::numbers::pi * static_cast<double>(st.cycles) / (ups.back() - ups.front());

    // Trapezoid mean over [ups.front(), ups.back()].
    double area = 0.0;
    for (std::size_t k = first + 1; k < traj.size(); ++k) {
        const double ta = std::max(traj.times[k - 1], ups.front());
        const double tb = std::min(traj.times[k], ups.back());
        if (tb <= ta) continue;
        const double t0 = traj.times[k - 1], t1 = traj.times[k];
        const double q0 = traj.q(k - 1, mode), q1 = traj.q(k, mode);
        auto lerp = [&](double t) { return q0 + (q1 - q0) * (t - t0) / (t1 - t0); };
        area += 0.5 * (lerp(ta) + lerp(tb)) * (tb - ta);
    }
    st.mean = area / (ups.back() - ups.front());
    return st;
}

/// Dominant angular frequency of q_1 after t_from, by upward zero-crossing counting.
inline double ringdown_frequency(const Trajectory& traj,
                                 double t_from = -std::numeric_limits<double>::infinity()) {
    return ringdown_stats(traj, t_from).omega;
}

/// Least-squares decay time of (energy - baseline) ~ exp(-t / tau) over t >= t_from.
inline double fit_energy_decay_time(const Trajectory& traj, double baseline = 0.0,
                                    double t_from = -std::numeric_limits<double>::infinity()) {
    double st = 0, sy = 0, stt = 0, sty = 0;
    std::size_t cnt = 0;
    const double t_ref = traj.size() ? traj.times.front() : 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        if (traj.times[k] < t_from) continue;
        const double e = traj.energy[k] - baseline;
        if (!(e > 0.0)) continue;
        const double t = traj.times[k] - t_ref;
        const double ly = std::log(e);
        st += t;
        sy += ly;
        stt += t * t;
        sty += t * ly;
        ++cnt;
    }
    detail::require(cnt >= 2, "approach-dynamics", "not enough positive-energy samples to fit a decay");
    const double c = static_cast<double>(cnt);
    const double slope = (c * sty - st * sy) / (c * stt - st * st);
    detail::require(slope < 0.0, "approach-dynamics", "energy does not decay");
    return -1.0 / slope;
}

} // namespace qafm
