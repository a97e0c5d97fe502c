#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "qafm/errors.hpp"
#include "qafm/units.hpp"

namespace qafm {

/// Single-mode reduction of the probe near the surface. The tip weight
/// sqrt(L) X_1(L) = 2 is built into every expression here.
struct EffectiveOscillator {
    double mass = 3e-11;      // kg
    double omega1 = 2.0 * std::numbers::pi * 1e6; // rad/s
    double z0 = 1e-9;         // m
    double alpha = 1e-20 * 1e-8 / 6.0; // J m

    void validate() const {
        constexpr const char* mod = "effective-oscillator";
        detail::require(mass > 0.0, mod, "mass must be positive");
        detail::require(omega1 > 0.0, mod, "omega1 must be positive");
        detail::require(z0 > 0.0, mod, "z0 must be positive");
        detail::require(alpha >= 0.0, mod, "alpha must be non-negative");
    }

    double stiffness() const { return mass * omega1 * omega1; }

    /// delta^2 = 8 alpha / (m z0^3).
    double softening_sq() const { return 8.0 * alpha / (mass * z0 * z0 * z0); }

    /// Rest distance below which the softened frequency is imaginary.
    double z_crit() const { return std::cbrt(8.0 * alpha / stiffness()); }

    bool oscillates() const { return z0 > z_crit(); }
};

struct ReductionResult {
    double omega = 0.0;   // Omega, rad/s
    double delta = 0.0;   // sqrt(8 alpha / m z0^3), rad/s
    double q_bar = 0.0;   // m
    double r = 0.0;       // squeezing parameter, e^{2r} = omega1/Omega
    double r_tilde = 1.0; // e^{4r}
    double zeta = 0.0;    // coherent displacement sqrt(m Omega / 2 hbar) q_bar
};

namespace detail {

inline void require_oscillating(const EffectiveOscillator& osc) {
    osc.validate();
    if (!osc.oscillates()) {
        throw SnapInError("effective-oscillator",
                          "snap-in: z0 " + std::to_string(osc.z0) + " m <= z_crit " +
                              std::to_string(osc.z_crit()) + " m, oscillation suppressed");
    }
}

} // namespace detail

/// Equilibrium shift from the quadratic expansion, 2 alpha z0 / (8 alpha - m omega1^2 z0^3).
inline double equilibrium_shift(const EffectiveOscillator& osc) {
    return 2.0 * osc.alpha * osc.z0 / (8.0 * osc.alpha - osc.stiffness() * osc.z0 * osc.z0 * osc.z0);
}

inline ReductionResult reduce(const EffectiveOscillator& osc) {
    detail::require_oscillating(osc);
    ReductionResult res;
    const double d2 = osc.softening_sq();
    res.delta = std::sqrt(d2);
    const double omega_sq = osc.omega1 * osc.omega1 - d2;
    if (!(omega_sq > 0.0)) {
        throw SnapInError("effective-oscillator", "snap-in: softened frequency is not real");
    }
    res.omega = std::sqrt(omega_sq);
    res.q_bar = equilibrium_shift(osc);
    res.r = 0.5 * std::log(osc.omega1 / res.omega);
    res.r_tilde = osc.omega1 * osc.omega1 / omega_sq;
    res.zeta = std::sqrt(osc.mass * res.omega / (2.0 * hbar)) * res.q_bar;
    return res;
}

/// U(q) = m omega1^2 q^2 / 2 - alpha / (z0 + 2q).
inline double potential_exact(const EffectiveOscillator& osc, double q) {
    const double gap = osc.z0 + 2.0 * q;
    if (!(gap > 0.0)) throw PhysicsError("effective-oscillator", "potential pole: z0 + 2q <= 0");
    return 0.5 * osc.stiffness() * q * q - osc.alpha / gap;
}

/// dU/dq of potential_exact.
inline double potential_gradient(const EffectiveOscillator& osc, double q) {
    const double gap = osc.z0 + 2.0 * q;
    if (!(gap > 0.0)) throw PhysicsError("effective-oscillator", "potential pole: z0 + 2q <= 0");
    return osc.stiffness() * q + 2.0 * osc.alpha / (gap * gap);
}

/// Local minimum of potential_exact on the attractive side of the pole.
///
/// Scans dU/dq for a - to + sign change on (-z0/2 + margin, z0), then bisects
/// to root_eps * z0. Throws SnapInError when the exact potential has no interior
/// minimum (this happens already for z0 <= 1.5 z_crit).
inline double minimize_potential(const EffectiveOscillator& osc, const Tolerances& tol = default_tolerances) {
    detail::require_oscillating(osc);
    if (osc.alpha == 0.0) return 0.0;

    const double lo_edge = -0.5 * osc.z0 * (1.0 - 1e-6);
    const double hi_edge = osc.z0;
    constexpr int kScan = 4096;
    // Scan from the far side toward the pole so the first bracket is the stable branch.
    double right = hi_edge;
    double g_right = potential_gradient(osc, right);
    for (int i = 1; i <= kScan; ++i) {
        const double left = hi_edge - (hi_edge - lo_edge) * static_cast<double>(i) / kScan;
        const double g_left = potential_gradient(osc, left);
        if (g_left < 0.0 && g_right > 0.0) {
            double a = left, b = right;
            while (b - a > tol.root_eps * osc.z0) {
                const double mid = 0.5 * (a + b);
                if (potential_gradient(osc, mid) < 0.0) a = mid; else b = mid;
            }
            return 0.5 * (a + b);
        }
        right = left;
        g_right = g_left;
    }
    throw SnapInError("effective-oscillator", "snap-in: exact potential has no interior minimum");
}

/// Oscillation frequency from the central second difference of potential_exact at q_at.
inline double curvature_frequency(const EffectiveOscillator& osc, double q_at,
                                  const Tolerances& tol = default_tolerances) {
    osc.validate();
    // Second differences need a larger step than first differences to beat rounding.
    const double h = std::sqrt(tol.fd_eps) * 0.1 * osc.z0;
    const double u_p = potential_exact(osc, q_at + h);
    const double u_0 = potential_exact(osc, q_at);
    const double u_m = potential_exact(osc, q_at - h);
    const double curvature = (u_p - 2.0 * u_0 + u_m) / (h * h);
    if (!(curvature > 0.0)) throw PhysicsError("effective-oscillator", "unstable point: negative curvature");
    return std::sqrt(curvature / osc.mass);
}

/// Closed-form d q_bar / d z0 at fixed alpha, (1 - 4 r~ + 3 r~^2)/4.
inline double sensitivity_dqbar_dz0(const EffectiveOscillator& osc) {
    const double rt = reduce(osc).r_tilde;
    return 0.25 * (1.0 - 4.0 * rt + 3.0 * rt * rt);
}

struct AlphaSensitivity {
    double finite_difference = 0.0; // ground truth, central difference of equilibrium_shift
    double analytic = 0.0;          // -2 m omega1^2 z0^4 / (8 alpha - m omega1^2 z0^3)^2
    double rtilde_form = 0.0;       // -[r~^4 (r~-1)^2 / (8 m alpha^2 omega1^2)]^{1/3}
    double printed_form = 0.0;      // [r~ (r~-1)^2 / (216 m alpha^2 omega1^2)]^{1/3}
    double ratio = 0.0;             // printed_form / finite_difference
};

/// d q_bar / d alpha at fixed z0, reported several ways. The printed r~/216
/// expression does not match direct differentiation; it is kept for comparison only.
inline AlphaSensitivity sensitivity_dqbar_dalpha(const EffectiveOscillator& osc,
                                                 const Tolerances& tol = default_tolerances) {
    const auto red = reduce(osc);
    AlphaSensitivity s;
    const double k = osc.stiffness();
    const double z3 = osc.z0 * osc.z0 * osc.z0;
    // Step relative to alpha, or to the snap-in scale k z0^3 / 8 when alpha vanishes.
    const double h = tol.fd_eps * (osc.alpha > 0.0 ? osc.alpha : 0.125 * k * z3);
    EffectiveOscillator up = osc, down = osc;
    up.alpha += h;
    down.alpha -= h;
    s.finite_difference = (equilibrium_shift(up) - equilibrium_shift(down)) / (2.0 * h);

    const double den = 8.0 * osc.alpha - k * z3;
    s.analytic = -2.0 * k * z3 * osc.z0 / (den * den);

    const double rt = red.r_tilde;
    const double a2k = osc.alpha * osc.alpha * k;
    s.rtilde_form = -std::cbrt(rt * rt * rt * rt * (rt - 1.0) * (rt - 1.0) / (8.0 * a2k));
    s.printed_form = std::cbrt(rt * (rt - 1.0) * (rt - 1.0) / (216.0 * a2k));
    s.ratio = s.printed_form / s.finite_difference;
    return s;
}

} // namespace qafm
