#pragma once

#include <cmath>
#include <string>

#include "qafm/errors.hpp"

namespace qafm {

/// Tip-sample interaction parameters for the vdW-DMT force law.
struct ForceParams {
    double hamaker = 1e-20;     // H, J
    double radius = 1e-8;       // R, m
    double a0 = 0.165e-9;       // onset of repulsion, m
    double young_tip = 150e9;   // Pa
    double young_sample = 150e9;
    double poisson_tip = 0.4;
    double poisson_sample = 0.4;
    /// Half-width of the optional cubic blend around a0, as a fraction of a0. 0 keeps the kink.
    double smoothing = 0.0;

    /// alpha = H R / 6, J m.
    double alpha() const { return hamaker * radius / 6.0; }

    /// Effective tip-sample modulus, 1/E_f = (1-nu_t^2)/E_t + (1-nu_s^2)/E_s.
    double effective_modulus() const {
        return 1.0 / ((1.0 - poisson_tip * poisson_tip) / young_tip +
                      (1.0 - poisson_sample * poisson_sample) / young_sample);
    }

    void validate() const {
        constexpr const char* mod = "force-model";
        detail::require(hamaker > 0.0, mod, "Hamaker constant H must be positive");
        detail::require(radius > 0.0, mod, "tip radius R must be positive");
        detail::require(a0 > 0.0, mod, "a0 must be positive");
        detail::require(young_tip > 0.0 && young_sample > 0.0, mod, "Young moduli must be positive");
        detail::require(poisson_tip >= 0.0 && poisson_tip < 0.5, mod, "tip Poisson ratio must lie in [0, 0.5)");
        detail::require(poisson_sample >= 0.0 && poisson_sample < 0.5, mod,
                        "sample Poisson ratio must lie in [0, 0.5)");
        detail::require(smoothing >= 0.0 && smoothing < 1.0, mod, "smoothing fraction must lie in [0, 1)");
    }
};

/// Sigmoid translation of the probe from z_far to z0 over a timescale t0 around t = 0.
struct ApproachProtocol {
    double t0 = 1e-6;     // s
    double z_far = 100e-9; // m
    double z0 = 1e-9;      // m
    double speed = 1e-5;   // m/s

    void validate() const {
        constexpr const char* mod = "force-model";
        detail::require(t0 > 0.0, mod, "transition time t0 must be positive");
        detail::require(z0 > 0.0, mod, "rest distance z0 must be positive");
        detail::require(z_far > z0, mod, "z_far must exceed z0");
        detail::require(speed > 0.0, mod, "translation speed must be positive");
    }

    /// Fraction of the full interaction switched on at time t.
    double switch_on(double t) const { return 1.0 / (1.0 + std::exp(-t / t0)); }
};

namespace detail {

inline double dmt_branch(const ForceParams& p, double d) {
    const double alpha = p.alpha();
    const double indent = p.a0 - d;
    return -alpha / (p.a0 * p.a0) +
           (4.0 / 3.0) * p.effective_modulus() * std::sqrt(p.radius) * indent * std::sqrt(indent);
}

inline double vdw_branch(const ForceParams& p, double d) { return -p.alpha() / (d * d); }

inline double dmt_branch_slope(const ForceParams& p, double d) {
    return -2.0 * p.effective_modulus() * std::sqrt(p.radius) * std::sqrt(p.a0 - d);
}

} // namespace detail

/// Indentation term of the contact branch, (4/3) E_f sqrt(R) (a0 - d)^{3/2}.
inline double indentation_force(const ForceParams& p, double d) {
    const double indent = p.a0 - d;
    if (indent <= 0.0) return 0.0;
    return (4.0 / 3.0) * p.effective_modulus() * std::sqrt(p.radius) * indent * std::sqrt(indent);
}

/// vdW-DMT force at separation d: -alpha/d^2 above a0, DMT contact branch at or below it.
/// With smoothing > 0 the two branches are joined by a cubic Hermite blend on
/// [a0(1-s), a0(1+s)] matching values and slopes at both ends.
inline double force_static(const ForceParams& p, double d) {
    detail::require(d > 0.0, "force-model", "separation must be positive");
    const double s = p.smoothing;
    if (s > 0.0) {
        const double lo = p.a0 * (1.0 - s);
        const double hi = p.a0 * (1.0 + s);
        if (d > lo && d < hi) {
            const double f0 = detail::dmt_branch(p, lo);
            const double f1 = detail::vdw_branch(p, hi);
            const double h = hi - lo;
            const double m0 = detail::dmt_branch_slope(p, lo) * h;
            const double m1 = 2.0 * p.alpha() / (hi * hi * hi) * h;
            const double u = (d - lo) / h;
            const double u2 = u * u;
            const double u3 = u2 * u;
            return (2 * u3 - 3 * u2 + 1) * f0 + (u3 - 2 * u2 + u) * m0 + (-2 * u3 + 3 * u2) * f1 +
                   (u3 - u2) * m1;
        }
    }
    return d > p.a0 ? detail::vdw_branch(p, d) : detail::dmt_branch(p, d);
}

/// Attractive-regime force at fixed rest distance z0 with tip deflection w_tip.
inline double force_noncontact(const ForceParams& p, double z0, double w_tip) {
    const double gap = z0 + w_tip;
    if (!(gap > p.a0)) {
        throw ContactRegimeError("force-model", "left attractive regime: gap " + std::to_string(gap) +
                                                    " m <= a0 " + std::to_string(p.a0) + " m");
    }
    return -p.alpha() / (gap * gap);
}

/// Non-contact force scaled by the approach sigmoid 1/(1 + exp(-t/t0)).
inline double force_timed(const ForceParams& p, const ApproachProtocol& proto, double w_tip, double t) {
    return force_noncontact(p, proto.z0, w_tip) * proto.switch_on(t);
}

} // namespace qafm
