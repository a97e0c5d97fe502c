#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "qafm/errors.hpp"
#include "qafm/units.hpp"

namespace qafm {

/// Rectangular cantilever geometry and material.
struct ProbeSpec {
    double length = 100e-6;    // m
    double width = 20e-6;      // m
    double thickness = 3e-6;   // m
    double density = 3.1e3;    // kg/m^3
    double young = 2.5e11;     // Pa
    double tip_mass = 0.0;     // kg, point mass at x = L

    double linear_density() const { return density * width * thickness; }
    double mass() const { return linear_density() * length; }
    double second_moment() const { return width * thickness * thickness * thickness / 12.0; }

    void validate() const {
        constexpr const char* mod = "beam-modes";
        detail::require(length > 0 && width > 0 && thickness > 0 && density > 0 && young > 0, mod,
                        "probe dimensions and material constants must be positive");
        detail::require(thickness <= width && width <= length, mod,
                        "beam ordering thickness <= width <= length violated");
        detail::require(tip_mass >= 0.0, mod, "tip mass must be non-negative");
    }
};

/// Clamped-free spectrum of a given probe.
struct ModeSet {
    std::vector<double> lambdas;
    std::vector<double> gammas; // sigma_n = (sinh - sin)/(cosh + cos) at lambda_n
    std::vector<double> omegas; // rad/s

    std::size_t size() const { return lambdas.size(); }
};

namespace detail {

// cos(x) + sech(x) has the same roots as 1 + cos(x) cosh(x) and stays bounded.
inline double clamped_free_residual(double x) { return std::cos(x) + 1.0 / std::cosh(x); }

} // namespace detail

/// First n roots of 1 + cos(l) cosh(l) = 0. Root k lies in ((k-1) pi, k pi).
inline std::vector<double> solve_eigenvalues(std::size_t n, double root_eps = default_tolerances.root_eps) {
    detail::require(n >= 1, "beam-modes", "need at least one mode");
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t k = 1; k <= n; ++k) {
        double lo = (static_cast<double>(k) - 1.0) * std::numbers::pi;
        double hi = static_cast<double>(k) * std::numbers::pi;
        double flo = detail::clamped_free_residual(lo);
        while (hi - lo > root_eps * hi) {
            const double mid = 0.5 * (lo + hi);
            const double fmid = detail::clamped_free_residual(mid);
            if (fmid == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((fmid > 0) == (flo > 0)) {
                lo = mid;
                flo = fmid;
            } else {
                hi = mid;
            }
        }
        out.push_back(0.5 * (lo + hi));
    }
    return out;
}

/// Mode-shape coefficient sigma_n. The tanh(lambda/2) form agrees only for n = 1.
inline double mode_coefficient(double lambda) {
    return (std::sinh(lambda) - std::sin(lambda)) / (std::cosh(lambda) + std::cos(lambda));
}

inline std::vector<double> eigenfrequencies(const ProbeSpec& spec, std::size_t n) {
    spec.validate();
    const auto lambdas = solve_eigenvalues(n);
    const double stiff = std::sqrt(spec.young * spec.second_moment() / spec.linear_density());
    // Rayleigh correction for the tip point mass; kinetic weight at x = L is 4/L for unit-normalized modes.
    const double mass_factor = 1.0 / std::sqrt(1.0 + 4.0 * spec.tip_mass / spec.mass());
    std::vector<double> out;
    out.reserve(n);
    for (double l : lambdas) {
        const double k = l / spec.length;
        out.push_back(k * k * stiff * mass_factor);
    }
    return out;
}

inline ModeSet compute_modes(const ProbeSpec& spec, std::size_t n) {
    ModeSet set;
    set.lambdas = solve_eigenvalues(n);
    set.omegas = eigenfrequencies(spec, n);
    set.gammas.reserve(n);
    for (double l : set.lambdas) set.gammas.push_back(mode_coefficient(l));
    return set;
}

/// Unit-normalized clamped-free shape X_n(x), units m^{-1/2}. n is 1-based.
///
/// cosh(u) - sigma sinh(u) is evaluated as ((1-sigma) e^u + (1+sigma) e^{-u}) / 2 with
/// 1 - sigma rewritten to avoid cancellation, so high modes stay accurate near the tip.
inline double mode_shape(const ProbeSpec& spec, const ModeSet& modes, std::size_t n, double x) {
    constexpr const char* mod = "beam-modes";
    detail::require(n >= 1 && n <= modes.size(), mod, "mode index out of range");
    detail::require(x >= 0.0 && x <= spec.length, mod, "position outside [0, L]");
    const double lam = modes.lambdas[n - 1];
    const double sigma = modes.gammas[n - 1];
    const double u = lam * x / spec.length;

    const double el = std::exp(-lam);
    const double denom = 1.0 + el * el + 2.0 * std::cos(lam) * el; // 2 e^{-lam} (cosh + cos)
    const double one_minus_sigma_eu = 2.0 * (el + std::cos(lam) + std::sin(lam)) * std::exp(u - lam) / denom;
    const double hyper = 0.5 * (one_minus_sigma_eu + (1.0 + sigma) * std::exp(-u));
    const double trig = -std::cos(u) + sigma * std::sin(u);
    return (hyper + trig) / std::sqrt(spec.length);
}

} // namespace qafm
