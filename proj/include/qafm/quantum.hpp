#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "qafm/errors.hpp"
#include "qafm/units.hpp"

namespace qafm {

/// Thermal state of the free probe at temperature T.
///
/// beta = exp(-hbar omega1 / k_B T); beta_plus = (1+beta)/(1-beta) equals 2<n>+1
/// for the exact Bose occupancy, and beta_minus is its reciprocal.
struct ThermalEnvironment {
    double temperature = 0.0; // K
    double beta = 0.0;
    double beta_plus = 1.0;
    double beta_minus = 1.0;

    static ThermalEnvironment at(double omega1, double temperature) {
        constexpr const char* mod = "quantum-squeezing";
        detail::require(omega1 > 0.0, mod, "omega1 must be positive");
        detail::require(temperature >= 0.0, mod, "temperature must be non-negative");
        ThermalEnvironment env;
        env.temperature = temperature;
        if (temperature == 0.0) return env;
        const double x = hbar * omega1 / (k_B * temperature);
        env.beta = std::exp(-x);
        // (1+e^{-x})/(1-e^{-x}) = coth(x/2); tanh keeps both factors accurate for small x.
        env.beta_minus = std::tanh(0.5 * x);
        env.beta_plus = 1.0 / env.beta_minus;
        return env;
    }
};

/// Quadrature spreads in the 1/sqrt(2) convention: vacuum has 1/sqrt(2) per quadrature.
struct QuadratureState {
    double dX1 = 0.0;
    double dX2 = 0.0;
    double chi = 0.0;
    double r = 0.0;

    double product() const { return dX1 * dX2; }
};

struct Occupation {
    double approximate = 0.0; // k_B T / (hbar omega1)
    double bose = 0.0;        // 1 / (exp(hbar omega1 / k_B T) - 1)
};

inline Occupation thermal_occupation(double omega1, double temperature) {
    constexpr const char* mod = "quantum-squeezing";
    detail::require(omega1 > 0.0, mod, "omega1 must be positive");
    detail::require(temperature >= 0.0, mod, "temperature must be non-negative");
    if (temperature == 0.0) return {};
    const double x = hbar * omega1 / (k_B * temperature);
    return {1.0 / x, 1.0 / std::expm1(x)};
}

/// Ground-state displacement scale sqrt(hbar / (m omega)).
inline double zero_point_spread(double mass, double omega) {
    detail::require(mass > 0.0 && omega > 0.0, "quantum-squeezing", "mass and frequency must be positive");
    return std::sqrt(hbar / (mass * omega));
}

/// Free-probe quadrature uncertainties with cavity coupling chi.
inline QuadratureState free_quadratures(const ThermalEnvironment& env, double chi) {
    detail::require(chi >= 0.0, "quantum-squeezing", "coupling chi must be non-negative");
    const double c = chi * chi;
    const double c2 = c * c;
    QuadratureState s;
    s.chi = chi;
    s.dX1 = std::sqrt((c + env.beta_plus) / (2.0 * (1.0 + env.beta_plus * c + c2)));
    s.dX2 = std::sqrt((1.0 + env.beta_minus * c + c2) / (2.0 * (c + env.beta_minus)));
    return s;
}

/// dX1 dX2 - 1/2 for free_quadratures(env, chi), without the cancellation of the direct difference.
/// (2 dX1 dX2)^2 - 1 = (beta_plus - beta_minus) / ((1 + beta_plus c + c^2)(c + beta_minus)), c = chi^2.
/// Squeezing leaves the product, and so this excess, unchanged.
inline double uncertainty_excess(const ThermalEnvironment& env, double chi) {
    detail::require(chi >= 0.0, "quantum-squeezing", "coupling chi must be non-negative");
    const double c = chi * chi;
    const double d = (1.0 + env.beta_plus * c + c * c) * (c + env.beta_minus);
    const double p = free_quadratures(env, chi).product();
    return (env.beta_plus - env.beta_minus) / (4.0 * d * (p + 0.5));
}

/// Quadratures after the sudden transition: X1 shrinks by e^{-r}, X2 grows by e^{r}.
inline QuadratureState apply_squeezing(const QuadratureState& free, double r) {
    detail::require(r >= 0.0, "quantum-squeezing", "squeezing parameter must be non-negative");
    QuadratureState s = free;
    s.dX1 = std::exp(-r) * free.dX1;
    s.dX2 = std::exp(r) * free.dX2;
    s.r = r;
    return s;
}

/// Spread of the quadrature selected by local-oscillator phase theta.
/// The X1-X2 covariance is taken as zero.
inline double homodyne_variance(const QuadratureState& s, double theta) {
    const double c = std::cos(theta);
    const double sn = std::sin(theta);
    const double v = std::sqrt(c * c * s.dX1 * s.dX1 + sn * sn * s.dX2 * s.dX2);
    // Rounding can push v a hair outside [min, max] near theta = 0 or pi/2.
    return std::clamp(v, std::min(s.dX1, s.dX2), std::max(s.dX1, s.dX2));
}

/// tau = Q / omega1; the squeezed-state lifetime is taken to be of the same order.
inline double squeezing_lifetime(double quality, double omega1) {
    detail::require(quality > 0.0 && omega1 > 0.0, "quantum-squeezing", "Q and omega1 must be positive");
    return quality / omega1;
}

/// (cosh r, sinh r) of b1 = cosh r (a + zeta) + sinh r (a^dagger + zeta).
inline std::pair<double, double> bogoliubov_coeffs(double r) {
    detail::require(r >= 0.0, "quantum-squeezing", "squeezing parameter must be non-negative");
    return {std::cosh(r), std::sinh(r)};
}

} // namespace qafm
