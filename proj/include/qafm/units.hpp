#pragma once

#include <numbers>

#include "qafm/errors.hpp"

namespace qafm {

// CODATA 2018 exact values.
struct PhysicalConstants {
    static constexpr double hbar = 1.054571817e-34; // J s
    static constexpr double k_B = 1.380649e-23;     // J/K
};

inline constexpr double hbar = PhysicalConstants::hbar;
inline constexpr double k_B = PhysicalConstants::k_B;

struct Tolerances {
    double rel_eps = 1e-9;   // closed-form identities
    double fd_eps = 1e-6;    // finite-difference step, relative
    double root_eps = 1e-12; // root finding, relative
};

inline constexpr Tolerances default_tolerances{};

inline constexpr double nanometer = 1e-9;

/// Internal frequencies are angular (rad/s); cyclic input goes through here.
inline double angular_from_cyclic(double hz) {
    detail::require(hz >= 0.0, "core-units", "frequency must be non-negative, got " + std::to_string(hz) + " Hz");
    return 2.0 * std::numbers::pi * hz;
}

inline double cyclic_from_angular(double rad_s) { return rad_s / (2.0 * std::numbers::pi); }

inline double meters_from_nm(double nm) { return nm * nanometer; }

} // namespace qafm
