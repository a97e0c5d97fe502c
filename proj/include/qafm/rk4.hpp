#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qafm {

/// Classical fixed-step fourth-order Runge-Kutta stepper.
///
/// System is callable as f(t, std::span<const double> y, std::span<double> dydt).
class RungeKutta4 {
public:
    explicit RungeKutta4(std::size_t n) : tmp_(n), k1_(n), k2_(n), k3_(n), k4_(n) {}

    template <class System>
    void step(System& f, std::span<double> y, double t, double dt) {
        const std::size_t n = y.size();
        const double half = 0.5 * dt;

        f(t, std::span<const double>(y), std::span<double>(k1_));
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + half * k1_[i];

        f(t + half, std::span<const double>(tmp_), std::span<double>(k2_));
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + half * k2_[i];

        f(t + half, std::span<const double>(tmp_), std::span<double>(k3_));
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + dt * k3_[i];

        f(t + dt, std::span<const double>(tmp_), std::span<double>(k4_));
        const double sixth = dt / 6.0;
        for (std::size_t i = 0; i < n; ++i) y[i] += sixth * (k1_[i] + 2.0 * (k2_[i] + k3_[i]) + k4_[i]);
    }

private:
    std::vector<double> tmp_, k1_, k2_, k3_, k4_;
};

} // namespace qafm
