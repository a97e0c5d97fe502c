#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qafm/oscillator.hpp"
#include "qafm/quantum.hpp"

using namespace qafm;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST(ThermalEnvironment, ZeroTemperature) {
    const auto env = ThermalEnvironment::at(kTwoPi * 1e6, 0.0);
    EXPECT_EQ(env.beta, 0.0);
    EXPECT_EQ(env.beta_plus, 1.0);
    EXPECT_EQ(env.beta_minus, 1.0);
}

TEST(ThermalEnvironment, BetaFactors) {
    for (double T : {1e-4, 1e-3, 0.01, 0.1, 1.0, 300.0}) {
        const auto env = ThermalEnvironment::at(kTwoPi * 1e6, T);
        EXPECT_GE(env.beta, 0.0);
        EXPECT_LT(env.beta, 1.0);
        EXPECT_GE(env.beta_plus, 1.0);
        EXPECT_LE(env.beta_minus, 1.0);
        EXPECT_NEAR(env.beta_plus * env.beta_minus, 1.0, 1e-9);
        EXPECT_LT(oracle::rel_err(env.beta_plus, (1 + env.beta) / (1 - env.beta)), 1e-9) << T;
    }
    EXPECT_THROW(ThermalEnvironment::at(kTwoPi * 1e6, -1.0), ValidationError);
}

TEST(ThermalOccupation, MegahertzAtTenMillikelvin) {
    const auto n = thermal_occupation(kTwoPi * 1e6, 0.01);
    EXPECT_NEAR(n.approximate, 208.366191360946, 1e-9);
    EXPECT_NEAR(n.approximate, 220.0, 22.0);
    // Exact Bose value sits half a quantum below k_B T / hbar omega at high T.
    EXPECT_NEAR(n.bose, n.approximate - 0.5, 1e-2);
}

TEST(ThermalOccupation, ZeroAndLinearity) {
    const auto z = thermal_occupation(1e6, 0.0);
    EXPECT_EQ(z.approximate, 0.0);
    EXPECT_EQ(z.bose, 0.0);
    const double a = thermal_occupation(1e6, 0.02).approximate;
    const double b = thermal_occupation(1e6, 0.04).approximate;
    EXPECT_LT(oracle::rel_err(b, 2 * a), 1e-14);
}

TEST(ZeroPointSpread, Values) {
    EXPECT_LT(oracle::rel_err(zero_point_spread(3e-11, kTwoPi * 1e6), 7.47975751658995e-16), 1e-12);
    EXPECT_LT(oracle::rel_err(zero_point_spread(4 * 3e-11, 1e6), 0.5 * zero_point_spread(3e-11, 1e6)), 1e-14);
}

TEST(ZeroPointSpread, NearSurfaceScaling) {
    const double w1 = kTwoPi * 1e6;
    EXPECT_LT(oracle::rel_err(zero_point_spread(3e-11, w1 / 4), 2 * zero_point_spread(3e-11, w1)), 1e-14);
}

TEST(FreeQuadratures, GroundStateUnitCoupling) {
    const auto env = ThermalEnvironment::at(1e6, 0.0);
    const auto s = free_quadratures(env, 1.0);
    EXPECT_NEAR(s.dX1, std::sqrt(1.0 / 3.0), 1e-15);
    EXPECT_NEAR(s.dX2, std::sqrt(3.0) / 2.0, 1e-15);
    EXPECT_NEAR(s.product(), 0.5, 1e-15);
    EXPECT_EQ(s.r, 0.0);
}

TEST(FreeQuadratures, DecoupledMatchesThermalState) {
    const double w1 = kTwoPi * 1e6;
    const auto env = ThermalEnvironment::at(w1, 0.01);
    const auto s = free_quadratures(env, 0.0);
    EXPECT_DOUBLE_EQ(s.dX1, s.dX2);
    const double nbar = thermal_occupation(w1, 0.01).bose;
    EXPECT_LT(oracle::rel_err(s.dX1, std::sqrt((2 * nbar + 1) / 2)), 1e-9);
}

TEST(FreeQuadratures, StrongCouplingApproachesMinimumUncertainty) {
    const auto env = ThermalEnvironment::at(kTwoPi * 1e6, 0.01);
    const auto s = free_quadratures(env, 1e4);
    EXPECT_LT(s.dX1, 1e-3);
    EXPECT_GT(s.dX2, 1e3);
    EXPECT_NEAR(s.product(), 0.5, 1e-6);
    EXPECT_THROW(free_quadratures(env, -1.0), ValidationError);
}

TEST(FreeQuadratures, UncertaintyBoundProperty) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> lt(std::log(1e-5), std::log(10.0));
    std::uniform_real_distribution<double> lc(std::log(1e-4), std::log(1e3));
    std::uniform_real_distribution<double> ur(0.0, 5.0);
    for (int i = 0; i < 5000; ++i) {
        const auto env = ThermalEnvironment::at(kTwoPi * 1e6, std::exp(lt(rng)));
        const double chi = std::exp(lc(rng));
        const auto f = free_quadratures(env, chi);
        EXPECT_GT(f.product(), 0.5 - 1e-9);
        const auto sq = apply_squeezing(f, ur(rng));
        EXPECT_LT(oracle::rel_err(sq.product(), f.product()), 1e-12);
        const auto ground = free_quadratures(ThermalEnvironment::at(kTwoPi * 1e6, 0.0), chi);
        EXPECT_NEAR(ground.product(), 0.5, 5e-10);
    }
}

TEST(FreeQuadratures, UncertaintyExcess) {
    const double w = kTwoPi * 1e6;
    EXPECT_EQ(uncertainty_excess(ThermalEnvironment::at(w, 0.0), 3.0), 0.0);
    for (double T : {1e-3, 0.01, 1.0, 300.0}) {
        const auto env = ThermalEnvironment::at(w, T);
        for (double chi : {0.0, 0.01, 0.5, 1.0, 7.0, 1e3, 1e5}) {
            const double ex = uncertainty_excess(env, chi);
            EXPECT_GT(ex, 0.0) << T << " " << chi;
            // Direct difference, where it still resolves the excess.
            const double direct = free_quadratures(env, chi).product() - 0.5;
            if (direct > 1e-10) {
                EXPECT_LT(oracle::rel_err(ex, direct), 1e-5) << T << " " << chi;
            }
            EXPECT_NEAR(direct, ex, 1e-15 * (0.5 + ex));
        }
    }
}

TEST(FreeQuadratures, MonotoneInCouplingAboveOne) {
    for (double T : {0.0, 0.001, 0.01, 1.0}) {
        const auto env = ThermalEnvironment::at(kTwoPi * 1e6, T);
        double prev = free_quadratures(env, 1.0).dX1;
        for (double chi = 1.05; chi < 1e3; chi *= 1.05) {
            const double v = free_quadratures(env, chi).dX1;
            EXPECT_LE(v, prev * (1 + 1e-15)) << T << " " << chi;
            prev = v;
        }
    }
}

TEST(ApplySqueezing, Basics) {
    const auto f = free_quadratures(ThermalEnvironment::at(1e6, 0.0), 1.0);
    const auto id = apply_squeezing(f, 0.0);
    EXPECT_EQ(id.dX1, f.dX1);
    EXPECT_EQ(id.dX2, f.dX2);
    const auto s = apply_squeezing(f, 0.5);
    EXPECT_NEAR(s.dX1, 0.5774 * std::exp(-0.5), 1e-4);
    EXPECT_NEAR(s.dX1, 0.3502, 1e-4);
    EXPECT_EQ(s.r, 0.5);
    EXPECT_THROW(apply_squeezing(f, -0.1), ValidationError);
}

TEST(Homodyne, Angles) {
    QuadratureState s{0.3, 1.7, 1.0, 0.2};
    EXPECT_DOUBLE_EQ(homodyne_variance(s, 0.0), 0.3);
    EXPECT_NEAR(homodyne_variance(s, std::numbers::pi / 2), 1.7, 1e-15);
    QuadratureState iso{0.8, 0.8, 0.0, 0.0};
    EXPECT_NEAR(homodyne_variance(iso, std::numbers::pi / 4), 0.8, 1e-15);
    for (double th = -4.0; th < 4.0; th += 0.01) {
        const double v = homodyne_variance(s, th);
        EXPECT_GE(v, 0.3);
        EXPECT_LE(v, 1.7);
    }
}

TEST(Lifetime, Values) {
    EXPECT_DOUBLE_EQ(squeezing_lifetime(1e4, 1e6), 1e-2);
    EXPECT_DOUBLE_EQ(squeezing_lifetime(2e4, 1e6), 2e-2);
    EXPECT_NEAR(squeezing_lifetime(1e4, kTwoPi * 0.5e6), 3.18309886183791e-3, 1e-15);
    EXPECT_THROW(squeezing_lifetime(0.0, 1e6), ValidationError);
}

TEST(Bogoliubov, Coefficients) {
    const auto [c0, s0] = bogoliubov_coeffs(0.0);
    EXPECT_EQ(c0, 1.0);
    EXPECT_EQ(s0, 0.0);
    for (double r = 0.0; r <= 10.0; r += 0.25) {
        const auto [c, s] = bogoliubov_coeffs(r);
        // Relative to the size of the cancelling terms; at r = 10 they are ~1e8.
        EXPECT_LT(std::abs(c * c - s * s - 1.0) / (c * c), 1e-9) << r;
    }
    EXPECT_THROW(bogoliubov_coeffs(-1.0), ValidationError);
}

TEST(Bogoliubov, RoundTripThroughReduction) {
    EffectiveOscillator osc{3e-11, 3.1416e6, 1.0, 1e-20 * 1e-8 / 6};
    for (double ratio : {1.05, 1.5, 3.0, 20.0}) {
        osc.z0 = ratio * osc.z_crit();
        const auto red = reduce(osc);
        const auto [c, s] = bogoliubov_coeffs(red.r);
        EXPECT_LT(oracle::rel_err(c + s, std::sqrt(osc.omega1 / red.omega)), 1e-9) << ratio;
    }
}
