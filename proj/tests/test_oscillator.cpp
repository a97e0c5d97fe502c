#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qafm/oscillator.hpp"

using namespace qafm;

namespace {

constexpr double kAlpha = 1e-20 * 1e-8 / 6.0;
constexpr double kMass = 3e-11;
constexpr double kOmega1 = 3.1416e6;

EffectiveOscillator at_ratio(double ratio) {
    EffectiveOscillator osc{kMass, kOmega1, 1.0, kAlpha};
    osc.z0 = ratio * osc.z_crit();
    return osc;
}

// Independent closed forms used as oracles.
double qbar_formula(double alpha, double m, double w, double z0) {
    return 2.0 * alpha * z0 / (8.0 * alpha - m * w * w * z0 * z0 * z0);
}

} // namespace

TEST(EffectiveOscillator, CriticalDistance) {
    EffectiveOscillator osc{kMass, kOmega1, 1e-9, kAlpha};
    EXPECT_NEAR(osc.z_crit(), 7.66e-11, 0.005e-11);
    EXPECT_LT(oracle::rel_err(osc.z_crit(), 7.66487779589954407e-11), 1e-4); // omega1 = 3.1416e6 exactly
}

TEST(Reduce, FarFieldLimit) {
    const auto res = reduce(at_ratio(1e4));
    EXPECT_LT(oracle::rel_err(res.omega, kOmega1), 1e-11);
    EXPECT_LT(std::abs(res.q_bar), 1e-12 * 1e4 * at_ratio(1).z0);
    EXPECT_LT(res.r, 1e-11);
    EXPECT_GE(res.r_tilde, 1.0);
}

TEST(Reduce, TwiceCritical) {
    const auto osc = at_ratio(2.0);
    const auto res = reduce(osc);
    EXPECT_LT(oracle::rel_err(res.omega, kOmega1 * std::sqrt(7.0 / 8.0)), 1e-12);
    EXPECT_LT(oracle::rel_err(res.r, 0.0333828481561306558), 1e-11);
    EXPECT_LT(oracle::rel_err(res.q_bar, -osc.z0 / 28.0), 1e-12);
    EXPECT_LT(oracle::rel_err(res.r_tilde, 8.0 / 7.0), 1e-12);
    EXPECT_LT(oracle::rel_err(res.zeta, std::sqrt(osc.mass * res.omega / (2 * hbar)) * res.q_bar), 1e-14);
}

TEST(Reduce, SnapInIsTyped) {
    EXPECT_THROW(reduce(at_ratio(0.9)), SnapInError);
    EXPECT_THROW(reduce(at_ratio(1.0)), SnapInError);
    try {
        reduce(at_ratio(0.5));
    } catch (const SnapInError& e) {
        EXPECT_NE(std::string(e.what()).find("snap-in"), std::string::npos);
        EXPECT_EQ(e.module(), "effective-oscillator");
    }
}

TEST(Reduce, IdentitiesHoldAcrossRandomSample) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> lw(std::log(1e5), std::log(1e7));
    std::uniform_real_distribution<double> lr(std::log(1.01), std::log(1e3));
    for (int i = 0; i < 2000; ++i) {
        EffectiveOscillator osc{kMass, std::exp(lw(rng)), 1.0, kAlpha};
        osc.z0 = std::exp(lr(rng)) * osc.z_crit();
        const auto res = reduce(osc);
        EXPECT_LT(oracle::rel_err(std::exp(2 * res.r) * res.omega, osc.omega1), 1e-9);
        EXPECT_LT(oracle::rel_err(res.omega * res.omega + res.delta * res.delta, osc.omega1 * osc.omega1), 1e-9);
        const double cleared = res.q_bar * (8 * osc.alpha - osc.stiffness() * osc.z0 * osc.z0 * osc.z0);
        EXPECT_LT(oracle::rel_err(cleared, 2 * osc.alpha * osc.z0), 1e-9);
        EXPECT_LT(res.q_bar, 0.0);
        EXPECT_LE(res.omega, osc.omega1);
    }
}

TEST(PotentialExact, Values) {
    const auto osc = at_ratio(5.0);
    EXPECT_DOUBLE_EQ(potential_exact(osc, 0.0), -osc.alpha / osc.z0);
    EXPECT_THROW(potential_exact(osc, -osc.z0 / 2), PhysicsError);
    const double q = 1e3 * osc.z0;
    EXPECT_NEAR(potential_exact(osc, q) / (0.5 * osc.stiffness() * q * q), 1.0, 1e-9);
}

TEST(PotentialExact, GradientMatchesFiniteDifference) {
    const auto osc = at_ratio(3.0);
    for (double s : {-0.2, -0.05, 0.0, 0.1, 0.5}) {
        const double q = s * osc.z0;
        const double fd = oracle::central_diff([&](double x) { return potential_exact(osc, x); }, q, 1e-5 * osc.z0);
        EXPECT_LT(oracle::rel_err(potential_gradient(osc, q), fd), 1e-6) << s;
    }
}

TEST(PotentialExact, StationaryNearQbarToTruncationOrder) {
    const auto osc = at_ratio(10.0);
    const double qb = reduce(osc).q_bar;
    const double h = default_tolerances.fd_eps * osc.z0;
    const double slope = oracle::central_diff([&](double x) { return potential_exact(osc, x); }, qb, h);
    // Residual slope is U'' times the truncation offset, which is O(q_bar^2 / z0).
    const double curvature = osc.stiffness() - 8 * osc.alpha / std::pow(osc.z0, 3);
    EXPECT_LT(std::abs(slope), curvature * 10.0 * qb * qb / osc.z0);
}

TEST(MinimizePotential, WeakCoupling) {
    const auto osc = at_ratio(10.0);
    const double qm = minimize_potential(osc);
    const double qb = reduce(osc).q_bar;
    EXPECT_LT(oracle::rel_err(qm, qb), 0.01);
    // Oracle: plain bisection on the analytic force balance k q (z0 + 2q)^2 + 2 alpha = 0.
    const double root = oracle::bisect(
        [&](double q) { return osc.stiffness() * q * (osc.z0 + 2 * q) * (osc.z0 + 2 * q) + 2 * osc.alpha; },
        -osc.z0 / 6, 0.0);
    EXPECT_LT(oracle::rel_err(qm, root), 1e-9);
}

TEST(MinimizePotential, TwiceCritical) {
    const auto osc = at_ratio(2.0);
    const double qm = minimize_potential(osc);
    const double qb = reduce(osc).q_bar;
    EXPECT_LT(qm, 0.0);
    EXPECT_LT(qb, 0.0);
    // Exact root of s (1 + 2s)^2 = -1/32: q_min = -0.0363406 z0 vs q_bar = -z0/28 (1.76 %).
    EXPECT_LT(oracle::rel_err(qm, qb), 0.25);
    EXPECT_NEAR(qm / osc.z0, -0.03634058007038465, 1e-9);
}

TEST(MinimizePotential, NoForceNoShift) {
    EffectiveOscillator osc{kMass, kOmega1, 1e-9, 0.0};
    EXPECT_EQ(minimize_potential(osc), 0.0);
    osc.alpha = 1e-40;
    EXPECT_LT(std::abs(minimize_potential(osc)), 1e-20);
}

TEST(MinimizePotential, ExactSnapInBeforeTruncatedOne) {
    // The exact potential loses its minimum at z0 = 1.5 z_crit.
    EXPECT_THROW(minimize_potential(at_ratio(1.4)), SnapInError);
    EXPECT_NO_THROW(minimize_potential(at_ratio(1.6)));
    EXPECT_THROW(minimize_potential(at_ratio(0.8)), SnapInError);
}

TEST(CurvatureFrequency, HarmonicLimit) {
    EffectiveOscillator osc{kMass, kOmega1, 1e-9, 0.0};
    for (double q : {-2e-10, 0.0, 3e-10}) EXPECT_LT(oracle::rel_err(curvature_frequency(osc, q), kOmega1), 1e-6);
}

TEST(CurvatureFrequency, AtOriginEqualsClosedForm) {
    for (double ratio : {1.2, 2.0, 5.0, 30.0}) {
        const auto osc = at_ratio(ratio);
        EXPECT_LT(oracle::rel_err(curvature_frequency(osc, 0.0), reduce(osc).omega), 1e-6) << ratio;
    }
}

TEST(CurvatureFrequency, AsymptoticAgreementAtMinimum) {
    const std::pair<double, double> cases[] = {{5.0, 0.05}, {10.0, 0.01}, {50.0, 0.0005}};
    for (auto [ratio, tol] : cases) {
        const auto osc = at_ratio(ratio);
        const auto res = reduce(osc);
        const double qm = minimize_potential(osc);
        EXPECT_LT(oracle::rel_err(curvature_frequency(osc, qm), res.omega), tol) << ratio;
        EXPECT_LT(oracle::rel_err(qm, res.q_bar), tol) << ratio;
    }
}

TEST(CurvatureFrequency, UnstablePoint) {
    const auto osc = at_ratio(2.0);
    // Near the pole the vdW curvature wins.
    EXPECT_THROW(curvature_frequency(osc, -0.45 * osc.z0), PhysicsError);
}

TEST(Sensitivity, DqbarDz0SpotValues) {
    EXPECT_NEAR(sensitivity_dqbar_dz0(at_ratio(1e5)), 0.0, 1e-14);
    EXPECT_LT(oracle::rel_err(sensitivity_dqbar_dz0(at_ratio(2.0)), 17.0 / 196.0), 1e-9);
}

TEST(Sensitivity, DqbarDz0MatchesFiniteDifferences) {
    for (double ratio = 1.2; ratio <= 100.0; ratio *= 1.3) {
        const auto osc = at_ratio(ratio);
        const double h = default_tolerances.fd_eps * osc.z0;
        const double fd =
            (qbar_formula(kAlpha, kMass, kOmega1, osc.z0 + h) - qbar_formula(kAlpha, kMass, kOmega1, osc.z0 - h)) /
            (2 * h);
        EXPECT_LT(oracle::rel_err(sensitivity_dqbar_dz0(osc), fd), 1e-6) << ratio;
    }
}

TEST(Sensitivity, DqbarDalphaRoutesAgree) {
    for (double ratio : {1.2, 2.0, 4.0, 20.0, 100.0}) {
        const auto osc = at_ratio(ratio);
        const auto s = sensitivity_dqbar_dalpha(osc);
        EXPECT_LT(oracle::rel_err(s.finite_difference, s.analytic), 1e-6) << ratio;
        EXPECT_LT(oracle::rel_err(s.rtilde_form, s.analytic), 1e-9) << ratio;
        EXPECT_LT(s.finite_difference, 0.0);
        // The printed expression is not the derivative of q_bar.
        EXPECT_GT(std::abs(s.ratio - 1.0), 0.1) << ratio;
    }
}

TEST(Sensitivity, DqbarDalphaZeroForceLimit) {
    EffectiveOscillator osc{kMass, kOmega1, 1e-9, 0.0};
    const auto s = sensitivity_dqbar_dalpha(osc);
    const double expected = -2.0 / (kMass * kOmega1 * kOmega1 * osc.z0 * osc.z0);
    EXPECT_LT(oracle::rel_err(s.finite_difference, expected), 1e-6);
    EXPECT_LT(oracle::rel_err(s.analytic, expected), 1e-12);
}
