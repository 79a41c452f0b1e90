#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <numbers>

#include <eqwalk/analytic.hpp>

using namespace eqwalk;

namespace {

constexpr double kPi = std::numbers::pi;

// Largest r in [0, 2] at which S and T still cross, by bisection on the
// indicator. Returns 0 if they do not cross at r = 0+.
double bisect_rho(double psi, double phi)
{
    double lo = 1e-9, hi = 2.0;
    if (!indicator({lo, psi, phi})) return 0.0;
    if (indicator({hi, psi, phi})) return hi;
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        (indicator({mid, psi, phi}) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST(Rho, DirectValues)
{
    EXPECT_NEAR(rho(kPi / 4, kPi / 2), std::sqrt(2.0) / 2, 1e-15);
    EXPECT_EQ(rho(0.3, -0.7), 0.0);
    EXPECT_EQ(rho(-0.3, 0.7), 0.0);
    EXPECT_EQ(rho(2.0, 2.0), 0.0);
    EXPECT_NEAR(rho(0.01, 0.01), std::sin(0.02) / std::sin(0.01), 1e-15);
}

TEST(Rho, MatchesBisectionOracle)
{
    EXPECT_NEAR(rho(0.4, 1.1), bisect_rho(0.4, 1.1), 1e-9);
    CounterRng rng({17, 0});
    for (int i = 0; i < 2000; ++i) {
        const double psi = rng.uniform() * kPi, phi = rng.uniform() * (kPi - psi);
        if (psi < 1e-3 || phi < 1e-3 || psi + phi > kPi - 1e-3) continue;
        ASSERT_NEAR(rho(psi, phi), bisect_rho(psi, phi), 1e-9) << psi << " " << phi;
    }
}

TEST(Rho, Symmetries)
{
    CounterRng rng({18, 0});
    for (int i = 0; i < 10000; ++i) {
        const double psi = rng.angle() - kPi, phi = rng.angle() - kPi;
        ASSERT_DOUBLE_EQ(rho(psi, phi), rho(phi, psi));
        ASSERT_DOUBLE_EQ(rho(-psi, -phi), rho(psi, phi));
        ASSERT_GE(rho(psi, phi), 0.0);
        ASSERT_LE(rho(psi, phi), 2.0);
    }
}

TEST(Indicator, Examples)
{
    // rho(0.01, 0.01) = sin(0.02)/sin(0.01) = 1.99997, so r = 1.9 still crosses:
    // both segments climb to height 0.01 and meet near x = 0.95.
    EXPECT_TRUE(indicator({1.9, 0.01, 0.01}));
    EXPECT_FALSE(indicator({1.99999, 0.01, 0.01}));
    EXPECT_TRUE(indicator({0.5, kPi / 4, kPi / 4}));
    EXPECT_FALSE(indicator({0.5, 0.3, -0.7}));
}

TEST(Indicator, AgreesWithCriticalGap)
{
    CounterRng rng({19, 0});
    int checked = 0;
    while (checked < 10000) {
        const IntersectionGeometry g{2.0 * rng.uniform(), rng.angle() - kPi, rng.angle() - kPi};
        const double critical = rho(g.psi, g.phi);
        if (std::fabs(g.r - critical) < 1e-9) continue;
        ASSERT_EQ(indicator(g), g.r < critical) << g.r << " " << g.psi << " " << g.phi;
        ++checked;
    }
}

TEST(InnerIntegral, ClosedFormValues)
{
    EXPECT_NEAR(inner_integral(0.0), kPi, 1e-15);
    EXPECT_NEAR(inner_integral(kPi / 2), 0.0, 1e-15);
    EXPECT_NEAR(inner_integral(kPi / 6), kPi / 3 + std::sqrt(3.0) / 2, 1e-14);
    EXPECT_NEAR(inner_integral(kPi / 6), 1.91323, 1e-5);
    EXPECT_THROW(inner_integral(-0.1), std::domain_error);
    EXPECT_THROW(inner_integral(2.0), std::domain_error);
}

TEST(InnerIntegral, QuadratureAgreement)
{
    for (int i = 0; i < 100; ++i) {
        const double psi = 0.5 * kPi * (i / 99.0);
        ASSERT_NEAR(inner_integral(psi), inner_integral_quadrature(psi), 1e-8) << psi;
    }
}

TEST(InnerIntegral, EqualsRhoSquaredIntegral)
{
    // int_psi^{pi-psi} rho^2 dphi, split where max(sin psi, sin phi) switches
    for (double psi : {0.2, 0.7, 1.3}) {
        auto f = [psi](double phi) { return rho(psi, phi) * rho(psi, phi); };
        const double direct = integrate_adaptive_split(f, psi, kPi - psi, {}, 1e-12).value;
        EXPECT_NEAR(direct, inner_integral(psi), 1e-9);
    }
}

TEST(TripleIntegral, EqualsFourByTwoRoutes)
{
    const auto start = std::chrono::steady_clock::now();
    EXPECT_NEAR(triple_integral_J(1e-8), 4.0, 1e-8);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    EXPECT_LT(elapsed, 1.0);
    EXPECT_NEAR(triple_integral_J_from_rho(1e-9), 4.0, 1e-8);
    EXPECT_THROW(triple_integral_J(0.0), std::domain_error);
}

TEST(TripleIntegral, MonteCarlo)
{
    const auto est = triple_integral_J_monte_carlo(10000000, {2023, 0});
    EXPECT_NEAR(est.value, 4.0, 4 * est.std_error);
    EXPECT_LT(est.std_error, 0.01);
}

TEST(Predictions, PairProbability)
{
    EXPECT_NEAR(predicted_pair_probability(100), 0.0020264, 1e-7);
    EXPECT_NEAR(predicted_pair_probability(1), 0.2026, 1e-4);
    EXPECT_THROW(predicted_pair_probability(0), std::domain_error);
}

TEST(Predictions, ParallelSum)
{
    EXPECT_DOUBLE_EQ(parallel_sum(2, 2), 1.0);
    EXPECT_DOUBLE_EQ(parallel_sum(3, 6), 2.0);
    EXPECT_THROW(parallel_sum(0, 1), std::domain_error);
}

TEST(Predictions, MeanIsPositiveAndIncreasing)
{
    double prev = 0.0;
    for (int n = 3; n < 5000; ++n) {
        const double m = predicted_mean(n);
        ASSERT_GT(m, prev);
        prev = m;
    }
    EXPECT_THROW(predicted_mean(2), std::domain_error);
}
