#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <eqwalk/density.hpp>
#include <eqwalk/quadrature.hpp>
#include <eqwalk/sampler.hpp>

#include "stats.hpp"

using namespace eqwalk;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> walk_lengths(int n, int count, std::uint64_t seed)
{
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) {
        const Walk w = sample_walk(n, {seed, static_cast<std::uint64_t>(i)});
        out[i] = norm(w[w.steps()]);
    }
    return out;
}

double fd_error(int n, double r, double h)
{
    const double fd = (kluyver_radial_cdf(n, r + h) - kluyver_radial_cdf(n, r - h)) / (2 * h);
    return std::fabs(fd - kluyver_radial_density(n, r));
}

}  // namespace

TEST(Kluyver, BoundaryValues)
{
    EXPECT_EQ(kluyver_radial_cdf(16, 0.0), 0.0);
    EXPECT_NEAR(kluyver_radial_cdf(16, 16.0), 1.0, 1e-6);
    EXPECT_NEAR(kluyver_radial_cdf(16, 15.999), 1.0, 1e-6);
    EXPECT_NEAR(kluyver_radial_density(16, 17.0), 0.0, 1e-9);
    EXPECT_EQ(kluyver_radial_density(5, 5.5), 0.0);
    EXPECT_GT(kluyver_radial_density(5, 4.9), 0.0);
    EXPECT_THROW(kluyver_radial_cdf(4, 1.0), std::domain_error);
    EXPECT_THROW(kluyver_radial_density(2, 1.0), std::domain_error);
}

TEST(Kluyver, UnitDiskProbabilityIsOneOverNPlusOne)
{
    // Pr[|X_n| <= 1] = 1/(n+1) for every n
    for (int n : {5, 6, 7, 16, 64}) EXPECT_NEAR(kluyver_radial_cdf(n, 1.0), 1.0 / (n + 1), 1e-11) << n;
}

TEST(Kluyver, CdfDensityConsistency)
{
    const double h = 1e-4;
    for (int n : {5, 16, 64}) {
        for (double r : {0.5, 1.0, 2.0, std::sqrt(static_cast<double>(n))}) {
            if (n == 5 && r == 1.0) continue;  // see KinkAtUnitRadiusForFiveSteps
            EXPECT_LT(fd_error(n, r, h), 1e-6) << "n=" << n << " r=" << r;
        }
    }
}

TEST(Kluyver, KinkAtUnitRadiusForFiveSteps)
{
    // f_5 has a jump in its derivative at r = 1, so the central difference of
    // F_5 there converges only linearly in h; away from r = 1 it is quadratic.
    const double e1 = fd_error(5, 1.0, 1e-4), e2 = fd_error(5, 1.0, 5e-5);
    EXPECT_GT(e1, 1e-6);
    EXPECT_NEAR(e1 / e2, 2.0, 0.2);
    const double smooth1 = fd_error(5, 1.5, 2e-3), smooth2 = fd_error(5, 1.5, 1e-3);
    EXPECT_NEAR(smooth1 / smooth2, 4.0, 0.4);
}

TEST(Kluyver, NormalizedDensity)
{
    for (int n : {5, 6, 16, 64}) {
        std::vector<double> breaks;
        for (int k = 1; k < std::min(n, 6); ++k) breaks.push_back(k);
        for (double x = 6.0; x < n; x += 3.0) breaks.push_back(x);
        auto f = [n](double r) { return kluyver_radial_density(n, r); };
        EXPECT_NEAR(integrate_adaptive_split(f, 0.0, n, breaks, 1e-9).value, 1.0, 1e-6) << n;
    }
}

TEST(Kluyver, CdfAgainstSimulation)
{
    const auto lengths = walk_lengths(16, 1000000, 314);
    double hits = 0;
    for (double l : lengths) hits += l <= 2.0;
    const double p = hits / lengths.size();
    const double se = std::sqrt(p * (1 - p) / lengths.size());
    EXPECT_NEAR(kluyver_radial_cdf(16, 2.0), p, 3 * se);
}

TEST(Kluyver, DensityChiSquareFiveSteps)
{
    const int n = 5, bins = 50, count = 1000000;
    const auto lengths = walk_lengths(n, count, 2718);
    std::vector<double> observed(bins), expected(bins);
    for (double l : lengths) observed[std::min(bins - 1, static_cast<int>(l / n * bins))] += 1;
    for (int b = 0; b < bins; ++b) {
        const double lo = static_cast<double>(n) * b / bins, hi = static_cast<double>(n) * (b + 1) / bins;
        expected[b] = count * (kluyver_radial_cdf(n, hi) - kluyver_radial_cdf(n, lo));
    }
    int dof = 0;
    const double stat = eqwalk::testing::chi_square_statistic(observed, expected, &dof);
    EXPECT_GT(eqwalk::testing::chi_square_p(stat, dof), 0.001) << "chi2=" << stat << " dof=" << dof;
}

TEST(Kluyver, LeadingGaussianTerm)
{
    // f_16(4) ~ (2r/n) exp(-r^2/n) = e^{-1}/2, up to the O(1/n^2) correction
    // (scaled by 2 pi r for the radial form).
    const double n = 16, r = 4;
    EXPECT_NEAR(kluyver_radial_density(16, 4.0), 0.5 * std::exp(-1.0), 2 * kPi * r / (n * n));
    EXPECT_NEAR(kluyver_radial_density(16, 4.0), 0.1839, 0.02);
}

TEST(Kluyver, PlanarAndRadialAgree)
{
    for (double r : {0.3, 1.7, 5.0}) {
        EXPECT_NEAR(kluyver_radial_density(16, r), 2 * kPi * r * kluyver_planar_density(16, r), 1e-14);
    }
}

TEST(Gaussian, DirectValues)
{
    EXPECT_DOUBLE_EQ(gaussian_planar_density(7, 0.0), 1.0 / (kPi * 7));
    EXPECT_NEAR(gaussian_planar_density(100, 10.0), std::exp(-1.0) / (100 * kPi), 1e-18);
    EXPECT_THROW(gaussian_planar_density(0, 1.0), std::domain_error);
}

TEST(Gaussian, QuasiGaussianErrorShrinks)
{
    const double e16 = quasi_gaussian_error(16, 401), e32 = quasi_gaussian_error(32, 401);
    EXPECT_GT(e16, e32);
    // O(1/n^2): doubling n cuts the error by roughly four
    EXPECT_NEAR(e16 / e32, 4.0, 1.5);
}

TEST(Watson, NormalizationProbe)
{
    // int_0^inf e^{-x^2} x dx = 1/2: the closed form is e^{-r^2/4a}/(2a).
    EXPECT_NEAR(watson_integral_check(1.0, 0.0).first, 0.5, 1e-12);
    for (double a : {0.5, 1.0, 3.0}) {
        for (double r : {0.0, 1.0, 2.5}) {
            const double y = r * r / (4 * a);
            const auto [first, fifth] = watson_integral_check(a, r);
            EXPECT_NEAR(first, std::exp(-y) / (2 * a), 1e-10);
            // Laguerre form: 2!/(2 a^3) L_2(y) e^{-y}
            EXPECT_NEAR(fifth, (y * y - 4 * y + 2) * std::exp(-y) / (2 * a * a * a), 1e-8) << a << " " << r;
        }
    }
    EXPECT_NEAR(watson_integral_check(1.0, 1.0).second, 0.413737916006684, 1e-8);
}

TEST(Elliptic, CompleteIntegral)
{
    EXPECT_NEAR(elliptic_k_from_complement(1.0), kPi / 2, 1e-15);
    EXPECT_NEAR(elliptic_k_from_complement(0.5), 1.854074677301372, 1e-14);
    EXPECT_NEAR(elliptic_k_from_complement(0.1), 2.578092113348173, 1e-14);
}

TEST(ShortWalks, TwoStepClosedForm)
{
    for (double s = 0.05; s < 1.95; s += 0.01) {
        const double radial = 2.0 / (kPi * std::sqrt(4 - s * s));
        EXPECT_NEAR(two_step_planar_density(s), radial / (2 * kPi * s), 1e-8);
        EXPECT_NEAR(two_step_planar_density(s), 1.0 / (kPi * kPi * s * std::sqrt(4 - s * s)), 1e-12);
    }
    EXPECT_EQ(two_step_planar_density(2.5), 0.0);
}

TEST(ShortWalks, TwoStepLawBySimulation)
{
    // 10^7 two-step walks, radial histogram on (0.05, 1.95)
    const int count = 10000000, bins = 38;
    CounterRng rng({4242, 0});
    std::vector<double> observed(bins), expected(bins);
    for (int i = 0; i < count; ++i) {
        const double s = norm(unit(rng.angle()) + unit(rng.angle()));
        if (s > 0.05 && s < 1.95) observed[static_cast<int>((s - 0.05) / 0.05)] += 1;
    }
    // F_2(s) = (2/pi) asin(s/2)
    for (int b = 0; b < bins; ++b) {
        const double lo = 0.05 + 0.05 * b, hi = lo + 0.05;
        expected[b] = count * 2 / kPi * (std::asin(hi / 2) - std::asin(lo / 2));
    }
    int dof = 0;
    const double stat = eqwalk::testing::chi_square_statistic(observed, expected, &dof);
    EXPECT_GT(eqwalk::testing::chi_square_p(stat, dof), 0.001) << stat;
}

TEST(ShortWalks, ConvolutionChain)
{
    for (double s : {0.0, 0.3, 0.9, 1.2, 2.0, 2.7}) {
        const double conv = convolve_unit_step(two_step_planar_density, 2.0, s, {0.0, 2.0}, 1e-13);
        EXPECT_NEAR(three_step_planar_density(s), conv, 1e-9 * std::max(1.0, conv)) << s;
    }
    for (double s : {0.5, 1.0, 2.2}) {
        const double g5 = convolve_unit_step(four_step_planar_density, 4.0, s, {0.0}, 1e-12);
        EXPECT_NEAR(g5, kluyver_planar_density(5, s), 1e-9) << s;
    }
}

TEST(ShortWalks, NormalizedShortDensities)
{
    auto r3 = [](double s) { return 2 * kPi * s * three_step_planar_density(s); };
    EXPECT_NEAR(integrate_adaptive_split(r3, 0.0, 3.0, {1.0}, 1e-12).value, 1.0, 1e-9);
    auto r4 = [](double s) { return 2 * kPi * s * four_step_planar_density(s); };
    EXPECT_NEAR(integrate_adaptive_split(r4, 0.0, 4.0, {1.0, 2.0}, 1e-9).value, 1.0, 1e-7);
}

TEST(Tables, MassAndAgreement)
{
    for (int m : {2, 3, 4, 5, 16, 32, 64}) {
        const auto t = build_density_table(m);
        EXPECT_EQ(t.n, m);
        EXPECT_NEAR(t.trapezoid_mass(), 1.0, 1e-6) << m;
        EXPECT_GT(t.planar_max, 0.0);
    }
    const auto t = build_density_table(16);
    for (double r : {0.5, 2.0, 4.0, 9.0}) {
        EXPECT_NEAR(t.radial_at(r), kluyver_radial_density(16, r), 1e-5) << r;
    }
    EXPECT_EQ(t.radial_at(-1.0), 0.0);
    EXPECT_EQ(t.radial_at(1000.0), 0.0);
    EXPECT_THROW(build_density_table(1), std::domain_error);
}

TEST(Tables, CacheReturnsSameTable)
{
    auto a = density_tables().get(7);
    auto b = density_tables().get(7);
    EXPECT_EQ(a.get(), b.get());
}
