#pragma once

// Bessel functions of the first kind, orders 0 and 1, for real arguments.
//
// Two regimes: the ascending power series (summed in long double to contain
// the cancellation between large alternating terms) below kAsymptoticSwitch,
// and the Hankel asymptotic expansion above it, truncated at its smallest
// term. Both regimes are accurate to about 1e-13 absolute.

#include <cmath>
#include <numbers>

namespace eqwalk {

namespace detail {

inline constexpr double kAsymptoticSwitch = 18.0;

inline long double j0_series(long double x)
{
    const long double q = -0.25L * x * x;
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<long double>(k) * k);
        sum += term;
        if (std::fabs(term) < 1e-22L) break;
    }
    return sum;
}

inline long double j1_series(long double x)
{
    const long double q = -0.25L * x * x;
    long double term = 0.5L * x;
    long double sum = term;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<long double>(k) * (k + 1));
        sum += term;
        if (std::fabs(term) < 1e-22L) break;
    }
    return sum;
}

/// Hankel's P and Q for order nu (nu = 0 or 1), so that
/// J_nu(x) = sqrt(2/(pi x)) (P cos chi - Q sin chi), chi = x - (nu/2 + 1/4) pi.
inline void hankel_pq(int nu, double x, double& p, double& q)
{
    const double mu = 4.0 * nu * nu;
    const double inv8x = 1.0 / (8.0 * x);
    // a_k = prod_{j=1..k} (mu - (2j-1)^2) / (k! (8x)^k)
    double a = 1.0;
    p = 1.0;
    q = 0.0;
    double prev = 1e300;
    for (int k = 1; k < 60; ++k) {
        const double odd = 2.0 * k - 1.0;
        a *= (mu - odd * odd) * inv8x / k;
        const double mag = std::fabs(a);
        if (mag > prev) break;  // asymptotic series has started to diverge
        prev = mag;
        // k odd contributes to Q, k even to P, with alternating signs.
        switch (k % 4) {
        case 1: q += a; break;
        case 2: p -= a; break;
        case 3: q -= a; break;
        case 0: p += a; break;
        }
        if (mag < 1e-17) break;
    }
}

}  // namespace detail

/// J_0(x). Even in x.
inline double bessel_j0(double x)
{
    x = std::fabs(x);
    if (x < detail::kAsymptoticSwitch) {
        return static_cast<double>(detail::j0_series(x));
    }
    double p, q;
    detail::hankel_pq(0, x, p, q);
    const double s = std::sin(x), c = std::cos(x);
    // chi = x - pi/4
    const double cos_chi = (c + s) * std::numbers::sqrt2 * 0.5;
    const double sin_chi = (s - c) * std::numbers::sqrt2 * 0.5;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * cos_chi - q * sin_chi);
}

/// J_1(x). Odd in x; J_1 = -J_0'.
inline double bessel_j1(double x)
{
    const double sign = x < 0.0 ? -1.0 : 1.0;
    x = std::fabs(x);
    if (x < detail::kAsymptoticSwitch) {
        return sign * static_cast<double>(detail::j1_series(x));
    }
    double p, q;
    detail::hankel_pq(1, x, p, q);
    const double s = std::sin(x), c = std::cos(x);
    // chi = x - 3pi/4
    const double cos_chi = (s - c) * std::numbers::sqrt2 * 0.5;
    const double sin_chi = -(s + c) * std::numbers::sqrt2 * 0.5;
    return sign * std::sqrt(2.0 / (std::numbers::pi * x)) * (p * cos_chi - q * sin_chi);
}

}  // namespace eqwalk
