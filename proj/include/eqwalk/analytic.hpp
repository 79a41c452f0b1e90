#pragma once

// Two unit segments S and T hang off the ends of a chord Q of length r:
// S from the origin at angle psi (counterclockwise from Q), T from (r, 0) at
// angle phi (clockwise from the reversed chord). They cross exactly when
// r <= rho(psi, phi), the critical gap. Integrating r over that region gives
//   J = int int int I(r, psi, phi) r dr dpsi dphi = 4,
// the constant behind the 2 / (pi^2 m) pair-intersection law.

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "geometry.hpp"
#include "quadrature.hpp"
#include "rng.hpp"

namespace eqwalk {

struct IntersectionGeometry {
    double r = 0.0;
    double psi = 0.0;
    double phi = 0.0;
};

/// Critical gap: the segments cross iff r <= rho. For angles of the same
/// sign with |psi| + |phi| < pi, the triangle on Q with base angles psi and
/// phi has legs r sin(phi)/sin(psi+phi) and r sin(psi)/sin(psi+phi), both of
/// which must be <= 1.
inline double rho(double psi, double phi)
{
    if (psi < 0.0 && phi < 0.0) {
        psi = -psi;
        phi = -phi;
    }
    if (!(psi > 0.0 && phi > 0.0)) return 0.0;
    if (psi + phi >= std::numbers::pi) return 0.0;
    const double value = std::sin(psi + phi) / std::max(std::sin(psi), std::sin(phi));
    return std::clamp(value, 0.0, 2.0);
}

inline Segment segment_s(const IntersectionGeometry& g) { return {{0.0, 0.0}, {std::cos(g.psi), std::sin(g.psi)}, 1}; }

inline Segment segment_t(const IntersectionGeometry& g)
{
    return {{g.r, 0.0}, {g.r - std::cos(g.phi), std::sin(g.phi)}, 3};
}

/// Whether S and T cross at interior points of both.
inline bool indicator(const IntersectionGeometry& g)
{
    return segments_properly_intersect(segment_s(g), segment_t(g));
}

/// int_psi^{pi-psi} rho(psi, phi)^2 dphi in closed form, 0 <= psi <= pi/2.
inline double inner_integral(double psi)
{
    if (psi < 0.0 || psi > 0.5 * std::numbers::pi) throw std::domain_error("inner_integral: psi must be in [0, pi/2]");
    return (std::numbers::pi - 2.0 * psi) * std::cos(2.0 * psi) + std::sin(2.0 * psi);
}

/// The same integral by adaptive quadrature of sin^2(phi+psi) / sin^2(phi).
inline double inner_integral_quadrature(double psi, double tol = 1e-12)
{
    if (psi < 0.0 || psi > 0.5 * std::numbers::pi) throw std::domain_error("inner_integral: psi must be in [0, pi/2]");
    auto f = [psi](double phi) {
        const double s = std::sin(phi + psi) / std::sin(phi);
        return s * s;
    };
    return integrate_adaptive(f, psi, std::numbers::pi - psi, tol).value;
}

/// J = 2 int_0^{pi/2} inner_integral(psi) dpsi by adaptive quadrature.
inline double triple_integral_J(double tol = 1e-10)
{
    if (!(tol > 0.0)) throw std::domain_error("triple_integral_J: tol must be positive");
    return 2.0 * integrate_adaptive(inner_integral, 0.0, 0.5 * std::numbers::pi, 0.25 * tol).value;
}

/// J = (1/2) int int rho(psi, phi)^2 over (-pi, pi)^2, nested adaptive
/// quadrature with breaks where rho changes formula.
inline double triple_integral_J_from_rho(double tol = 1e-9)
{
    const double pi = std::numbers::pi;
    auto inner = [&](double psi) {
        auto f = [psi](double phi) {
            const double v = rho(psi, phi);
            return v * v;
        };
        std::vector<double> breaks;
        for (double b : {-pi + std::fabs(psi), -std::fabs(psi), 0.0, std::fabs(psi), pi - std::fabs(psi)}) {
            if (b > -pi && b < pi) breaks.push_back(b);
        }
        std::sort(breaks.begin(), breaks.end());
        return integrate_adaptive_split(f, -pi, pi, breaks, 0.1 * tol).value;
    };
    return 0.5 * integrate_adaptive_split(inner, -pi, pi, {-0.5 * pi, 0.0, 0.5 * pi}, 0.5 * tol).value;
}

struct MonteCarloEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// J by direct Monte Carlo: r ~ U[0, 2], psi, phi ~ U(-pi, pi), so that
/// J = 8 pi^2 E[I(r, psi, phi) r].
inline MonteCarloEstimate triple_integral_J_monte_carlo(long long samples, SeedSpec seed)
{
    if (samples < 2) throw std::invalid_argument("triple_integral_J_monte_carlo: need at least 2 samples");
    CounterRng rng(seed);
    double sum = 0.0, sum2 = 0.0;
    for (long long s = 0; s < samples; ++s) {
        IntersectionGeometry g;
        g.r = 2.0 * rng.uniform();
        g.psi = rng.angle() - std::numbers::pi;
        g.phi = rng.angle() - std::numbers::pi;
        const double x = indicator(g) ? g.r : 0.0;
        sum += x;
        sum2 += x * x;
    }
    const double n = static_cast<double>(samples);
    const double mean = sum / n;
    const double var = std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0));
    const double volume = 8.0 * std::numbers::pi * std::numbers::pi;
    return {volume * mean, volume * std::sqrt(var / n)};
}

/// Leading-order probability that segments separated by an m-step walk cross.
inline double predicted_pair_probability(int m)
{
    if (m < 1) throw std::domain_error("predicted_pair_probability: m must be >= 1");
    return 2.0 / (std::numbers::pi * std::numbers::pi * m);
}

/// v w / (v + w), the variance parameter of two quasi-Gaussian legs in parallel.
inline double parallel_sum(double v, double w)
{
    if (!(v > 0.0 && w > 0.0)) throw std::domain_error("parallel_sum: arguments must be positive");
    return v * w / (v + w);
}

/// Leading term (2/pi^2) n ln n of the expected number of self-intersections.
inline double predicted_mean(int n)
{
    if (n < 3) throw std::domain_error("predicted_mean: n must be >= 3");
    const double x = static_cast<double>(n);
    return 2.0 / (std::numbers::pi * std::numbers::pi) * x * std::log(x);
}

}  // namespace eqwalk
