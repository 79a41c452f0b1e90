#pragma once

// Distribution of the endpoint of an n-step planar equilateral walk.
//
//   radial CDF       F_n(r) = r * int_0^inf J1(r x) J0(x)^n dx
//   radial density   f_n(r) = r * int_0^inf J0(r x) J0(x)^n x dx
//   planar density   g_n(r) = f_n(r) / (2 pi r)
//
// The integrals are summed on Gauss-Legendre panels out to a cutoff X. When a
// rigorous envelope bound on |J0| certifies that everything beyond X is below
// kTailTolerance, that is the whole computation. For small n the envelope only
// decays like a low power of x, so beyond X the integrand is replaced by its
// two-term Hankel expansion, which is a finite sum of x^-p e^{i w x} terms
// whose tails are integrated in closed form (series) or on a log-spaced grid.
//
// Short walks (n <= 4) use closed forms or exact one-step convolution; their
// densities have integrable singularities the Bessel integrals handle badly.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bessel.hpp"
#include "quadrature.hpp"

namespace eqwalk {

inline constexpr double kTailTolerance = 1e-13;

namespace detail {

using cplx = std::complex<double>;

/// int_X^inf x^-p e^{i w x} dx for p > 1.
inline cplx power_oscillatory_tail(double p, double w, double X)
{
    if (w == 0.0) return cplx(std::pow(X, 1.0 - p) / (p - 1.0), 0.0);
    const double aw = std::fabs(w);
    // Integration-by-parts series at a point Y with |w| Y large:
    //   -(e^{iwY} / (iw)) Y^-p sum_k (p)_k / (iwY)^k
    auto series = [p, w](double Y) {
        const cplx iwY(0.0, w * Y);
        cplx term(1.0, 0.0), sum(1.0, 0.0);
        double last = 1.0;
        for (int k = 1; k < 80; ++k) {
            term *= (p + k - 1.0) / iwY;
            const double mag = std::abs(term);
            if (mag > last) break;
            last = mag;
            sum += term;
            if (mag < 1e-18) break;
        }
        return -std::exp(cplx(0.0, w * Y)) / cplx(0.0, w) * std::pow(Y, -p) * sum;
    };
    constexpr double kSeriesStart = 40.0;
    if (aw * X >= kSeriesStart) return series(X);
    const double Y = kSeriesStart / aw;
    const GaussLegendreRule& gl = gauss_legendre_16();
    cplx acc(0.0, 0.0);
    const double quarter_period = 0.5 * std::numbers::pi / aw;
    for (double lo = X; lo < Y;) {
        const double hi = std::min({Y, lo + lo, lo + quarter_period});
        const double re = gl.integrate([&](double x) { return std::pow(x, -p) * std::cos(w * x); }, lo, hi);
        const double im = gl.integrate([&](double x) { return std::pow(x, -p) * std::sin(w * x); }, lo, hi);
        acc += cplx(re, im);
        lo = hi;
    }
    return acc + series(Y);
}

enum class KluyverKind { density, cdf };

/// Tail beyond X of int x^q J_nu(r x) J0(x)^n dx from the two-term Hankel
/// expansion of every Bessel factor (nu = 0, q = 1 for the density; nu = 1,
/// q = 0 for the CDF). r == 0 drops the J_nu(r x) factor (nu = 0 only).
inline double kluyver_asymptotic_tail(KluyverKind kind, int n, double r, double X)
{
    const bool has_r = r > 0.0;
    const int nu = kind == KluyverKind::density ? 0 : 1;
    const double q = kind == KluyverKind::density ? 1.0 : 0.0;
    const int factors = n + (has_r ? 1 : 0);
    // Each factor: sqrt(2/(pi y)) * 1/2 * sum_s (1 - i s a(y)) e^{i s chi(y)},
    // a(y) = 1/(8y) for J0 and -3/(8y) for J1.
    const double amplitude = std::pow(2.0 / std::numbers::pi, 0.5 * factors) * std::pow(0.5, factors) *
                             (has_r ? 1.0 / std::sqrt(r) : 1.0);
    const double p0 = 0.5 * factors - q;
    const double kappa = nu == 0 ? 1.0 : -3.0;
    cplx sum(0.0, 0.0);
    double binom = 1.0;
    for (int k = 0; k <= n; ++k) {
        if (k > 0) binom *= static_cast<double>(n - k + 1) / k;
        const int spin = 2 * k - n;
        for (int s0 : {-1, 1}) {
            if (!has_r && s0 == 1) continue;
            const double sr = has_r ? s0 : 0.0;
            const double w = sr * r + spin;
            const double phase = -sr * (nu * 0.5 * std::numbers::pi + 0.25 * std::numbers::pi) -
                                 spin * 0.25 * std::numbers::pi;
            const double c1 = (has_r ? sr * kappa / r : 0.0) + spin;
            const cplx lead = power_oscillatory_tail(p0, w, X);
            const cplx corr = power_oscillatory_tail(p0 + 1.0, w, X);
            sum += binom * std::exp(cplx(0.0, phase)) * (lead - cplx(0.0, c1 / 8.0) * corr);
        }
    }
    return amplitude * sum.real();
}

inline constexpr double kJ0FirstZero = 2.404825557695773;
inline constexpr double kJ0TailMax = 0.40276;  // sup |J0(x)| for x >= first zero

/// Rigorous bound on int_X^inf x^q |J0(x)|^n dx, from
///   |J0(x)| <= exp(-x^2/4) on [0, j_0,1],  <= 0.40276 beyond it,
///   |J0(x)| <= sqrt(2/(pi x)) for x >= 2/pi.
inline double kluyver_tail_bound(int n, double q, double X)
{
    const double envelope_switch = 2.0 / (std::numbers::pi * kJ0TailMax * kJ0TailMax);  // ~3.92
    const double e = 0.5 * n - q - 1.0;  // > 0 for n >= 5
    auto envelope_tail = [&](double from) {
        return std::pow(2.0 / std::numbers::pi, 0.5 * n) * std::pow(from, -e) / e;
    };
    double best = std::numeric_limits<double>::infinity();
    if (X >= 2.0 / std::numbers::pi) best = envelope_tail(X);
    if (X < envelope_switch) {
        double piece = 0.0;
        double from = X;
        if (X < kJ0FirstZero) {
            // int_X^z x^q e^{-n x^2/4}; for q = 0 use x/X >= 1.
            const double g = (2.0 / n) * (std::exp(-0.25 * n * X * X) - std::exp(-0.25 * n * kJ0FirstZero * kJ0FirstZero));
            piece += q == 1.0 ? g : g / std::max(X, 1e-300);
            from = kJ0FirstZero;
        }
        piece += std::pow(kJ0TailMax, n) * (std::pow(envelope_switch, q + 1.0) - std::pow(from, q + 1.0)) / (q + 1.0);
        piece += envelope_tail(envelope_switch);
        best = std::min(best, piece);
    }
    return best;
}

/// Smallest X (on a geometric grid) whose certified tail, times the prefactor
/// `scale`, is below kTailTolerance.
inline double kluyver_certified_cutoff(int n, double q, double scale)
{
    double X = 0.02;
    while (scale * kluyver_tail_bound(n, q, X) > kTailTolerance) {
        X *= 1.02;
        if (X > 1e12) break;
    }
    return X;
}

inline double kluyver_panel_width(int n, double r)
{
    return std::min(std::numbers::pi / (1.0 + r), 2.0 / std::sqrt(static_cast<double>(n)));
}

/// int_0^inf x^q J_nu(r x) J0(x)^n dx (without the leading factor r).
inline double kluyver_integral(KluyverKind kind, int n, double r)
{
    const bool density = kind == KluyverKind::density;
    const double q = density ? 1.0 : 0.0;
    auto integrand = [&](double x) {
        const double j0n = std::pow(bessel_j0(x), n);
        return density ? x * bessel_j0(r * x) * j0n : bessel_j1(r * x) * j0n;
    };
    // The certified bound uses |J_nu(r x)| <= 1.
    const double certified = kluyver_certified_cutoff(n, q, std::max(r, 1.0));
    const double asymptotic_start = std::max(600.0, r > 0.0 ? std::min(60.0 / r, 6000.0) : 600.0);
    const bool use_tail = certified > asymptotic_start;
    const double X = use_tail ? asymptotic_start : certified;
    const double width = kluyver_panel_width(n, r);
    const GaussLegendreRule& gl = gauss_legendre_16();
    double sum = 0.0;
    for (double lo = 0.0; lo < X;) {
        const double hi = std::min(X, lo + width);
        sum += gl.integrate(integrand, lo, hi);
        lo = hi;
    }
    if (use_tail) sum += kluyver_asymptotic_tail(kind, n, r, X);
    return sum;
}

inline void require_kluyver_n(int n, const char* who)
{
    if (n < 5) throw std::domain_error(std::string(who) + ": the Bessel integral needs n >= 5");
}

}  // namespace detail

/// Radial distribution function of an n-step walk, n >= 5.
inline double kluyver_radial_cdf(int n, double r)
{
    detail::require_kluyver_n(n, "kluyver_radial_cdf");
    if (r <= 0.0) return 0.0;
    if (r >= n) return 1.0;
    return r * detail::kluyver_integral(detail::KluyverKind::cdf, n, r);
}

/// Radial density of an n-step walk, n >= 5. Zero for r >= n.
inline double kluyver_radial_density(int n, double r)
{
    detail::require_kluyver_n(n, "kluyver_radial_density");
    if (r <= 0.0 || r >= n) return 0.0;
    return r * detail::kluyver_integral(detail::KluyverKind::density, n, r);
}

/// Planar (Cartesian) density g_n(r) = f_n(r) / (2 pi r), finite at r = 0.
inline double kluyver_planar_density(int n, double r)
{
    detail::require_kluyver_n(n, "kluyver_planar_density");
    if (r < 0.0 || r >= n) return 0.0;
    return detail::kluyver_integral(detail::KluyverKind::density, n, r) / (2.0 * std::numbers::pi);
}

/// Density (1 / (pi n)) exp(-r^2 / n) of the n-Gaussian law.
inline double gaussian_planar_density(double n, double r)
{
    if (!(n > 0.0)) throw std::domain_error("gaussian_planar_density: n must be positive");
    return std::exp(-r * r / n) / (std::numbers::pi * n);
}

/// sup over r in [0, min(n, 6 sqrt(n))] of |g_n(r) - (1/(pi n)) exp(-r^2/n)|,
/// sampled on `grid_points` equally spaced radii.
inline double quasi_gaussian_error(int n, int grid_points = 1201)
{
    detail::require_kluyver_n(n, "quasi_gaussian_error");
    const double r_max = std::min(static_cast<double>(n), 6.0 * std::sqrt(static_cast<double>(n)));
    double worst = 0.0;
    for (int i = 0; i < grid_points; ++i) {
        const double r = r_max * i / (grid_points - 1);
        worst = std::max(worst, std::fabs(kluyver_planar_density(n, r) - gaussian_planar_density(n, r)));
    }
    return worst;
}

/// Quadrature values of int_0^inf J0(r x) e^{-a x^2} x dx and the same with x^5.
inline std::pair<double, double> watson_integral_check(double a, double r)
{
    if (!(a > 0.0)) throw std::domain_error("watson_integral_check: a must be positive");
    const double X = std::sqrt(90.0 / a);
    std::vector<double> breaks;
    const double width = std::min(std::numbers::pi / (1.0 + r), 0.5 / std::sqrt(a));
    for (double x = width; x < X; x += width) breaks.push_back(x);
    const auto first = integrate_adaptive_split(
        [&](double x) { return bessel_j0(r * x) * std::exp(-a * x * x) * x; }, 0.0, X, breaks, 1e-14);
    const auto fifth = integrate_adaptive_split(
        [&](double x) { return bessel_j0(r * x) * std::exp(-a * x * x) * std::pow(x, 5); }, 0.0, X, breaks, 1e-14);
    return {first.value, fifth.value};
}

// --- short walks ---------------------------------------------------------------

/// Complete elliptic integral K from the complementary modulus squared
/// k'^2 = 1 - k^2, via the arithmetic-geometric mean.
inline double elliptic_k_from_complement(double kc2)
{
    double a = 1.0, b = std::sqrt(std::max(kc2, 1e-300));
    for (int i = 0; i < 60 && std::fabs(a - b) > 1e-16 * a; ++i) {
        const double m = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = m;
    }
    return std::numbers::pi / (a + b);
}

/// Roots a > b > c > d = 0 of the quartic s (4 - s)(s - (D-1)^2)((D+1)^2 - s)
/// that arises when one unit step is convolved with a 2-step walk at distance D.
struct ClosureQuartic {
    double a, b, c, d;

    explicit ClosureQuartic(double D)
    {
        const double outer = (D + 1.0) * (D + 1.0);
        a = std::max(4.0, outer);
        b = std::min(4.0, outer);
        c = std::min((D - 1.0) * (D - 1.0), b);
        d = 0.0;
    }

    /// k'^2 for the Legendre form of int_c^b ds / sqrt(|quartic|).
    double complement_modulus2() const { return (a - b) * (c - d) / ((a - c) * (b - d)); }

    /// int_c^b ds / sqrt(|(s-a)(s-b)(s-c)(s-d)|)
    double complete_integral() const
    {
        return 2.0 * elliptic_k_from_complement(complement_modulus2()) / std::sqrt((a - c) * (b - d));
    }
};

/// Planar density of the 2-step walk, 1 / (pi^2 s sqrt(4 - s^2)).
inline double two_step_planar_density(double s)
{
    if (s <= 0.0 || s >= 2.0) return 0.0;
    return 1.0 / (std::numbers::pi * std::numbers::pi * s * std::sqrt(4.0 - s * s));
}

/// Planar density of the 3-step walk: convolving the 2-step law with a unit
/// step gives a complete elliptic integral. Logarithmic singularity at s = 1.
inline double three_step_planar_density(double s)
{
    if (s < 0.0 || s >= 3.0) return 0.0;
    const ClosureQuartic quartic(s);
    const double pi3 = std::numbers::pi * std::numbers::pi * std::numbers::pi;
    // At s = 0 the interval [c, b] collapses and int ds / sqrt((s-c)(b-s)) = pi.
    if (quartic.b - quartic.c < 1e-12) return std::numbers::pi / std::sqrt((quartic.a - quartic.b) * quartic.b) / pi3;
    return quartic.complete_integral() / pi3;
}

/// One-step convolution: planar density at distance D of (walk with planar
/// density `prev`, supported on [0, support]) plus one more unit step.
///   g(D) = (1/2pi) int_0^{2pi} prev(|D e + u(theta)|) dtheta
/// `singular_points` lists radii where prev has integrable singularities.
template <class F>
double convolve_unit_step(F&& prev, double support, double D, const std::vector<double>& singular_points,
                          double abs_tol = 1e-12)
{
    if (D < 0.0) D = -D;
    if (D >= support + 1.0) return 0.0;
    if (D < 1e-12) return prev(1.0);
    // t = |D e + u| ranges over [|D-1|, D+1]; dtheta = 2t dt / sqrt((t^2-lo^2)(hi^2-t^2)).
    // With t = lo + (hi - lo)(1 - cos phi)/2 the square-root endpoints cancel.
    const double lo = std::fabs(D - 1.0), hi = D + 1.0;
    const double half = 0.5 * (hi - lo);
    auto t_of = [&](double phi) { return lo + half * (1.0 - std::cos(phi)); };
    auto phi_of = [&](double t) { return std::acos(std::clamp(1.0 - (t - lo) / half, -1.0, 1.0)); };
    const double phi_max = hi <= support ? std::numbers::pi : phi_of(support);
    std::vector<double> breaks;
    for (double sp : singular_points) {
        if (sp > lo && sp < std::min(hi, support)) breaks.push_back(phi_of(sp));
    }
    std::sort(breaks.begin(), breaks.end());
    auto integrand = [&](double phi) {
        const double t = t_of(phi);
        return prev(t) * t / std::sqrt((t + lo) * (hi + t));
    };
    return 2.0 * integrate_adaptive_split(integrand, 0.0, phi_max, breaks, abs_tol).value / std::numbers::pi;
}

/// Planar density of the 4-step walk by convolving the 3-step closed form.
/// Logarithmic singularity at s = 0.
inline double four_step_planar_density(double s)
{
    if (s < 0.0 || s >= 4.0) return 0.0;
    return convolve_unit_step(three_step_planar_density, 3.0, s, {1.0}, 1e-12);
}

// --- tables -----------------------------------------------------------------

/// Tabulated radial and planar densities of the m-step walk on a uniform grid
/// starting at 0. Linear interpolation; zero beyond the last grid point.
struct RadialDensityTable {
    int n = 0;
    double spacing = 0.0;
    std::vector<double> grid;
    std::vector<double> values;         ///< f_R(r)
    std::vector<double> planar_values;  ///< f_R(r) / (2 pi r)
    double planar_max = 0.0;

    double planar_at(double r) const { return interpolate(planar_values, r); }
    double radial_at(double r) const { return interpolate(values, r); }

    /// Trapezoid integral of `values` over the grid.
    double trapezoid_mass() const
    {
        double s = 0.0;
        for (std::size_t i = 1; i < values.size(); ++i) s += 0.5 * (values[i] + values[i - 1]) * spacing;
        return s;
    }

private:
    double interpolate(const std::vector<double>& v, double r) const
    {
        if (r < 0.0) return 0.0;
        const double pos = r / spacing;
        const auto i = static_cast<std::size_t>(pos);
        if (i + 1 >= v.size()) return (i + 1 == v.size() && pos == static_cast<double>(i)) ? v[i] : 0.0;
        const double frac = pos - static_cast<double>(i);
        return v[i] + frac * (v[i + 1] - v[i]);
    }
};

/// Grid spacing for an m-step table. The trapezoid mass error is about
/// (h^2/12) f'(0) with f'(0) ~ 2/m, so walks shorter than 32 steps use 0.005;
/// beyond 64 steps the spacing grows like sqrt(m), which keeps linear
/// interpolation error near 1e-5 relative.
inline double table_spacing(int m)
{
    if (m < 32) return 0.005;
    return 0.01 * std::max(1.0, std::sqrt(m / 64.0));
}

/// Radius beyond which the m-step density is treated as zero (< 1e-20 there).
inline double table_extent(int m) { return std::min(static_cast<double>(m), 7.0 * std::sqrt(static_cast<double>(m)) + 3.0); }

namespace detail {

/// Short-walk tables store cell averages so log singularities stay finite.
/// Cheap closed forms (m = 2, 3) are averaged adaptively, with `breaks` at
/// their singular radii; the convolution form (m = 4) uses an 8-point rule.
template <class PlanarF>
RadialDensityTable cell_average_table(int m, PlanarF&& planar, bool adaptive, const std::vector<double>& breaks)
{
    RadialDensityTable t;
    t.n = m;
    t.spacing = table_spacing(m);
    const double extent = static_cast<double>(m);
    const std::size_t points = static_cast<std::size_t>(std::llround(extent / t.spacing)) + 1;
    static const GaussLegendreRule gl8(8);
    for (std::size_t i = 0; i < points; ++i) {
        const double r = static_cast<double>(i) * t.spacing;
        const double lo = std::max(0.0, r - 0.5 * t.spacing), hi = std::min(extent, r + 0.5 * t.spacing);
        double planar_avg = 0.0, radial_avg = 0.0;
        auto radial = [&](double s) { return 2.0 * std::numbers::pi * s * planar(s); };
        if (hi > lo && adaptive) {
            std::vector<double> inside;
            for (double b : breaks) {
                if (b > lo && b < hi) inside.push_back(b);
            }
            planar_avg = integrate_adaptive_split(planar, lo, hi, inside, 1e-13).value / (hi - lo);
            radial_avg = integrate_adaptive_split(radial, lo, hi, inside, 1e-13).value / (hi - lo);
        } else if (hi > lo) {
            planar_avg = gl8.integrate(planar, lo, hi) / (hi - lo);
            radial_avg = gl8.integrate(radial, lo, hi) / (hi - lo);
        }
        t.grid.push_back(r);
        t.planar_values.push_back(planar_avg);
        t.values.push_back(radial_avg);
    }
    t.planar_max = *std::max_element(t.planar_values.begin(), t.planar_values.end());
    return t;
}

/// Bessel-integral table for m >= 5. Panel nodes and J0(x)^m weights are
/// shared across all radii up to min(cutoff, 600); beyond that each radius
/// adds its own asymptotic tail, as kluyver_integral does. Radii in (0, 0.1)
/// need a longer quadrature range and are evaluated one by one.
inline RadialDensityTable kluyver_table(int m)
{
    RadialDensityTable t;
    t.n = m;
    t.spacing = table_spacing(m);
    const double extent = table_extent(m);
    const std::size_t points = static_cast<std::size_t>(std::floor(extent / t.spacing + 1e-9)) + 1;
    t.grid.resize(points);
    for (std::size_t i = 0; i < points; ++i) t.grid[i] = static_cast<double>(i) * t.spacing;
    t.planar_values.resize(points);
    const double r_max = t.grid.back();
    constexpr double kSharedLimit = 600.0;
    const double cutoff = kluyver_certified_cutoff(m, 1.0, std::max(r_max, 1.0));
    const bool tail = cutoff > kSharedLimit;
    const double X = tail ? kSharedLimit : cutoff;

    const GaussLegendreRule& gl = gauss_legendre_16();
    // Each GL16 panel spans about two periods of J0(r_max x); the error stays at rounding level.
    const double width = 4.0 * kluyver_panel_width(m, r_max);
    std::vector<double> xs, ws;
    for (double lo = 0.0; lo < X;) {
        const double hi = std::min(X, lo + width);
        const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
        for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
            const double x = mid + half * gl.nodes[j];
            xs.push_back(x);
            ws.push_back(gl.weights[j] * half * x * std::pow(bessel_j0(x), m));
        }
        lo = hi;
    }
    for (std::size_t i = 0; i < points; ++i) {
        const double r = t.grid[i];
        if (tail && r > 0.0 && r < 60.0 / kSharedLimit) {
            t.planar_values[i] = kluyver_planar_density(m, r);
            continue;
        }
        double s = 0.0;
        for (std::size_t j = 0; j < xs.size(); ++j) s += ws[j] * bessel_j0(r * xs[j]);
        if (tail) s += kluyver_asymptotic_tail(KluyverKind::density, m, r, X);
        t.planar_values[i] = s / (2.0 * std::numbers::pi);
    }
    t.values.resize(points);
    for (std::size_t i = 0; i < points; ++i) {
        if (t.grid[i] >= m) t.planar_values[i] = 0.0;
        t.values[i] = 2.0 * std::numbers::pi * t.grid[i] * t.planar_values[i];
    }
    t.planar_max = *std::max_element(t.planar_values.begin(), t.planar_values.end());
    return t;
}

}  // namespace detail

/// Table for the m-step walk, m >= 2.
inline RadialDensityTable build_density_table(int m)
{
    switch (m) {
    case 2: return detail::cell_average_table(2, two_step_planar_density, true, {});
    case 3: return detail::cell_average_table(3, three_step_planar_density, true, {1.0});
    case 4: return detail::cell_average_table(4, four_step_planar_density, false, {});
    default:
        if (m < 2) throw std::domain_error("build_density_table: m must be >= 2");
        return detail::kluyver_table(m);
    }
}

/// Process-wide lazily built tables. Concurrent readers are safe; two threads
/// may build the same table at once, and the first insert wins.
class DensityTableCache {
public:
    std::shared_ptr<const RadialDensityTable> get(int m)
    {
        {
            std::lock_guard lock(mutex_);
            if (auto it = tables_.find(m); it != tables_.end()) return it->second;
        }
        auto built = std::make_shared<const RadialDensityTable>(build_density_table(m));
        std::lock_guard lock(mutex_);
        return tables_.emplace(m, std::move(built)).first->second;
    }

    /// Builds every table in [lo, hi] not yet present.
    void prepare(int lo, int hi)
    {
        for (int m = lo; m <= hi; ++m) get(m);
    }

private:
    std::mutex mutex_;
    std::map<int, std::shared_ptr<const RadialDensityTable>> tables_;
};

inline DensityTableCache& density_tables()
{
    static DensityTableCache cache;
    return cache;
}

}  // namespace eqwalk
