#pragma once

// Numerical integration: fixed Gauss-Legendre panels and globally adaptive
// Gauss-Kronrod (7/15) with absolute error control.

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <vector>

namespace eqwalk {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
};

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendreRule(int n) : nodes(n), weights(n)
    {
        if (n < 1) throw std::invalid_argument("GaussLegendreRule: n must be >= 1");
        for (int i = 0; i < (n + 1) / 2; ++i) {
            double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = 0.0;
                for (int j = 1; j <= n; ++j) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
                }
                dp = n * (z * p0 - p1) / (z * z - 1.0);
                const double dz = p0 / dp;
                z -= dz;
                if (std::fabs(dz) < 1e-16) break;
            }
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
    }

    /// Integral of f over [a, b] with this rule.
    template <class F>
    double integrate(F&& f, double a, double b) const
    {
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(mid + half * nodes[i]);
        return sum * half;
    }
};

/// Shared 16-point rule, built once.
inline const GaussLegendreRule& gauss_legendre_16()
{
    static const GaussLegendreRule rule(16);
    return rule;
}

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGauss7Weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel kronrod15(F& f, double a, double b)
{
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    const double fc = f(mid);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGauss7Weights[3];
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kKronrodNodes[i];
        const double fsum = f(mid - dx) + f(mid + dx);
        kronrod += kKronrodWeights[i] * fsum;
        if (i % 2 == 1) gauss += kGauss7Weights[i / 2] * fsum;
    }
    return {a, b, kronrod * half, std::fabs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Globally adaptive G7/K15 integration of f over [a, b]. Bisects the panel with
/// the largest error estimate until the summed estimate is below abs_tol or
/// max_panels is reached. Integrable endpoint singularities are tolerated since
/// Kronrod nodes never touch the endpoints.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-12,
                                    int max_panels = 4000)
{
    if (a == b) return {};
    std::priority_queue<detail::Panel> heap;
    heap.push(detail::kronrod15(f, a, b));
    double total = heap.top().value, err = heap.top().error;
    int count = 1;
    while (err > abs_tol && count < max_panels) {
        const detail::Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {  // cannot split further
            heap.push(worst);
            break;
        }
        const detail::Panel left = detail::kronrod15(f, worst.a, mid);
        const detail::Panel right = detail::kronrod15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++count;
    }
    // Re-sum to shed accumulated rounding from the running updates.
    double value = 0.0, error = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    return {value, error, count};
}

/// Adaptive integration over consecutive sub-intervals split at the given
/// interior breakpoints (which must be sorted and inside (a, b)).
template <class F>
QuadratureResult integrate_adaptive_split(F&& f, double a, double b, const std::vector<double>& breaks,
                                          double abs_tol = 1e-12)
{
    QuadratureResult total;
    double lo = a;
    const double pieces = static_cast<double>(breaks.size() + 1);
    auto add = [&](double hi) {
        if (hi <= lo) return;
        const QuadratureResult r = integrate_adaptive(f, lo, hi, abs_tol / pieces);
        total.value += r.value;
        total.error += r.error;
        total.intervals += r.intervals;
        lo = hi;
    };
    for (double x : breaks) {
        if (x > a && x < b) add(x);
    }
    add(b);
    return total;
}

}  // namespace eqwalk
