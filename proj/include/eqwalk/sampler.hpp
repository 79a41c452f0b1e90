#pragma once

// Random equilateral walks and two independent samplers for random
// equilateral polygons (walks conditioned on X_n = X_0).
//
// The conditional sampler draws directions one at a time from the regular
// conditional law: after k steps the next direction has density proportional
// to g_{n-k-1}(|X_k + u(theta)|), the planar density of the remaining walk at
// the displacement it must undo. The next-to-last free direction (two steps
// remaining) is drawn exactly by elliptic inversion, and the last two steps
// are the two mirror solutions of the closing triangle.
//
// The MCMC sampler alternates two moves that preserve unit edges, closure and
// the conditional law: fold moves (reflect a sub-chain across the chord
// joining its ends) and hinge moves (treat the arcs between four vertices as a
// four-bar linkage on a fixed base, and move it along its one-parameter
// family by Metropolis). Reflections alone reach only a countable set of
// shapes from any start, which visibly biases small n.

#include <algorithm>
#include <cmath>
#include <iterator>
#include <cstdint>
#include <map>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "density.hpp"
#include "rng.hpp"
#include "types.hpp"

namespace eqwalk {

struct SamplerError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A required density table is absent from the set handed to the sampler.
struct TableMissError : SamplerError {
    using SamplerError::SamplerError;
};

/// The residual gap before the last two steps exceeds 2.
struct ClosureError : SamplerError {
    using SamplerError::SamplerError;
};

/// Fold chord endpoints coincide; the caller should pick another (i, j).
struct DegenerateChordError : SamplerError {
    using SamplerError::SamplerError;
};

inline Point unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// n i.i.d. uniform unit steps starting at the origin.
inline Walk sample_walk(int n, SeedSpec seed)
{
    if (n < 1) throw std::invalid_argument("sample_walk: n must be >= 1");
    CounterRng rng(seed);
    std::vector<Point> v(static_cast<std::size_t>(n) + 1);
    for (int k = 1; k <= n; ++k) v[k] = v[k - 1] + unit(rng.angle());
    return Walk(std::move(v));
}

// --- fold MCMC ----------------------------------------------------------------

inline constexpr double kDegenerateChord = 1e-12;

namespace detail {

/// Reflects vertices i+1 .. j-1 across the line through v[i] and v[j], in place.
inline void reflect_between(std::vector<Point>& v, std::size_t i, std::size_t j)
{
    const Point a = v[i];
    const Point d = v[j] - a;
    const double len2 = dot(d, d);
    if (len2 < kDegenerateChord * kDegenerateChord) {
        throw DegenerateChordError("fold_move: vertices " + std::to_string(i) + " and " + std::to_string(j) +
                                   " coincide");
    }
    for (std::size_t k = i + 1; k < j; ++k) {
        const Point p = v[k] - a;
        const double t = dot(p, d) / len2;
        const Point foot = t * d;
        v[k] = a + (2.0 * foot - p);
    }
}

}  // namespace detail

/// Reflects the sub-chain strictly between vertices i and j across the line
/// through them when `side` is true; otherwise returns p unchanged.
inline Polygon fold_move(const Polygon& p, int i, int j, bool side)
{
    const int n = static_cast<int>(p.steps());
    if (i < 0 || j > n || i >= j) throw std::invalid_argument("fold_move: need 0 <= i < j <= n");
    auto v = std::vector<Point>(p.vertices().begin(), p.vertices().end());
    if (norm(v[j] - v[i]) < kDegenerateChord) {
        throw DegenerateChordError("fold_move: vertices " + std::to_string(i) + " and " + std::to_string(j) +
                                   " coincide");
    }
    if (side) detail::reflect_between(v, static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    return Polygon(std::move(v));
}

/// Regular n-gon with unit edges, X_0 = X_n = (0, 0).
inline Polygon regular_polygon(int n)
{
    if (n < 3) throw std::invalid_argument("regular_polygon: n must be >= 3");
    std::vector<Point> v(static_cast<std::size_t>(n) + 1);
    for (int k = 1; k < n; ++k) v[k] = v[k - 1] + unit(2.0 * std::numbers::pi * k / n);
    return Polygon(std::move(v));
}

/// Fold/hinge Markov chain on closed equilateral n-gons. Confined to one thread.
class FoldChain {
public:
    FoldChain(int n, SeedSpec seed) : n_(n), rng_(seed)
    {
        const Polygon start = regular_polygon(n);
        v_.assign(start.vertices().begin(), start.vertices().end());
    }

    /// One move. For n >= 4 a fair coin picks a fold move (uniform i < j with
    /// j - i >= 2 among vertices 0..n-1, reflected on a second coin) or a hinge
    /// move.
    void step()
    {
        if (n_ == 3) {
            // The only chord with an interior vertex is (0, 2).
            if (rng_.coin()) detail::reflect_between(v_, 0, 2);
            return;
        }
        if (rng_.coin()) {
            fold();
        } else {
            hinge();
        }
        if (++since_cleanup_ >= n_) cleanup();
    }

    void advance(long moves)
    {
        for (long k = 0; k < moves; ++k) step();
    }

    /// Current state in a uniformly random orientation about X_0. The moves
    /// alone leave rotations about the origin slowly mixed for small n.
    Polygon snapshot()
    {
        cleanup();
        const double angle = rng_.angle();
        std::vector<Point> out(v_.size());
        for (std::size_t k = 1; k + 1 < v_.size(); ++k) out[k] = rotate(v_[k], angle);
        return Polygon(std::move(out));
    }

    int n() const { return n_; }

private:
    void fold()
    {
        for (;;) {
            std::size_t i = rng_.below(static_cast<std::uint64_t>(n_));
            std::size_t j = rng_.below(static_cast<std::uint64_t>(n_));
            if (i > j) std::swap(i, j);
            if (j - i < 2) continue;
            const bool side = rng_.coin();
            if (norm(v_[j] - v_[i]) < kDegenerateChord) continue;
            if (side) detail::reflect_between(v_, i, j);
            return;
        }
    }

    /// Vertices i < j < k < l; arcs i..j, j..k, k..l move rigidly with X_i and
    /// X_l fixed. Parameterized by the angle of the first chord, the law on
    /// this one-dimensional family has density 1 / |c2 x c3| (c2, c3 the other
    /// two chords). The proposal draws a uniform angle and a uniform branch,
    /// which is symmetric, so the Metropolis ratio is the density ratio.
    void hinge()
    {
        std::size_t idx[4];
        for (;;) {
            for (auto& x : idx) x = rng_.below(static_cast<std::uint64_t>(n_));
            std::sort(std::begin(idx), std::end(idx));
            if (idx[0] < idx[1] && idx[1] < idx[2] && idx[2] < idx[3]) break;
        }
        const double alpha = rng_.angle();
        const bool branch = rng_.coin();
        const double accept_draw = rng_.uniform();
        const auto [i, j, k, l] = idx;
        const Point A = v_[i], B = v_[l], J = v_[j], K = v_[k];
        const double L1 = norm(J - A), L2 = norm(K - J), L3 = norm(B - K);
        if (L1 < kDegenerateChord || L2 < kDegenerateChord || L3 < kDegenerateChord) return;
        const double old_weight = std::fabs(cross(K - J, B - K));
        // New elbow J' on the circle about A; K' where circles (J', L2) and (B, L3) meet.
        const Point J2 = A + L1 * unit(alpha);
        const Point e = B - J2;
        const double dist = norm(e);
        if (dist < kDegenerateChord || dist > L2 + L3 || dist < std::fabs(L2 - L3)) return;
        const double along = (L2 * L2 - L3 * L3 + dist * dist) / (2.0 * dist);
        const double h = std::sqrt(std::max(0.0, L2 * L2 - along * along));
        const Point ehat = (1.0 / dist) * e;
        const Point perp{-ehat.y, ehat.x};
        const Point K2 = J2 + along * ehat + (branch ? h : -h) * perp;
        const double new_weight = std::fabs(cross(K2 - J2, B - K2));
        // Accept with probability min(1, (1/new) / (1/old)) = min(1, old/new).
        if (!(accept_draw * new_weight < old_weight)) return;
        const double d1 = std::atan2(cross(J - A, J2 - A), dot(J - A, J2 - A));
        const double d2 = std::atan2(cross(K - J, K2 - J2), dot(K - J, K2 - J2));
        const double d3 = std::atan2(cross(B - K, B - K2), dot(B - K, B - K2));
        for (std::size_t m = i + 1; m < j; ++m) v_[m] = A + rotate(v_[m] - A, d1);
        for (std::size_t m = j + 1; m < k; ++m) v_[m] = J2 + rotate(v_[m] - J, d2);
        for (std::size_t m = k + 1; m < l; ++m) v_[m] = K2 + rotate(v_[m] - K, d3);
        v_[j] = J2;
        v_[k] = K2;
    }

    /// Rebuilds the vertices from renormalized unit steps so rounding from
    /// many moves does not accumulate; the closure residual is spread over
    /// the steps.
    void cleanup()
    {
        since_cleanup_ = 0;
        const std::size_t n = static_cast<std::size_t>(n_);
        std::vector<Point> u(n);
        for (std::size_t k = 0; k < n; ++k) u[k] = v_[k + 1] - v_[k];
        for (int pass = 0; pass < 3; ++pass) {
            Point residual{};
            for (auto& s : u) {
                s = (1.0 / norm(s)) * s;
                residual = residual + s;
            }
            for (auto& s : u) s = s - (1.0 / n_) * residual;
        }
        for (auto& s : u) s = (1.0 / norm(s)) * s;
        for (std::size_t k = 1; k < n; ++k) v_[k] = v_[k - 1] + u[k - 1];
        v_[n] = v_[0];
    }

    int n_;
    CounterRng rng_;
    std::vector<Point> v_;
    int since_cleanup_ = 0;
};

inline long default_burn_in(int n) { return 50L * n; }
inline long default_stride(int n) { return 5L * n; }

/// First state of a fold chain after `burn_in` moves.
inline Polygon sample_polygon_mcmc(int n, long burn_in, long stride, SeedSpec seed)
{
    if (n < 3) throw std::invalid_argument("sample_polygon_mcmc: n must be >= 3");
    if (burn_in < 1 || stride < 1) throw std::invalid_argument("sample_polygon_mcmc: burn_in and stride must be >= 1");
    FoldChain chain(n, seed);
    chain.advance(burn_in);
    return chain.snapshot();
}

/// `count` successive states of one chain: burn_in moves, then stride moves
/// between samples.
inline std::vector<Polygon> sample_polygons_mcmc(int n, int count, long burn_in, long stride, SeedSpec seed)
{
    if (n < 3) throw std::invalid_argument("sample_polygons_mcmc: n must be >= 3");
    if (burn_in < 1 || stride < 1) throw std::invalid_argument("sample_polygons_mcmc: burn_in and stride must be >= 1");
    FoldChain chain(n, seed);
    chain.advance(burn_in);
    std::vector<Polygon> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int s = 0; s < count; ++s) {
        if (s > 0) chain.advance(stride);
        out.push_back(chain.snapshot());
    }
    return out;
}

// --- sequential conditional sampler ---------------------------------------------

/// The density tables a conditional polygon sampler reads from.
class DensityTableSet {
public:
    void insert(std::shared_ptr<const RadialDensityTable> t) { tables_[t->n] = std::move(t); }

    const RadialDensityTable& at(int m) const
    {
        auto it = tables_.find(m);
        if (it == tables_.end()) throw TableMissError("no density table for m = " + std::to_string(m));
        return *it->second;
    }

    bool contains(int m) const { return tables_.count(m) != 0; }

    /// Tables for m in {2, ..., n-2} from the process-wide cache.
    static DensityTableSet for_polygon(int n)
    {
        DensityTableSet set;
        for (int m = 2; m <= n - 2; ++m) set.insert(density_tables().get(m));
        return set;
    }

private:
    std::map<int, std::shared_ptr<const RadialDensityTable>> tables_;
};

inline constexpr double kEnvelopeMargin = 1.05;

namespace detail {

/// sn(u | m) with the parameter given through m_c = 1 - m, which keeps
/// k -> 1 accurate (descending Landen / AGM).
inline double jacobi_sn(double u, double mc)
{
    if (mc <= 0.0) return std::tanh(u);
    constexpr double kTol = 1e-8;  // the next AGM step would be O(kTol^2)
    double em[16], en[16];
    double a = 1.0, dn = 1.0, c = 1.0;
    int l = 0;
    for (int i = 0; i < 16; ++i) {
        l = i;
        em[i] = a;
        mc = std::sqrt(mc);
        en[i] = mc;
        c = 0.5 * (a + mc);
        if (std::fabs(a - mc) <= kTol * a) break;
        mc *= a;
        a = c;
    }
    u *= c;
    double sn = std::sin(u), cn = std::cos(u);
    if (sn != 0.0) {
        a = cn / sn;
        c *= a;
        for (int i = l; i >= 0; --i) {
            const double b = em[i];
            a *= c;
            c *= dn;
            dn = (en[i] + a) / (b + a);
            a = c / b;
        }
        a = 1.0 / std::sqrt(c * c + 1.0);
        sn = sn >= 0.0 ? a : -a;
    }
    return sn;
}

/// Direction of the next step from P when exactly two steps will remain, drawn
/// with density proportional to g_2(|P + u(theta)|).
///
/// With s = |P + u|^2 the law of s is proportional to 1/sqrt|(s-a)(s-b)(s-c)s|
/// on [c, b] (see ClosureQuartic); s = bc / (b - (b - c) sn^2(U K)) inverts its
/// distribution function.
inline double two_step_closure_direction(Point P, CounterRng& rng)
{
    const double D = norm(P);
    const double u_draw = rng.uniform();
    const bool upper = rng.coin();
    if (D < 1e-12) return rng.angle();
    const ClosureQuartic q(D);
    double s = q.c;
    if (q.complement_modulus2() <= 0.0) {
        // |P| = 1: the law ~ 1/|sin theta| has all its mass on the two folds
        s = u_draw < 0.5 ? q.c : q.b;
    } else if (q.b > q.c) {
        const double mc = std::max(q.complement_modulus2(), 1e-300);
        const double K = elliptic_k_from_complement(mc);
        const double sn = jacobi_sn(u_draw * K, mc);
        s = q.b * q.c / (q.b - (q.b - q.c) * sn * sn);
        s = std::clamp(s, q.c, q.b);
    }
    const double alpha = std::atan2(P.y, P.x);
    const double offset = std::acos(std::clamp((s - D * D - 1.0) / (2.0 * D), -1.0, 1.0));
    return upper ? alpha + offset : alpha - offset;
}

}  // namespace detail

/// Closed n-gon from the regular conditional law of the walk given X_n = X_0.
inline Polygon sample_polygon_conditional(int n, const DensityTableSet& tables, SeedSpec seed)
{
    if (n < 3) throw std::invalid_argument("sample_polygon_conditional: n must be >= 3");
    CounterRng rng(seed);
    std::vector<Point> v(static_cast<std::size_t>(n) + 1);
    // Free directions 1 .. n-2. The first is uniform by rotation invariance.
    for (int k = 1; k <= n - 2; ++k) {
        const int remaining = n - k;  // steps left after this one
        const Point P = v[k - 1];
        double theta;
        if (k == 1 && remaining > 2) {
            theta = rng.angle();
        } else if (remaining == 2) {
            theta = detail::two_step_closure_direction(P, rng);
        } else {
            const RadialDensityTable& table = tables.at(remaining);
            const double envelope = table.planar_max * kEnvelopeMargin;
            for (;;) {
                theta = rng.angle();
                const double w = table.planar_at(norm(P + unit(theta)));
                if (rng.uniform() * envelope < w) break;
            }
        }
        v[k] = P + unit(theta);
    }
    // Close the triangle X_{n-2}, X_{n-1}, X_n = 0.
    const Point P = v[n - 2];
    const Point d = -1.0 * P;
    const double L = norm(d);
    if (L > 2.0 + 1e-9) {
        throw ClosureError("sample_polygon_conditional: residual gap " + std::to_string(L) + " exceeds 2");
    }
    const bool mirror = rng.coin();
    Point u1;
    if (L < 1e-300) {
        u1 = unit(rng.angle());
    } else {
        const Point perp{-d.y / L, d.x / L};
        const double h = std::sqrt(std::max(0.0, 1.0 - 0.25 * L * L));
        u1 = 0.5 * d + (mirror ? h : -h) * perp;
    }
    v[n - 1] = P + u1;
    v[n] = Point{0.0, 0.0};
    return Polygon(std::move(v));
}

}  // namespace eqwalk
