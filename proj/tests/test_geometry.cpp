#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <eqwalk/geometry.hpp>
#include <eqwalk/sampler.hpp>

using namespace eqwalk;

namespace {

Walk walk_from_angles(const std::vector<double>& degrees)
{
    std::vector<Point> v{{0.0, 0.0}};
    for (double d : degrees) v.push_back(v.back() + unit(d * std::numbers::pi / 180.0));
    return Walk(std::move(v));
}

template <class Shape>
Shape transformed(const Shape& s, double angle, Point shift)
{
    std::vector<Point> v;
    for (const Point& p : s.vertices()) v.push_back(rotate(p, angle) + shift);
    return Shape(std::move(v));
}

template <class Shape>
Shape reversed(const Shape& s)
{
    std::vector<Point> v(s.vertices().rbegin(), s.vertices().rend());
    return Shape(std::move(v));
}

}  // namespace

TEST(Predicate, BasicCases)
{
    EXPECT_TRUE(segments_properly_intersect({{0, 0}, {2, 0}, 1}, {{1, -1}, {1, 1}, 3}));
    EXPECT_FALSE(segments_properly_intersect({{0, 0}, {1, 0}, 1}, {{1, 0}, {2, 1}, 3}));
    EXPECT_FALSE(segments_properly_intersect({{0, 0}, {1, 0}, 1}, {{0, 1}, {1, 1}, 3}));
}

TEST(Predicate, DegenerateContactIsNotACrossing)
{
    // T-junction: endpoint on the interior of the other segment
    EXPECT_FALSE(segments_properly_intersect({{0, 0}, {2, 0}, 1}, {{1, 0}, {1, 1}, 3}));
    // collinear overlap
    EXPECT_FALSE(segments_properly_intersect({{0, 0}, {2, 0}, 1}, {{1, 0}, {3, 0}, 3}));
    // disjoint collinear
    EXPECT_FALSE(segments_properly_intersect({{0, 0}, {1, 0}, 1}, {{2, 0}, {3, 0}, 3}));
}

TEST(Predicate, SymmetricInArguments)
{
    CounterRng rng({11, 0});
    for (int i = 0; i < 20000; ++i) {
        Segment s{{rng.uniform(), rng.uniform()}, {rng.uniform(), rng.uniform()}, 1};
        Segment t{{rng.uniform(), rng.uniform()}, {rng.uniform(), rng.uniform()}, 3};
        ASSERT_EQ(segments_properly_intersect(s, t), segments_properly_intersect(t, s));
        Segment s_rev{s.b, s.a, 1};
        ASSERT_EQ(segments_properly_intersect(s, t), segments_properly_intersect(s_rev, t));
    }
}

TEST(Counting, ShortWalksHaveNoCrossings)
{
    for (std::uint64_t r = 0; r < 50; ++r) {
        for (int n : {1, 2}) {
            const Walk w = sample_walk(n, {5, r});
            EXPECT_EQ(count_self_intersections_naive(w).count, 0);
            EXPECT_EQ(count_self_intersections_sweep(w).count, 0);
        }
    }
    EXPECT_EQ(count_self_intersections_sweep(Walk({{0, 0}})).count, 0);
}

TEST(Counting, TriangleHasNoAdmissiblePairs)
{
    const Polygon tri = transformed(regular_polygon(3), 0.7, {3, -2});
    EXPECT_EQ(count_self_intersections_naive(tri).count, 0);
    EXPECT_EQ(count_self_intersections_naive(tri).pairs_examined, 0);
    EXPECT_EQ(count_self_intersections_sweep(tri).count, 0);
}

TEST(Counting, ExplicitFourStepWalk)
{
    // vertices (0,0), (1,0), (1.5, 0.866), (0.634, 0.366), (1.366, -0.317)
    const Walk w = walk_from_angles({0.0, 60.0, 210.0, -43.03});
    EXPECT_NEAR(w[4].x, 1.366, 2e-3);
    EXPECT_NEAR(w[4].y, -0.317, 2e-3);

    auto step = [&](int k) { return Segment{w[k - 1], w[k], k}; };
    int crossings = 0;
    for (int k = 1; k <= 4; ++k) {
        for (int l = k + 2; l <= 4; ++l) crossings += segments_properly_intersect(step(k), step(l));
    }
    EXPECT_EQ(crossings, 1);
    // Step 4 passes just right of X_1 = (1, 0) and crosses step 2 there.
    EXPECT_TRUE(segments_properly_intersect(step(2), step(4)));
    EXPECT_EQ(count_self_intersections_naive(w).count, 1);
    EXPECT_EQ(count_self_intersections_sweep(w).count, 1);
}

TEST(Counting, AdmissibilityRules)
{
    EXPECT_FALSE(detail::admissible(3, 4, 10, false));
    EXPECT_TRUE(detail::admissible(3, 5, 10, false));
    EXPECT_TRUE(detail::admissible(1, 10, 10, false));
    EXPECT_FALSE(detail::admissible(1, 10, 10, true));
    EXPECT_TRUE(detail::admissible(1, 9, 10, true));
    // polygon with n steps has n(n-3)/2 admissible pairs
    for (int n : {3, 4, 5, 9, 20}) {
        const auto r = count_self_intersections_naive(regular_polygon(n));
        EXPECT_EQ(r.pairs_examined, n * (n - 3) / 2) << n;
        EXPECT_EQ(r.count, 0);
    }
    const auto r = count_self_intersections_naive(sample_walk(20, {1, 1}));
    EXPECT_EQ(r.pairs_examined, 19 * 18 / 2);
}

TEST(Counting, SweepMatchesNaiveOnRandomWalks)
{
    for (std::uint64_t r = 0; r < 100; ++r) {
        const Walk w = sample_walk(500, {2024, r});
        ASSERT_EQ(count_self_intersections_sweep(w).count, count_self_intersections_naive(w).count) << r;
    }
}

TEST(Counting, SweepMatchesNaiveOnRandomPolygons)
{
    const auto polys = sample_polygons_mcmc(300, 50, default_burn_in(300), default_stride(300), {77, 0});
    for (const Polygon& p : polys) {
        ASSERT_EQ(count_self_intersections_sweep(p).count, count_self_intersections_naive(p).count);
    }
}

TEST(Counting, SweepMatchesNaiveOnDegenerateLatticeWalks)
{
    // Axis-aligned steps create shared vertices, T-junctions and collinear
    // overlaps, none of which count.
    CounterRng rng({3, 0});
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Point> v{{0, 0}};
        for (int k = 0; k < 60; ++k) {
            const double a = 0.5 * std::numbers::pi * static_cast<double>(rng.below(4));
            v.push_back(v.back() + Point{std::round(std::cos(a)), std::round(std::sin(a))});
        }
        const Walk w(v);
        ASSERT_EQ(count_self_intersections_sweep(w).count, count_self_intersections_naive(w).count) << trial;
    }
}

TEST(Counting, IsometryAndReversalInvariance)
{
    for (std::uint64_t r = 0; r < 30; ++r) {
        const Walk w = sample_walk(200, {99, r});
        const long long base = count_self_intersections_naive(w).count;
        const Walk moved = transformed(w, 0.1 + r, {17.5, -3.25});
        EXPECT_EQ(count_self_intersections_naive(moved).count, base);
        EXPECT_EQ(count_self_intersections_sweep(moved).count, base);
        EXPECT_EQ(count_self_intersections_naive(reversed(w)).count, base);
        EXPECT_EQ(count_self_intersections_sweep(reversed(w)).count, base);
    }
    const auto polys = sample_polygons_mcmc(40, 20, default_burn_in(40), default_stride(40), {5, 0});
    for (const Polygon& p : polys) {
        const long long base = count_self_intersections_naive(p).count;
        EXPECT_EQ(count_self_intersections_sweep(transformed(p, 2.0, {1, 1})).count, base);
        EXPECT_EQ(count_self_intersections_sweep(reversed(p)).count, base);
    }
}

TEST(Counting, DispatchReportsMethod)
{
    const Walk w = sample_walk(30, {1, 0});
    EXPECT_EQ(count_self_intersections(w, CountMethod::naive).method, CountMethod::naive);
    EXPECT_EQ(count_self_intersections(w, CountMethod::naive).count,
              count_self_intersections(w, CountMethod::sweep).count);
    EXPECT_STREQ(to_string(CountMethod::sweep), "sweep");
}
