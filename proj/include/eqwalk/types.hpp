#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace eqwalk {

/// A point in the plane, in units of the step length.
struct Point {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Point a, Point b) = default;
};

inline double norm(Point p) { return std::hypot(p.x, p.y); }
constexpr double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
constexpr double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }

/// Rotation by `angle` about the origin.
inline Point rotate(Point p, double angle)
{
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * p.x - s * p.y, s * p.x + c * p.y};
}

/// Open polyline X_0, ..., X_n. Steps are the differences X_k - X_{k-1}.
class Walk {
public:
    Walk() = default;
    explicit Walk(std::vector<Point> vertices) : vertices_(std::move(vertices))
    {
        if (vertices_.empty()) throw std::invalid_argument("Walk: needs at least one vertex");
    }

    std::size_t steps() const { return vertices_.size() - 1; }
    std::span<const Point> vertices() const { return vertices_; }
    const Point& operator[](std::size_t k) const { return vertices_[k]; }

private:
    std::vector<Point> vertices_;
};

/// Closed polyline: X_n coincides with X_0 up to rounding. The vertex list
/// keeps X_n so that every step X_k - X_{k-1} is stored explicitly.
class Polygon {
public:
    Polygon() = default;
    explicit Polygon(std::vector<Point> vertices) : vertices_(std::move(vertices))
    {
        if (vertices_.size() < 4) throw std::invalid_argument("Polygon: needs n >= 3 steps");
    }

    std::size_t steps() const { return vertices_.size() - 1; }
    std::span<const Point> vertices() const { return vertices_; }
    const Point& operator[](std::size_t k) const { return vertices_[k]; }

private:
    std::vector<Point> vertices_;
};

/// Largest | |X_k - X_{k-1}| - 1 | over all steps.
inline double max_step_error(std::span<const Point> v)
{
    double worst = 0.0;
    for (std::size_t k = 1; k < v.size(); ++k) worst = std::max(worst, std::fabs(norm(v[k] - v[k - 1]) - 1.0));
    return worst;
}

inline double closure_error(const Polygon& p) { return norm(p[p.steps()] - p[0]); }

}  // namespace eqwalk
