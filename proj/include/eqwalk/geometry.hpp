#pragma once

// Self-intersection counting for planar walks and polygons.
//
// A self-intersection is a pair of segments [X_{k-1}, X_k], [X_{l-1}, X_l] with
// k < l, l - k >= 2 (and, for polygons, l - k != n - 1) whose relative
// interiors cross. Touching, endpoint contact and collinear overlap are not
// crossings. Both counters below evaluate the same predicate on the same
// segment list, so they agree exactly whenever the sweep does not bail out.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <span>
#include <unordered_set>
#include <vector>

#include "rng.hpp"
#include "types.hpp"

namespace eqwalk {

/// Absolute tolerance on orientation determinants; anything closer to zero is
/// treated as degenerate (not a crossing).
inline constexpr double kOrientationEpsilon = 1e-12;

struct Segment {
    Point a;
    Point b;
    int index = 0;  ///< 1-based step index k for [X_{k-1}, X_k]
};

enum class CountMethod { naive, sweep };

struct CountResult {
    long long count = 0;
    long long pairs_examined = 0;
    CountMethod method = CountMethod::naive;
};

inline const char* to_string(CountMethod m) { return m == CountMethod::naive ? "naive" : "sweep"; }

inline bool segments_properly_intersect(const Segment& s, const Segment& t)
{
    const Point ds = s.b - s.a, dt = t.b - t.a;
    const double o1 = cross(ds, t.a - s.a);
    const double o2 = cross(ds, t.b - s.a);
    if (!((o1 > kOrientationEpsilon && o2 < -kOrientationEpsilon) ||
          (o1 < -kOrientationEpsilon && o2 > kOrientationEpsilon)))
        return false;
    const double o3 = cross(dt, s.a - t.a);
    const double o4 = cross(dt, s.b - t.a);
    return (o3 > kOrientationEpsilon && o4 < -kOrientationEpsilon) ||
           (o3 < -kOrientationEpsilon && o4 > kOrientationEpsilon);
}

namespace detail {

inline std::vector<Segment> segments_of(std::span<const Point> v, bool closed)
{
    std::vector<Segment> segs;
    const std::size_t n = v.size() - 1;
    segs.reserve(n);
    for (std::size_t k = 1; k <= n; ++k) {
        // The closing vertex of a polygon is snapped onto X_0 so the wrap pair
        // shares an endpoint bit for bit.
        const Point end = (closed && k == n) ? v[0] : v[k];
        segs.push_back({v[k - 1], end, static_cast<int>(k)});
    }
    return segs;
}

/// Whether steps k < l form a pair that may be counted.
inline bool admissible(int k, int l, int n, bool closed)
{
    if (l - k < 2) return false;
    return !(closed && l - k == n - 1);
}

inline CountResult count_naive(const std::vector<Segment>& segs, bool closed)
{
    CountResult r{0, 0, CountMethod::naive};
    const int n = static_cast<int>(segs.size());
    for (int k = 0; k < n; ++k) {
        for (int l = k + 2; l < n; ++l) {
            if (!admissible(k + 1, l + 1, n, closed)) continue;
            ++r.pairs_examined;
            if (segments_properly_intersect(segs[k], segs[l])) ++r.count;
        }
    }
    return r;
}

/// Bentley-Ottmann sweep. Returns false if an event ordering could not be
/// resolved unambiguously; `out` is then unspecified.
class Sweep {
public:
    Sweep(const std::vector<Segment>& segs, bool closed) : segs_(segs), closed_(closed)
    {
        const int n = static_cast<int>(segs.size());
        left_.resize(n);
        right_.resize(n);
        nodes_.resize(n);
        node_of_.assign(n, -1);
        for (int i = 0; i < n; ++i) {
            const Segment& s = segs[i];
            const bool a_first = s.a.x < s.b.x || (s.a.x == s.b.x && s.a.y < s.b.y);
            left_[i] = a_first ? s.a : s.b;
            right_[i] = a_first ? s.b : s.a;
        }
    }

    bool run(CountResult& out)
    {
        out = {0, 0, CountMethod::sweep};
        const int n = static_cast<int>(segs_.size());
        for (int i = 0; i < n; ++i) {
            if (right_[i].x - left_[i].x < kMinWidth) return false;  // near-vertical
            events_.push({left_[i].x, left_[i].y, kInsert, i, -1});
            events_.push({right_[i].x, right_[i].y, kRemove, i, -1});
        }
        while (!events_.empty()) {
            const Event e = events_.top();
            events_.pop();
            sweep_x_ = e.x;
            bool ok = true;
            switch (e.type) {
            case kRemove: ok = remove(e.a); break;
            case kInsert: ok = insert(e.a); break;
            case kCross: ok = cross_over(e.a, e.b); break;
            }
            if (!ok) return false;
        }
        out.count = count_;
        out.pairs_examined = examined_;
        return true;
    }

private:
    static constexpr int kRemove = 0, kInsert = 1, kCross = 2;
    static constexpr double kMinWidth = 1e-7;
    static constexpr double kTieY = 1e-11;
    static constexpr double kTieX = 1e-11;

    struct Event {
        double x, y;
        int type;
        int a, b;
        // Min-heap on (x, y, type).
        bool operator<(const Event& o) const
        {
            if (x != o.x) return x > o.x;
            if (y != o.y) return y > o.y;
            return type > o.type;
        }
    };

    struct Node {
        int seg = -1;
        int left = -1, right = -1, parent = -1;
        std::uint64_t priority = 0;
    };

    double y_at(int i, double x) const
    {
        const Point& p = left_[i];
        const Point& q = right_[i];
        if (x <= p.x) return p.y;
        if (x >= q.x) return q.y;
        return p.y + (x - p.x) * (q.y - p.y) / (q.x - p.x);
    }

    double slope(int i) const { return (right_[i].y - left_[i].y) / (right_[i].x - left_[i].x); }

    /// Sign of (new segment s) relative to active segment t at the sweep line:
    /// -1 below, +1 above, 0 unresolvable.
    int compare_new(int s, int t) const
    {
        const double diff = left_[s].y - y_at(t, sweep_x_);
        if (diff > kTieY) return 1;
        if (diff < -kTieY) return -1;
        // Only a shared starting vertex may tie; order by slope just right of it.
        if (!(left_[t] == left_[s])) return 0;
        const double ds = slope(s) - slope(t);
        if (ds > 0.0) return 1;
        if (ds < 0.0) return -1;
        return 0;
    }

    // --- treap maintenance -------------------------------------------------

    void set_child(int parent, bool right_side, int child)
    {
        if (parent < 0) {
            root_ = child;
        } else if (right_side) {
            nodes_[parent].right = child;
        } else {
            nodes_[parent].left = child;
        }
        if (child >= 0) nodes_[child].parent = parent;
    }

    bool is_right_child(int x) const
    {
        const int p = nodes_[x].parent;
        return p >= 0 && nodes_[p].right == x;
    }

    void rotate_up(int x)
    {
        const int p = nodes_[x].parent;
        const int g = nodes_[p].parent;
        const bool p_right = is_right_child(p);
        if (nodes_[p].left == x) {
            set_child(p, false, nodes_[x].right);
            set_child(x, true, p);
        } else {
            set_child(p, true, nodes_[x].left);
            set_child(x, false, p);
        }
        set_child(g, p_right, x);
    }

    int successor(int x) const
    {
        if (nodes_[x].right >= 0) {
            x = nodes_[x].right;
            while (nodes_[x].left >= 0) x = nodes_[x].left;
            return x;
        }
        while (nodes_[x].parent >= 0 && is_right_child(x)) x = nodes_[x].parent;
        return nodes_[x].parent;
    }

    int predecessor(int x) const
    {
        if (nodes_[x].left >= 0) {
            x = nodes_[x].left;
            while (nodes_[x].right >= 0) x = nodes_[x].right;
            return x;
        }
        while (nodes_[x].parent >= 0 && !is_right_child(x)) x = nodes_[x].parent;
        return nodes_[x].parent;
    }

    int seg_above(int s) const
    {
        const int nx = successor(node_of_[s]);
        return nx < 0 ? -1 : nodes_[nx].seg;
    }

    int seg_below(int s) const
    {
        const int nx = predecessor(node_of_[s]);
        return nx < 0 ? -1 : nodes_[nx].seg;
    }

    // --- events -------------------------------------------------------------

    bool insert(int s)
    {
        // Segment s owns node slot s.
        Node& node = nodes_[s];
        node = Node{s, -1, -1, -1, mix64(static_cast<std::uint64_t>(s) + 1)};
        node_of_[s] = s;
        int parent = -1;
        bool right_side = false;
        for (int cur = root_; cur >= 0;) {
            const int c = compare_new(s, nodes_[cur].seg);
            if (c == 0) return false;
            parent = cur;
            right_side = c > 0;
            cur = right_side ? nodes_[cur].right : nodes_[cur].left;
        }
        set_child(parent, right_side, s);
        while (nodes_[s].parent >= 0 && nodes_[nodes_[s].parent].priority < nodes_[s].priority) rotate_up(s);
        return check(seg_below(s), s) && check(s, seg_above(s));
    }

    bool remove(int s)
    {
        const int below = seg_below(s), above = seg_above(s);
        const int x = node_of_[s];
        // Rotate down until x has at most one child, then splice it out.
        while (nodes_[x].left >= 0 && nodes_[x].right >= 0) {
            const int l = nodes_[x].left, r = nodes_[x].right;
            rotate_up(nodes_[l].priority > nodes_[r].priority ? l : r);
        }
        const int child = nodes_[x].left >= 0 ? nodes_[x].left : nodes_[x].right;
        set_child(nodes_[x].parent, is_right_child(x), child);
        node_of_[s] = -1;
        return check(below, above);
    }

    bool cross_over(int a, int b)
    {
        if (node_of_[a] < 0 || node_of_[b] < 0) return false;  // crossing after an endpoint
        int lower, upper;
        if (seg_above(a) == b) {
            lower = a;
            upper = b;
        } else if (seg_above(b) == a) {
            lower = b;
            upper = a;
        } else {
            return false;  // crossing events out of order
        }
        const int nl = node_of_[lower], nu = node_of_[upper];
        std::swap(nodes_[nl].seg, nodes_[nu].seg);
        node_of_[lower] = nu;
        node_of_[upper] = nl;
        // After the swap `upper` sits below `lower`.
        return check(seg_below(upper), upper) && check(lower, seg_above(lower));
    }

    /// Tests a newly adjacent pair (lo below hi) and schedules its crossing.
    bool check(int lo, int hi)
    {
        if (lo < 0 || hi < 0) return true;
        const std::uint64_t key = lo < hi ? (static_cast<std::uint64_t>(lo) << 32) | static_cast<std::uint32_t>(hi)
                                          : (static_cast<std::uint64_t>(hi) << 32) | static_cast<std::uint32_t>(lo);
        if (found_.contains(key)) return true;
        ++examined_;
        const Segment& s = segs_[lo];
        const Segment& t = segs_[hi];
        if (!segments_properly_intersect(s, t)) return true;
        found_.insert(key);
        const Point ds = s.b - s.a, dt = t.b - t.a;
        const double u = cross(t.a - s.a, dt) / cross(ds, dt);
        const Point hit = s.a + u * ds;
        if (hit.x < sweep_x_ - kTieX) return false;  // a crossing was skipped
        const int n = static_cast<int>(segs_.size());
        const int k = std::min(s.index, t.index), l = std::max(s.index, t.index);
        if (admissible(k, l, n, closed_)) ++count_;
        events_.push({std::max(hit.x, sweep_x_), hit.y, kCross, lo, hi});
        return true;
    }

    const std::vector<Segment>& segs_;
    bool closed_;
    std::vector<Point> left_, right_;
    std::vector<Node> nodes_;
    std::vector<int> node_of_;
    int root_ = -1;
    double sweep_x_ = 0.0;
    std::priority_queue<Event> events_;
    std::unordered_set<std::uint64_t> found_;
    long long count_ = 0;
    long long examined_ = 0;
};

inline CountResult count_sweep(const std::vector<Segment>& segs, bool closed)
{
    if (segs.size() < 3) return {0, 0, CountMethod::sweep};
    Sweep sweep(segs, closed);
    CountResult r;
    if (sweep.run(r)) return r;
    return count_naive(segs, closed);
}

}  // namespace detail

inline CountResult count_self_intersections_naive(const Walk& w)
{
    return detail::count_naive(detail::segments_of(w.vertices(), false), false);
}

inline CountResult count_self_intersections_naive(const Polygon& p)
{
    return detail::count_naive(detail::segments_of(p.vertices(), true), true);
}

/// Output-sensitive count, O((n + K) log n). Falls back to the naive count
/// (reported through CountResult::method) when the event order is ambiguous.
inline CountResult count_self_intersections_sweep(const Walk& w)
{
    return detail::count_sweep(detail::segments_of(w.vertices(), false), false);
}

inline CountResult count_self_intersections_sweep(const Polygon& p)
{
    return detail::count_sweep(detail::segments_of(p.vertices(), true), true);
}

template <class Shape>
CountResult count_self_intersections(const Shape& s, CountMethod method)
{
    return method == CountMethod::naive ? count_self_intersections_naive(s) : count_self_intersections_sweep(s);
}

}  // namespace eqwalk
