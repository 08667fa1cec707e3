#include "flipmatch/geometry.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "flipmatch/errors.hpp"

namespace flipmatch {

namespace {

Coord abs_coord(Coord v) noexcept { return v < 0 ? -v : v; }

}  // namespace

bool within_budget(const Point& p) noexcept {
    return abs_coord(p.x) <= kCoordinateBudget && abs_coord(p.y) <= kCoordinateBudget;
}

PointSet::PointSet(std::vector<Point> points) : points_(std::move(points)) {
    if (points_.empty() || points_.size() % 2 != 0) {
        throw InvalidInput("point set must contain 2n points with n >= 1, got " +
                           std::to_string(points_.size()));
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!within_budget(points_[i])) {
            throw CoordinateOverflow("point " + std::to_string(i) + " exceeds the coordinate budget");
        }
    }
}

bool PointSet::has_distinct_x() const {
    std::vector<Coord> xs;
    xs.reserve(points_.size());
    for (const auto& p : points_) xs.push_back(p.x);
    std::sort(xs.begin(), xs.end());
    return std::adjacent_find(xs.begin(), xs.end()) == xs.end();
}

Segment::Segment(int u, int v) : a(std::min(u, v)), b(std::max(u, v)) {
    if (u == v) throw InvalidInput("degenerate segment " + std::to_string(u) + "-" + std::to_string(v));
}

std::string to_string(const Segment& s) {
    return std::to_string(s.a) + "-" + std::to_string(s.b);
}

int orient(const Point& p, const Point& q, const Point& r) noexcept {
    const Coord det = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
    return (det > 0) - (det < 0);
}

bool segments_properly_cross(const Segment& s, const Segment& t, const PointSet& points) {
    if (s.shares_endpoint(t)) {
        throw InvalidInput("crossing test on segments sharing an endpoint: " + to_string(s) + ", " +
                           to_string(t));
    }
    const Point& p1 = points[s.a];
    const Point& p2 = points[s.b];
    const Point& q1 = points[t.a];
    const Point& q2 = points[t.b];
    return orient(p1, p2, q1) * orient(p1, p2, q2) < 0 && orient(q1, q2, p1) * orient(q1, q2, p2) < 0;
}

std::optional<GeneralPositionViolation> validate_general_position(const PointSet& points) {
    const int n = static_cast<int>(points.size());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (points[i] == points[j]) return GeneralPositionViolation{{i, j}};
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (int k = j + 1; k < n; ++k) {
                if (orient(points[i], points[j], points[k]) == 0) {
                    return GeneralPositionViolation{{i, j, k}};
                }
            }
        }
    }
    return std::nullopt;
}

PointSet shear_to_distinct_x(const PointSet& points) {
    if (points.has_distinct_x()) return points;
    Coord max_abs_y = 0;
    for (const auto& p : points.points()) max_abs_y = std::max(max_abs_y, abs_coord(p.y));
    const Coord c = 1 + 2 * max_abs_y;
    std::vector<Point> sheared;
    sheared.reserve(points.size());
    for (const auto& p : points.points()) {
        // |x| * C stays far below 2^63 because both factors are within 2^21.
        const Point image{p.x * c + p.y, p.y};
        if (!within_budget(image)) {
            throw CoordinateOverflow("shear factor " + std::to_string(c) +
                                     " pushes coordinates beyond the budget");
        }
        sheared.push_back(image);
    }
    return PointSet(std::move(sheared));
}

std::vector<int> x_ranks(const PointSet& points) {
    std::vector<int> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return points[i].x < points[j].x; });
    std::vector<int> rank(points.size());
    for (std::size_t r = 0; r < order.size(); ++r) {
        if (r > 0 && points[order[r]].x == points[order[r - 1]].x) {
            throw InvalidInput("duplicate x-coordinate " + std::to_string(points[order[r]].x) +
                               "; shear the point set first");
        }
        rank[order[r]] = static_cast<int>(r);
    }
    return rank;
}

}  // namespace flipmatch
