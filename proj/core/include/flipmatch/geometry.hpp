#pragma once

// Exact integer predicates. Every geometric decision in the library goes
// through orient(); no floating point is used for control flow anywhere.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace flipmatch {

using Coord = std::int64_t;

// |x|, |y| <= 2^20 keeps every orientation determinant below 8 * 2^40.
inline constexpr Coord kCoordinateBudget = Coord{1} << 20;

struct Point {
    Coord x = 0;
    Coord y = 0;

    friend auto operator<=>(const Point&, const Point&) = default;
};

bool within_budget(const Point& p) noexcept;

// Immutable ground set P of 2n points. Identity of a point is its index.
// Construction checks the coordinate budget and the even, non-zero size;
// general position is a separate check (validate_general_position).
class PointSet {
public:
    PointSet() = default;
    explicit PointSet(std::vector<Point> points);

    std::size_t size() const noexcept { return points_.size(); }
    std::size_t pairs() const noexcept { return points_.size() / 2; }
    const Point& operator[](std::size_t i) const { return points_[i]; }
    std::span<const Point> points() const noexcept { return points_; }

    bool has_distinct_x() const;

    friend bool operator==(const PointSet&, const PointSet&) = default;

private:
    std::vector<Point> points_;
};

// Endpoint indices, normalized so that a < b.
struct Segment {
    int a = 0;
    int b = 0;

    Segment() = default;
    Segment(int u, int v);

    bool shares_endpoint(const Segment& other) const noexcept {
        return a == other.a || a == other.b || b == other.a || b == other.b;
    }
    bool has(int i) const noexcept { return a == i || b == i; }

    friend auto operator<=>(const Segment&, const Segment&) = default;
};

std::string to_string(const Segment& s);

// Sign of the signed area of (p, q, r): +1 counterclockwise, -1 clockwise, 0 collinear.
int orient(const Point& p, const Point& q, const Point& r) noexcept;

// Strict straddle test in both directions. Throws InvalidInput if the two
// segments share an endpoint.
bool segments_properly_cross(const Segment& s, const Segment& t, const PointSet& points);

struct GeneralPositionViolation {
    // Two indices for a duplicate point, three for a collinear triple.
    std::vector<int> indices;

    bool is_duplicate() const noexcept { return indices.size() == 2; }
    friend bool operator==(const GeneralPositionViolation&, const GeneralPositionViolation&) = default;
};

// Empty optional means the set is in general position. Duplicates are
// reported before collinear triples; each scan is in lexicographic index order.
std::optional<GeneralPositionViolation> validate_general_position(const PointSet& points);

// Identity if all x are distinct; otherwise applies (x, y) -> (x*C + y, y)
// with C = 1 + 2*max|y|. The map has positive determinant, so every orient
// sign is preserved, and the new x order equals the lexicographic (x, y)
// order of the input. Throws CoordinateOverflow if the image leaves the budget.
PointSet shear_to_distinct_x(const PointSet& points);

// Rank of each point in increasing x order. Throws InvalidInput on duplicate x.
std::vector<int> x_ranks(const PointSet& points);

}  // namespace flipmatch
