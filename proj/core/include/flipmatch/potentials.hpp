#pragma once

// The two potential functions that bound flip sequences, evaluated purely
// combinatorially.
//
// phi_lines counts (line, segment) crossings over the two infinitesimally
// offset copies of every supporting line through two points of P. A copy is
// represented by its anchor pair and the side it was pushed towards; it is
// never materialized numerically.
//
// phi_vertical counts (gap line, segment) crossings over the 2n-1 vertical
// lines separating consecutive points in x order.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flipmatch/geometry.hpp"
#include "flipmatch/matching.hpp"

namespace flipmatch {

enum class Side : std::uint8_t { Plus, Minus };

// Copy of the supporting line of points p < q pushed towards the side where
// orient(p, q, .) has the given sign.
struct PerturbedLine {
    int p = 0;
    int q = 1;
    Side side = Side::Plus;

    friend auto operator<=>(const PerturbedLine&, const PerturbedLine&) = default;
};

std::string to_string(const PerturbedLine& line);

// Sign of point i relative to the offset line; never zero.
int adjusted_side(const PerturbedLine& line, int i, const PointSet& points);

bool crosses_perturbed_line(const PerturbedLine& line, const Segment& s, const PointSet& points);

// All 2 * C(2n, 2) offset lines, ordered by (p, q, side).
std::vector<PerturbedLine> perturbed_lines(const PointSet& points);

std::int64_t phi_lines(const PointSet& points, const Matching& m);

// Requires pairwise distinct x; throws InvalidInput otherwise.
std::int64_t phi_vertical(const PointSet& points, const Matching& m);

// Bounds for phi_lines: the stated 4n^3 and the sharper |lines| * n.
std::int64_t phi_lines_bound(std::size_t n) noexcept;
std::int64_t phi_lines_sharp_bound(std::size_t n) noexcept;
// Bound for phi_vertical with 2n-1 gap lines: n(2n-1).
std::int64_t phi_vertical_bound(std::size_t n) noexcept;

enum class LineType : std::uint8_t { L1, L2, L3, NoIntersect };

const char* to_string(LineType type) noexcept;

// L1 separates {q1,q2} | {q3,q4} (the pairs of ReconnectA), L2 separates
// {q2,q3} | {q4,q1} (ReconnectB), L3 isolates a single endpoint.
LineType classify_line_vs_quad(const PerturbedLine& line, const CrossingPair& quad, const PointSet& points);

struct LineAudit {
    PerturbedLine line;
    LineType type = LineType::NoIntersect;
    int before = 0;  // crossings with the two removed segments
    int after = 0;   // crossings with the two added segments
    int delta() const noexcept { return after - before; }
};

struct DecrementAudit {
    CrossingPair crossing;
    FlipChoice choice = FlipChoice::ReconnectA;
    Segment new_e1;
    Segment new_e2;
    // Only lines meeting the hull of the quad (type != NoIntersect).
    std::vector<LineAudit> lines;
    std::array<std::size_t, 4> type_counts{};  // indexed by LineType
    std::int64_t phi_l_before = 0;
    std::int64_t phi_l_after = 0;
    std::optional<std::int64_t> phi_k_before;
    std::optional<std::int64_t> phi_k_after;
    // Gap lines strictly between the 2nd and 3rd endpoint in x order.
    std::optional<int> middle_gaps;

    std::int64_t delta_phi_l() const noexcept { return phi_l_after - phi_l_before; }
    std::optional<std::int64_t> delta_phi_k() const {
        if (!phi_k_before || !phi_k_after) return std::nullopt;
        return *phi_k_after - *phi_k_before;
    }
};

// Dry run of a flip. phi_k fields are filled only when P has distinct x.
// Throws StaleCrossing like flip(), and InvariantViolation if any single
// offset line would gain crossings.
DecrementAudit decrement_audit(const PointSet& points, const Matching& m, const CrossingPair& c,
                               FlipChoice choice);

}  // namespace flipmatch
