#include "flipmatch/potentials.hpp"

#include <algorithm>
#include <cstdlib>

#include "flipmatch/errors.hpp"

namespace flipmatch {

std::string to_string(const PerturbedLine& line) {
    return std::to_string(line.p) + "-" + std::to_string(line.q) + (line.side == Side::Plus ? "+" : "-");
}

int adjusted_side(const PerturbedLine& line, int i, const PointSet& points) {
    const int sigma = orient(points[line.p], points[line.q], points[i]);
    if (sigma != 0) return sigma;
    // On the supporting line: the offset copy passes to the pushed side of it.
    return line.side == Side::Plus ? -1 : +1;
}

bool crosses_perturbed_line(const PerturbedLine& line, const Segment& s, const PointSet& points) {
    return adjusted_side(line, s.a, points) != adjusted_side(line, s.b, points);
}

std::vector<PerturbedLine> perturbed_lines(const PointSet& points) {
    const int n = static_cast<int>(points.size());
    std::vector<PerturbedLine> lines;
    lines.reserve(static_cast<std::size_t>(n) * (n - 1));
    for (int p = 0; p < n; ++p) {
        for (int q = p + 1; q < n; ++q) {
            lines.push_back({p, q, Side::Plus});
            lines.push_back({p, q, Side::Minus});
        }
    }
    return lines;
}

std::int64_t phi_lines(const PointSet& points, const Matching& m) {
    const int n = static_cast<int>(points.size());
    std::vector<int> sigma(points.size());
    std::int64_t total = 0;
    for (int p = 0; p < n; ++p) {
        for (int q = p + 1; q < n; ++q) {
            for (int i = 0; i < n; ++i) sigma[i] = orient(points[p], points[q], points[i]);
            for (const auto& s : m.segments()) {
                const int sa = sigma[s.a];
                const int sb = sigma[s.b];
                // Plus copy maps 0 to -1, Minus copy maps 0 to +1.
                total += ((sa == 0 ? -1 : sa) != (sb == 0 ? -1 : sb)) ? 1 : 0;
                total += ((sa == 0 ? 1 : sa) != (sb == 0 ? 1 : sb)) ? 1 : 0;
            }
        }
    }
    return total;
}

std::int64_t phi_vertical(const PointSet& points, const Matching& m) {
    const auto rank = x_ranks(points);
    std::int64_t total = 0;
    for (const auto& s : m.segments()) total += std::abs(rank[s.a] - rank[s.b]);
    return total;
}

std::int64_t phi_lines_bound(std::size_t n) noexcept {
    const auto k = static_cast<std::int64_t>(n);
    return 4 * k * k * k;
}

std::int64_t phi_lines_sharp_bound(std::size_t n) noexcept {
    const auto pts = static_cast<std::int64_t>(2 * n);
    return pts * (pts - 1) * static_cast<std::int64_t>(n);
}

std::int64_t phi_vertical_bound(std::size_t n) noexcept {
    const auto k = static_cast<std::int64_t>(n);
    return k * (2 * k - 1);
}

const char* to_string(LineType type) noexcept {
    switch (type) {
        case LineType::L1: return "L1";
        case LineType::L2: return "L2";
        case LineType::L3: return "L3";
        case LineType::NoIntersect: return "none";
    }
    return "?";
}

LineType classify_line_vs_quad(const PerturbedLine& line, const CrossingPair& quad, const PointSet& points) {
    const auto q = quad_labels(points, quad);
    std::array<int, 4> s{};
    int plus = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        s[i] = adjusted_side(line, q[i], points);
        plus += s[i] > 0 ? 1 : 0;
    }
    if (plus == 0 || plus == 4) return LineType::NoIntersect;
    if (plus == 1 || plus == 3) return LineType::L3;
    if (s[0] == s[1]) return LineType::L1;
    if (s[1] == s[2]) return LineType::L2;
    throw InvalidInput("line " + to_string(line) + " separates the diagonals of quad " + to_string(quad.e1) +
                       " x " + to_string(quad.e2) + "; the quad is not in convex position");
}

DecrementAudit decrement_audit(const PointSet& points, const Matching& m, const CrossingPair& c,
                               FlipChoice choice) {
    if (!m.contains(c.e1) || !m.contains(c.e2)) {
        throw StaleCrossing("crossing " + to_string(c.e1) + " x " + to_string(c.e2) + " is not present");
    }
    const auto [n1, n2] = reconnect(points, c, choice);
    DecrementAudit audit;
    audit.crossing = c;
    audit.choice = choice;
    audit.new_e1 = std::min(n1, n2);
    audit.new_e2 = std::max(n1, n2);
    audit.phi_l_before = phi_lines(points, m);

    std::int64_t delta = 0;
    for (const auto& line : perturbed_lines(points)) {
        const LineType type = classify_line_vs_quad(line, c, points);
        audit.type_counts[static_cast<std::size_t>(type)]++;
        if (type == LineType::NoIntersect) continue;
        LineAudit la{line, type, 0, 0};
        la.before = int{crosses_perturbed_line(line, c.e1, points)} + int{crosses_perturbed_line(line, c.e2, points)};
        la.after = int{crosses_perturbed_line(line, n1, points)} + int{crosses_perturbed_line(line, n2, points)};
        if (la.delta() > 0) {
            throw InvariantViolation("offset line " + to_string(line) + " gains crossings when flipping " +
                                     to_string(c.e1) + " x " + to_string(c.e2));
        }
        delta += la.delta();
        audit.lines.push_back(la);
    }
    audit.phi_l_after = audit.phi_l_before + delta;

    if (points.has_distinct_x()) {
        const auto rank = x_ranks(points);
        audit.phi_k_before = phi_vertical(points, m);
        const auto span = [&](const Segment& s) { return std::abs(rank[s.a] - rank[s.b]); };
        audit.phi_k_after = *audit.phi_k_before - span(c.e1) - span(c.e2) + span(n1) + span(n2);
        std::array<int, 4> r{rank[c.e1.a], rank[c.e1.b], rank[c.e2.a], rank[c.e2.b]};
        std::sort(r.begin(), r.end());
        audit.middle_gaps = r[2] - r[1];
    }
    return audit;
}

}  // namespace flipmatch
