#include "flipmatch/matching.hpp"

#include <algorithm>
#include <cmath>

#include "flipmatch/errors.hpp"

namespace flipmatch {

Matching::Matching(std::size_t num_points, std::vector<Segment> pairs)
    : pairs_(std::move(pairs)), mates_(num_points, -1) {
    if (num_points == 0 || num_points % 2 != 0 || pairs_.size() * 2 != num_points) {
        throw InvalidInput("a perfect matching on " + std::to_string(num_points) + " points needs " +
                           std::to_string(num_points / 2) + " segments, got " +
                           std::to_string(pairs_.size()));
    }
    for (const auto& s : pairs_) {
        if (s.a < 0 || static_cast<std::size_t>(s.b) >= num_points) {
            throw InvalidInput("segment " + to_string(s) + " references a missing point");
        }
        if (mates_[s.a] != -1 || mates_[s.b] != -1) {
            throw InvalidInput("segment " + to_string(s) + " reuses an already matched point");
        }
        mates_[s.a] = s.b;
        mates_[s.b] = s.a;
    }
    std::sort(pairs_.begin(), pairs_.end());
}

bool Matching::contains(const Segment& s) const {
    return s.b < static_cast<int>(mates_.size()) && mates_[s.a] == s.b;
}

Matching Matching::replace(const Segment& removed_1, const Segment& removed_2, const Segment& added_1,
                           const Segment& added_2) const {
    Matching out;
    out.mates_ = mates_;
    out.pairs_.reserve(pairs_.size());
    for (const auto& s : pairs_) {
        if (s != removed_1 && s != removed_2) out.pairs_.push_back(s);
    }
    for (const auto& s : {added_1, added_2}) {
        out.pairs_.insert(std::upper_bound(out.pairs_.begin(), out.pairs_.end(), s), s);
        out.mates_[s.a] = s.b;
        out.mates_[s.b] = s.a;
    }
    return out;
}

std::string Matching::key() const {
    std::string k;
    k.reserve(mates_.size() * 2);
    for (int m : mates_) {
        k.push_back(static_cast<char>(m & 0xff));
        k.push_back(static_cast<char>((m >> 8) & 0xff));
    }
    return k;
}

std::string to_string(const Matching& m) {
    std::string out = "{";
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i > 0) out += ",";
        out += to_string(m[i]);
    }
    return out + "}";
}

CrossingPair::CrossingPair(const Segment& s, const Segment& t) : e1(std::min(s, t)), e2(std::max(s, t)) {}

char to_char(FlipChoice choice) noexcept { return choice == FlipChoice::ReconnectA ? 'A' : 'B'; }

FlipChoice flip_choice_from_char(char c) {
    if (c == 'A' || c == 'a') return FlipChoice::ReconnectA;
    if (c == 'B' || c == 'b') return FlipChoice::ReconnectB;
    throw InvalidInput(std::string("unknown flip choice '") + c + "'");
}

std::array<int, 4> quad_labels(const PointSet& points, const CrossingPair& c) {
    if (!segments_properly_cross(c.e1, c.e2, points)) {
        throw InvalidInput("segments " + to_string(c.e1) + " and " + to_string(c.e2) + " do not cross");
    }
    // e1 < e2 and both are normalized, so e1.a is the lowest of the four indices.
    const int q1 = c.e1.a;
    const int q3 = c.e1.b;
    int q2 = c.e2.a;
    int q4 = c.e2.b;
    if (orient(points[q1], points[q2], points[q3]) < 0) std::swap(q2, q4);
    return {q1, q2, q3, q4};
}

std::pair<Segment, Segment> reconnect(const PointSet& points, const CrossingPair& c, FlipChoice choice) {
    const auto q = quad_labels(points, c);
    if (choice == FlipChoice::ReconnectA) return {Segment(q[0], q[1]), Segment(q[2], q[3])};
    return {Segment(q[1], q[2]), Segment(q[3], q[0])};
}

FlipChoice greedy_x_choice(const PointSet& points, const CrossingPair& c) {
    std::array<int, 4> ends{c.e1.a, c.e1.b, c.e2.a, c.e2.b};
    std::sort(ends.begin(), ends.end(), [&](int i, int j) { return points[i] < points[j]; });
    const Segment left(ends[0], ends[1]);
    const auto [a1, a2] = reconnect(points, c, FlipChoice::ReconnectA);
    return (a1 == left || a2 == left) ? FlipChoice::ReconnectA : FlipChoice::ReconnectB;
}

std::vector<CrossingPair> find_crossings(const PointSet& points, const Matching& m) {
    std::vector<CrossingPair> out;
    const auto segs = m.segments();
    for (std::size_t i = 0; i < segs.size(); ++i) {
        for (std::size_t j = i + 1; j < segs.size(); ++j) {
            if (segments_properly_cross(segs[i], segs[j], points)) out.emplace_back(segs[i], segs[j]);
        }
    }
    return out;
}

std::size_t count_crossings(const PointSet& points, const Matching& m) {
    std::size_t count = 0;
    const auto segs = m.segments();
    for (std::size_t i = 0; i < segs.size(); ++i) {
        for (std::size_t j = i + 1; j < segs.size(); ++j) {
            count += segments_properly_cross(segs[i], segs[j], points) ? 1 : 0;
        }
    }
    return count;
}

bool is_noncrossing(const PointSet& points, const Matching& m) {
    const auto segs = m.segments();
    for (std::size_t i = 0; i < segs.size(); ++i) {
        for (std::size_t j = i + 1; j < segs.size(); ++j) {
            if (segments_properly_cross(segs[i], segs[j], points)) return false;
        }
    }
    return true;
}

double segment_length(const PointSet& points, const Segment& s) {
    const auto dx = static_cast<double>(points[s.b].x - points[s.a].x);
    const auto dy = static_cast<double>(points[s.b].y - points[s.a].y);
    return std::hypot(dx, dy);
}

double total_length(const PointSet& points, const Matching& m) {
    double sum = 0.0;
    for (const auto& s : m.segments()) sum += segment_length(points, s);
    return sum;
}

bool length_strictly_decreased(double before, double after) noexcept {
    // A genuine decrease can be swallowed by rounding; only an increase beyond
    // the relative band counts as a failure.
    return after < before || after - before <= kLengthTolerance * before;
}

namespace {

void require_live(const Matching& m, const CrossingPair& c) {
    if (!m.contains(c.e1) || !m.contains(c.e2)) {
        throw StaleCrossing("crossing " + to_string(c.e1) + " x " + to_string(c.e2) +
                            " is not present in " + to_string(m));
    }
}

}  // namespace

FlipResult flip(const PointSet& points, const Matching& m, const CrossingPair& c, FlipChoice choice) {
    require_live(m, c);
    const auto [n1, n2] = reconnect(points, c, choice);
    FlipRecord rec;
    rec.crossing = c;
    rec.choice = choice;
    rec.new_e1 = std::min(n1, n2);
    rec.new_e2 = std::max(n1, n2);
    rec.length_before = total_length(points, m);
    Matching next = m.replace(c.e1, c.e2, rec.new_e1, rec.new_e2);
    rec.length_after = total_length(points, next);
    return {std::move(next), rec};
}

Matching apply_flip(const PointSet& points, const Matching& m, const CrossingPair& c, FlipChoice choice) {
    const auto [n1, n2] = reconnect(points, c, choice);
    return m.replace(c.e1, c.e2, n1, n2);
}

Matching replay(const PointSet& points, const Matching& initial, std::span<const FlipRecord> records) {
    Matching current = initial;
    for (std::size_t step = 0; step < records.size(); ++step) {
        const auto& rec = records[step];
        if (!current.contains(rec.crossing.e1) || !current.contains(rec.crossing.e2)) {
            throw ReplayError(step, "crossing " + to_string(rec.crossing.e1) + " x " +
                                        to_string(rec.crossing.e2) + " is absent");
        }
        if (!segments_properly_cross(rec.crossing.e1, rec.crossing.e2, points)) {
            throw ReplayError(step, "recorded segments do not cross");
        }
        const auto [n1, n2] = reconnect(points, rec.crossing, rec.choice);
        if (std::min(n1, n2) != rec.new_e1 || std::max(n1, n2) != rec.new_e2) {
            throw ReplayError(step, "recorded reconnection disagrees with choice " +
                                        std::string(1, to_char(rec.choice)));
        }
        current = current.replace(rec.crossing.e1, rec.crossing.e2, n1, n2);
    }
    return current;
}

}  // namespace flipmatch
