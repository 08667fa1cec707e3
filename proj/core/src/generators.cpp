#include "flipmatch/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <array>
#include <sstream>

#include "flipmatch/errors.hpp"

namespace flipmatch {

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
    if (images_.empty()) throw InvalidInput("permutation must have at least one element");
    std::vector<bool> seen(images_.size(), false);
    for (int v : images_) {
        if (v < 0 || static_cast<std::size_t>(v) >= images_.size() || seen[v]) {
            throw InvalidInput("not a permutation of 0.." + std::to_string(images_.size() - 1));
        }
        seen[v] = true;
    }
}

Permutation Permutation::identity(std::size_t n) {
    std::vector<int> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<int>(i);
    return Permutation(std::move(v));
}

Permutation Permutation::reverse(std::size_t n) {
    std::vector<int> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<int>(n - 1 - i);
    return Permutation(std::move(v));
}

std::size_t Permutation::inversions() const {
    std::size_t count = 0;
    for (std::size_t i = 0; i < images_.size(); ++i) {
        for (std::size_t j = i + 1; j < images_.size(); ++j) count += images_[i] > images_[j] ? 1 : 0;
    }
    return count;
}

Provenance Provenance::two_line(Permutation pi) {
    Provenance p;
    p.kind = Kind::TwoLine;
    p.n = pi.size();
    p.permutation = std::move(pi);
    return p;
}

Provenance Provenance::convex(std::size_t n) {
    Provenance p;
    p.kind = Kind::Convex;
    p.n = n;
    return p;
}

Provenance Provenance::random(std::size_t n, std::uint64_t seed, BBox bbox) {
    Provenance p;
    p.kind = Kind::Random;
    p.n = n;
    p.seed = seed;
    p.bbox = bbox;
    return p;
}

Provenance Provenance::fixture(std::string name) {
    Provenance p;
    p.kind = Kind::Fixture;
    p.label = std::move(name);
    return p;
}

Provenance Provenance::custom(std::string text) {
    Provenance p;
    p.kind = Kind::Custom;
    p.label = std::move(text);
    return p;
}

std::string Provenance::to_string() const {
    std::ostringstream out;
    switch (kind) {
        case Kind::TwoLine: {
            out << "two-line:";
            for (std::size_t i = 0; i < permutation.size(); ++i) out << (i ? "," : "") << permutation(i);
            break;
        }
        case Kind::Convex: out << "convex:" << n; break;
        case Kind::Random:
            out << "random:n=" << n << ",seed=" << seed << ",bbox=" << bbox.xmin << "," << bbox.ymin << ","
                << bbox.xmax << "," << bbox.ymax;
            break;
        case Kind::Fixture: out << "fixture:" << label; break;
        case Kind::Custom: out << label; break;
    }
    return out.str();
}

namespace {

std::vector<long long> parse_ints(const std::string& text) {
    std::vector<long long> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        out.push_back(std::stoll(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
    }
    return out;
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

}  // namespace

Provenance Provenance::parse(const std::string& text) {
    try {
        if (starts_with(text, "two-line:")) {
            std::vector<int> images;
            for (auto v : parse_ints(text.substr(9))) images.push_back(static_cast<int>(v));
            Provenance p = two_line(Permutation(std::move(images)));
            if (p.to_string() == text) return p;
        } else if (starts_with(text, "convex:")) {
            const auto v = parse_ints(text.substr(7));
            if (v.size() == 1 && v[0] > 0) {
                Provenance p = convex(static_cast<std::size_t>(v[0]));
                if (p.to_string() == text) return p;
            }
        } else if (starts_with(text, "random:n=")) {
            const auto seed_at = text.find(",seed=");
            const auto bbox_at = text.find(",bbox=");
            if (seed_at != std::string::npos && bbox_at != std::string::npos && seed_at < bbox_at) {
                const auto n = std::stoull(text.substr(9, seed_at - 9));
                const auto seed = std::stoull(text.substr(seed_at + 6, bbox_at - seed_at - 6));
                const auto b = parse_ints(text.substr(bbox_at + 6));
                if (b.size() == 4) {
                    Provenance p = random(n, seed, BBox{b[0], b[1], b[2], b[3]});
                    if (p.to_string() == text) return p;
                }
            }
        } else if (starts_with(text, "fixture:")) {
            return fixture(text.substr(8));
        }
    } catch (const std::exception&) {
        // Falls through to a verbatim custom tag.
    }
    return custom(text);
}

Instance make_instance(PointSet points, Matching matching, Provenance provenance, std::string notes) {
    if (matching.num_points() != points.size()) {
        throw InvalidInput("matching covers " + std::to_string(matching.num_points()) + " points but the set has " +
                           std::to_string(points.size()));
    }
    if (const auto bad = validate_general_position(points)) {
        std::string idx;
        for (int i : bad->indices) idx += (idx.empty() ? "" : ",") + std::to_string(i);
        throw InvalidInput(std::string(bad->is_duplicate() ? "duplicate points " : "collinear points ") + idx);
    }
    return Instance{std::move(points), std::move(matching), std::move(provenance), std::move(notes)};
}

Instance gen_two_line(const Permutation& pi) {
    const auto n = static_cast<Coord>(pi.size());
    const Coord spacing = 4 * n;
    const Coord height = 8 * n * spacing;
    if (height > kCoordinateBudget) {
        throw CoordinateOverflow("two-line instance with n=" + std::to_string(n) + " exceeds the coordinate budget");
    }
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(2 * n));
    for (Coord i = 0; i < n; ++i) pts.push_back({spacing * i, i * i});
    for (Coord j = 0; j < n; ++j) pts.push_back({spacing * j + spacing / 2, height - j * j});
    std::vector<Segment> pairs;
    for (std::size_t i = 0; i < pi.size(); ++i) {
        pairs.emplace_back(static_cast<int>(i), static_cast<int>(pi.size()) + pi(i));
    }
    PointSet points(std::move(pts));
    Matching m(points.size(), std::move(pairs));
    Instance inst = make_instance(std::move(points), std::move(m), Provenance::two_line(pi));

    // The perturbation must not change which pairs cross.
    for (std::size_t i = 0; i < pi.size(); ++i) {
        for (std::size_t k = i + 1; k < pi.size(); ++k) {
            const Segment si(static_cast<int>(i), static_cast<int>(pi.size()) + pi(i));
            const Segment sk(static_cast<int>(k), static_cast<int>(pi.size()) + pi(k));
            if (segments_properly_cross(si, sk, inst.points) != (pi(i) > pi(k))) {
                throw GenerationFailed("two-line perturbation altered the crossing of bottom points " +
                                       std::to_string(i) + " and " + std::to_string(k));
            }
        }
    }
    return inst;
}

namespace {

std::optional<std::array<int, 3>> convex_defect(const std::vector<Point>& pts) {
    const int m = static_cast<int>(pts.size());
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            if (pts[i].x == pts[j].x) return std::array<int, 3>{i, j, j};
            for (int k = j + 1; k < m; ++k) {
                if (orient(pts[i], pts[j], pts[k]) <= 0) return std::array<int, 3>{i, j, k};
            }
        }
    }
    return std::nullopt;
}

}  // namespace

Instance gen_convex(std::size_t n) {
    if (n == 0) throw InvalidInput("convex instance needs n >= 1");
    constexpr double radius = 65536.0;
    constexpr int max_attempts = 16;
    const std::size_t count = 2 * n;
    std::array<int, 3> last_defect{};
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        const double offset = 0.1 + 0.0137 * attempt;
        std::vector<Point> pts;
        pts.reserve(count);
        for (std::size_t k = 0; k < count; ++k) {
            const double theta = offset + 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
            pts.push_back({static_cast<Coord>(std::llround(radius * std::cos(theta))),
                           static_cast<Coord>(std::llround(radius * std::sin(theta)))});
        }
        if (const auto defect = convex_defect(pts)) {
            last_defect = *defect;
            continue;
        }
        std::vector<Segment> pairs;
        const int ni = static_cast<int>(n);
        pairs.emplace_back(0, ni);
        for (int j = 1; j < ni; ++j) pairs.emplace_back(j, 2 * ni - j);
        PointSet points(std::move(pts));
        Matching m(points.size(), std::move(pairs));
        return make_instance(std::move(points), std::move(m), Provenance::convex(n));
    }
    throw GenerationFailed("convex placement failed for n=" + std::to_string(n) + " at points " +
                           std::to_string(last_defect[0]) + "," + std::to_string(last_defect[1]) + "," +
                           std::to_string(last_defect[2]));
}

Coord uniform_coord(std::mt19937_64& rng, Coord lo, Coord hi) {
    const auto range = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<Coord>(rng() % range);
}

Matching random_matching(std::size_t num_points, std::mt19937_64& rng) {
    std::vector<int> order(num_points);
    for (std::size_t i = 0; i < num_points; ++i) order[i] = static_cast<int>(i);
    for (std::size_t i = num_points; i > 1; --i) {
        std::swap(order[i - 1], order[rng() % i]);
    }
    std::vector<Segment> pairs;
    pairs.reserve(num_points / 2);
    for (std::size_t i = 0; i + 1 < num_points; i += 2) pairs.emplace_back(order[i], order[i + 1]);
    return Matching(num_points, std::move(pairs));
}

Instance gen_random(std::size_t n, std::uint64_t seed, const BBox& bbox) {
    if (n == 0) throw InvalidInput("random instance needs n >= 1");
    if (bbox.xmin > bbox.xmax || bbox.ymin > bbox.ymax) throw InvalidInput("empty bounding box");
    if (!within_budget({bbox.xmin, bbox.ymin}) || !within_budget({bbox.xmax, bbox.ymax})) {
        throw CoordinateOverflow("bounding box exceeds the coordinate budget");
    }
    std::mt19937_64 rng(seed);
    const std::size_t count = 2 * n;
    const std::size_t budget = 1000 + 200 * count;
    std::vector<Point> pts;
    pts.reserve(count);
    std::size_t attempts = 0;
    while (pts.size() < count) {
        if (attempts++ >= budget) {
            throw GenerationFailed("rejection budget of " + std::to_string(budget) + " samples exhausted after placing " +
                                   std::to_string(pts.size()) + " of " + std::to_string(count) + " points");
        }
        const Point cand{uniform_coord(rng, bbox.xmin, bbox.xmax), uniform_coord(rng, bbox.ymin, bbox.ymax)};
        bool ok = true;
        for (std::size_t i = 0; i < pts.size() && ok; ++i) {
            if (pts[i] == cand) ok = false;
            for (std::size_t j = i + 1; j < pts.size() && ok; ++j) ok = orient(pts[i], pts[j], cand) != 0;
        }
        if (ok) pts.push_back(cand);
    }
    PointSet points(std::move(pts));
    Matching m = random_matching(points.size(), rng);
    return make_instance(std::move(points), std::move(m), Provenance::random(n, seed, bbox));
}

namespace fixtures {

Instance square_diagonals() {
    PointSet points({{0, 0}, {2, 0}, {2, 2}, {0, 2}});
    Matching m(4, {Segment(0, 2), Segment(1, 3)});
    return make_instance(std::move(points), std::move(m), Provenance::fixture("square"));
}

Instance segment_reappears() {
    PointSet points({{0, 8}, {10, 0}, {10, 20}, {20, 0}, {20, 20}, {30, 8}});
    Matching m(6, {Segment(0, 5), Segment(1, 4), Segment(2, 3)});
    return make_instance(std::move(points), std::move(m), Provenance::fixture("segment-reappears"));
}

std::vector<ScriptedFlip> segment_reappears_script() {
    // Each step is the reconnection whose pairs are listed in the comment.
    const Instance inst = segment_reappears();
    const auto choose = [&](const CrossingPair& c, const Segment& want) {
        const auto [a1, a2] = reconnect(inst.points, c, FlipChoice::ReconnectA);
        return (a1 == want || a2 == want) ? FlipChoice::ReconnectA : FlipChoice::ReconnectB;
    };
    std::vector<ScriptedFlip> script;
    const CrossingPair c1(Segment(1, 4), Segment(2, 3));  // -> p2p3, p4p5
    script.push_back({c1, choose(c1, Segment(1, 2))});
    const CrossingPair c2(Segment(0, 5), Segment(1, 2));  // -> p1p2, p3p6
    script.push_back({c2, choose(c2, Segment(0, 1))});
    const CrossingPair c3(Segment(2, 5), Segment(3, 4));  // -> p3p4, p5p6
    script.push_back({c3, choose(c3, Segment(2, 3))});
    return script;
}

Instance crossing_increase() {
    // Frozen output of a randomized search over gen_random(5, seed, 0..60 box);
    // seed 2973128728273708859 was the first hit.
    PointSet points({{18, 5}, {23, 43}, {54, 18}, {50, 44}, {38, 38}, {18, 19}, {21, 1}, {14, 11}, {34, 34}, {10, 35}});
    Matching m(10, {Segment(0, 5), Segment(1, 7), Segment(2, 4), Segment(3, 9), Segment(6, 8)});
    return make_instance(std::move(points), std::move(m), Provenance::fixture("crossing-increase"));
}

FlipChoice crossing_increase_choice() { return FlipChoice::ReconnectA; }

}  // namespace fixtures

}  // namespace flipmatch
