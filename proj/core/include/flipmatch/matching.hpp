#pragma once

// The flip state machine: perfect matchings, crossing detection, the flip
// with both reconnection choices, and the total-length monitor.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flipmatch/geometry.hpp"

namespace flipmatch {

// A perfect matching in canonical form: pairs normalized (a < b) and sorted.
// Equal pairings compare equal and produce equal keys.
class Matching {
public:
    Matching() = default;
    // Throws InvalidInput unless every index in [0, num_points) is covered exactly once.
    Matching(std::size_t num_points, std::vector<Segment> pairs);

    std::size_t num_points() const noexcept { return mates_.size(); }
    std::size_t size() const noexcept { return pairs_.size(); }
    std::span<const Segment> segments() const noexcept { return pairs_; }
    const Segment& operator[](std::size_t i) const { return pairs_[i]; }
    int mate(int i) const { return mates_[static_cast<std::size_t>(i)]; }
    bool contains(const Segment& s) const;

    // Removes two present segments and adds two new ones; the result is re-canonicalized.
    Matching replace(const Segment& removed_1, const Segment& removed_2, const Segment& added_1,
                     const Segment& added_2) const;

    // Compact byte string identifying the pairing; used as a hash key by the searches.
    std::string key() const;

    friend bool operator==(const Matching& l, const Matching& r) { return l.pairs_ == r.pairs_; }

private:
    std::vector<Segment> pairs_;
    std::vector<int> mates_;
};

std::string to_string(const Matching& m);

// Unordered pair of properly crossing segments, stored with e1 < e2.
struct CrossingPair {
    Segment e1;
    Segment e2;

    CrossingPair() = default;
    CrossingPair(const Segment& s, const Segment& t);

    friend auto operator<=>(const CrossingPair&, const CrossingPair&) = default;
};

// Label the four endpoints q1..q4 counterclockwise around their convex hull,
// starting at the lowest index. ReconnectA = {q1q2, q3q4}, ReconnectB = {q2q3, q4q1}.
enum class FlipChoice : std::uint8_t { ReconnectA, ReconnectB };

inline constexpr std::array<FlipChoice, 2> kFlipChoices{FlipChoice::ReconnectA, FlipChoice::ReconnectB};

char to_char(FlipChoice choice) noexcept;
FlipChoice flip_choice_from_char(char c);

// q[0..3] as described under FlipChoice. q[0] and q[2] are the endpoints of one
// crossing segment. Throws InvalidInput if the pair does not cross.
std::array<int, 4> quad_labels(const PointSet& points, const CrossingPair& c);

std::pair<Segment, Segment> reconnect(const PointSet& points, const CrossingPair& c, FlipChoice choice);

// The reconnection pairing the two leftmost and the two rightmost endpoints
// (lexicographic (x, y) order, which agrees with x order when x is distinct).
FlipChoice greedy_x_choice(const PointSet& points, const CrossingPair& c);

struct FlipRecord {
    CrossingPair crossing;
    FlipChoice choice = FlipChoice::ReconnectA;
    Segment new_e1;
    Segment new_e2;
    double length_before = 0.0;
    double length_after = 0.0;
    // Filled only by instrumented runners.
    std::optional<std::int64_t> phi_l_before;
    std::optional<std::int64_t> phi_l_after;
    std::optional<std::int64_t> phi_k_before;
    std::optional<std::int64_t> phi_k_after;
    std::optional<std::size_t> crossings_after;
};

struct FlipTrace {
    std::string instance_id;
    Matching initial;
    std::vector<FlipRecord> records;
    Matching final_matching;
    bool complete = false;
    std::optional<std::int64_t> initial_phi_l;
    std::optional<std::int64_t> initial_phi_k;

    std::size_t steps() const noexcept { return records.size(); }
};

// Relative tolerance of the length monitor.
inline constexpr double kLengthTolerance = 1e-9;

std::vector<CrossingPair> find_crossings(const PointSet& points, const Matching& m);
std::size_t count_crossings(const PointSet& points, const Matching& m);
bool is_noncrossing(const PointSet& points, const Matching& m);

double total_length(const PointSet& points, const Matching& m);
double segment_length(const PointSet& points, const Segment& s);

// True iff `after` is shorter than `before`, up to the relative monitor tolerance.
bool length_strictly_decreased(double before, double after) noexcept;

struct FlipResult {
    Matching matching;
    FlipRecord record;
};

// Throws StaleCrossing if either segment is absent from m, InvalidInput if they do not cross.
FlipResult flip(const PointSet& points, const Matching& m, const CrossingPair& c, FlipChoice choice);

// Lean variant for search loops: no record and no length bookkeeping, no checks.
Matching apply_flip(const PointSet& points, const Matching& m, const CrossingPair& c, FlipChoice choice);

// Throws ReplayError naming the first step whose crossing is absent or whose
// recorded reconnection disagrees with its choice.
Matching replay(const PointSet& points, const Matching& initial, std::span<const FlipRecord> records);

}  // namespace flipmatch
