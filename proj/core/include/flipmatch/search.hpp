#pragma once

// Exact search over the flip graph and the strategy runners.
//
// The flip graph has one node per perfect matching of P and one edge per
// (crossing, choice). Every flip strictly shortens the matching, so the graph
// is a DAG; the searches verify this rather than assume it.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "flipmatch/generators.hpp"
#include "flipmatch/matching.hpp"

namespace flipmatch {

struct SearchLimits {
    std::size_t max_states = 10'000'000;
    std::size_t max_depth = 1'000'000;
    std::chrono::milliseconds time_budget{60'000};
};

// Which reconnections count as successors. Both is the default; GreedyXOnly
// keeps a single choice per crossing for sensitivity experiments.
enum class ChoiceRegime : std::uint8_t { Both, GreedyXOnly };

struct Move {
    CrossingPair crossing;
    FlipChoice choice = FlipChoice::ReconnectA;
};

// Successors in canonical order: crossings sorted, ReconnectA before ReconnectB.
std::vector<Move> successor_moves(const PointSet& points, const Matching& m,
                                  ChoiceRegime regime = ChoiceRegime::Both);

struct SearchResult {
    bool limits_hit = false;
    // Exact f(M) or h(M); absent when limits were hit.
    std::optional<std::int64_t> value;
    // For the longest search a hit limit still leaves a proven lower bound.
    std::optional<std::int64_t> lower_bound;
    std::optional<std::int64_t> upper_bound;
    std::size_t states_expanded = 0;
    std::size_t frontier_size = 0;
    FlipTrace witness;
};

// Memoized f/h evaluator over the flip DAG of one point set. The memo is kept
// across calls, so evaluating many start matchings shares all common suffixes.
class FlipGraph {
public:
    struct NodeValues {
        std::int32_t longest = 0;   // f
        std::int32_t shortest = 0;  // h
    };

    explicit FlipGraph(PointSet points, ChoiceRegime regime = ChoiceRegime::Both);

    // Throws InvariantViolation on a cycle. Returns nullopt if limits were hit;
    // in that case best_lower_bound() holds the longest complete sequence found.
    std::optional<NodeValues> evaluate(const Matching& start, const SearchLimits& limits);

    // Follows the memoized argmax (or argmin) successors from an evaluated node.
    FlipTrace longest_witness(const Matching& start) const;
    FlipTrace shortest_witness(const Matching& start) const;

    std::size_t states() const noexcept { return memo_.size(); }
    std::int64_t best_lower_bound() const noexcept { return best_lower_; }
    const PointSet& points() const noexcept { return points_; }
    // Witness of best_lower_bound() after an aborted evaluation.
    FlipTrace partial_witness(const Matching& start) const;

private:
    struct Entry {
        std::int32_t longest = -1;  // -1 while the node is on the DFS stack
        std::int32_t shortest = 0;
        std::uint32_t longest_move = 0;
        std::uint32_t shortest_move = 0;
    };

    FlipTrace follow(const Matching& start, bool longest, std::span<const std::uint32_t> prefix) const;

    PointSet points_;
    ChoiceRegime regime_;
    std::unordered_map<std::string, Entry> memo_;
    std::int64_t best_lower_ = 0;
    std::vector<std::uint32_t> best_prefix_;
};

// f(M): longest flip sequence, by memoized DFS with cycle detection.
SearchResult longest_flip_sequence(const Instance& inst, const SearchLimits& limits = {},
                                   ChoiceRegime regime = ChoiceRegime::Both);

// h(M): shortest flip sequence, by breadth-first search with canonical tie-breaking.
// When limits are hit, upper_bound comes from a greedy-x run.
SearchResult shortest_flip_sequence(const Instance& inst, const SearchLimits& limits = {},
                                    ChoiceRegime regime = ChoiceRegime::Both);

inline constexpr std::size_t kDefaultEnumerationCap = 5;

// Streams all (2n-1)!! perfect matchings on num_points points in canonical
// (lexicographic) order. Throws CapExceeded when n > cap.
void for_each_matching(std::size_t num_points, const std::function<void(const Matching&)>& visit,
                       std::size_t cap = kDefaultEnumerationCap);
std::vector<Matching> enumerate_all_matchings(const PointSet& points, std::size_t cap = kDefaultEnumerationCap);

struct ExtremalEstimates {
    std::int64_t g_hat = 0;
    std::int64_t k_hat = 0;
    Matching g_argmax;
    Matching k_argmax;
    FlipTrace g_witness;
    FlipTrace k_witness;
    // f and h for every matching, in enumeration order.
    std::vector<Matching> matchings;
    std::vector<FlipGraph::NodeValues> values;
    std::size_t states = 0;
};

// Exact max f and max h over all matchings of P. Throws CapExceeded for
// n > cap and Error if limits are hit.
ExtremalEstimates extremal_estimates(const PointSet& points, const SearchLimits& limits = {},
                                     std::size_t cap = kDefaultEnumerationCap);

enum class StrategyKind : std::uint8_t { GreedyX, BubbleAdjacent, Random, FirstCrossing, AdversaryImposed };

// How the adversary picks the crossing when the responder only chooses the
// reconnection. MaxCrossing picks the crossing whose greedy-x response makes
// the least progress on phi_vertical.
enum class AdversaryKind : std::uint8_t { Random, FirstCrossing, MaxCrossing };

struct Strategy {
    StrategyKind kind = StrategyKind::GreedyX;
    std::uint64_t seed = 0;
    AdversaryKind adversary = AdversaryKind::Random;

    static Strategy greedy_x() { return {StrategyKind::GreedyX}; }
    static Strategy bubble_adjacent() { return {StrategyKind::BubbleAdjacent}; }
    static Strategy random(std::uint64_t seed) { return {StrategyKind::Random, seed}; }
    static Strategy first_crossing() { return {StrategyKind::FirstCrossing}; }
    static Strategy adversary_imposed(AdversaryKind adversary, std::uint64_t seed = 0) {
        return {StrategyKind::AdversaryImposed, seed, adversary};
    }

    // greedy-x, bubble, random, first, adversary:random, adversary:first, adversary:max
    std::string name() const;
    static Strategy parse(const std::string& name, std::uint64_t seed = 0);
};

struct RunOptions {
    std::size_t max_steps = 1'000'000;
    bool instrument_phi_l = false;
    bool instrument_phi_k = true;
};

// Applies the strategy until the matching is non-crossing or max_steps flips
// were made (trace.complete == false). Throws InapplicableStrategy for bubble
// on a non two-line instance, or when a flip creates a same-line pair.
FlipTrace run_strategy(const Instance& inst, const Strategy& strategy, const RunOptions& options = {});

}  // namespace flipmatch
