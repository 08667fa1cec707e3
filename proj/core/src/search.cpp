#include "flipmatch/search.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "flipmatch/errors.hpp"
#include "flipmatch/potentials.hpp"

namespace flipmatch {

namespace {

using Clock = std::chrono::steady_clock;

class Deadline {
public:
    explicit Deadline(std::chrono::milliseconds budget) : end_(Clock::now() + budget) {}
    bool expired() const { return Clock::now() >= end_; }

private:
    Clock::time_point end_;
};

FlipTrace start_trace(const Matching& start) {
    FlipTrace t;
    t.initial = start;
    t.final_matching = start;
    return t;
}

void push_flip(const PointSet& points, FlipTrace& trace, Matching& current, const Move& mv) {
    auto result = flip(points, current, mv.crossing, mv.choice);
    trace.records.push_back(result.record);
    current = std::move(result.matching);
}

}  // namespace

std::vector<Move> successor_moves(const PointSet& points, const Matching& m, ChoiceRegime regime) {
    std::vector<Move> moves;
    for (const auto& c : find_crossings(points, m)) {
        if (regime == ChoiceRegime::GreedyXOnly) {
            moves.push_back({c, greedy_x_choice(points, c)});
        } else {
            for (FlipChoice choice : kFlipChoices) moves.push_back({c, choice});
        }
    }
    return moves;
}

FlipGraph::FlipGraph(PointSet points, ChoiceRegime regime) : points_(std::move(points)), regime_(regime) {}

std::optional<FlipGraph::NodeValues> FlipGraph::evaluate(const Matching& start, const SearchLimits& limits) {
    best_lower_ = 0;
    best_prefix_.clear();
    if (auto it = memo_.find(start.key()); it != memo_.end() && it->second.longest >= 0) {
        best_lower_ = it->second.longest;
        return NodeValues{it->second.longest, it->second.shortest};
    }

    struct Frame {
        Matching m;
        std::string key;
        std::vector<Move> moves;
        std::uint32_t next = 0;
        Entry acc;
    };
    const Deadline deadline(limits.time_budget);
    std::vector<Frame> stack;

    const auto open = [&](Matching m, std::string key) {
        memo_[key] = Entry{};
        Frame f{std::move(m), std::move(key), {}, 0, Entry{}};
        f.moves = successor_moves(points_, f.m, regime_);
        if (f.moves.empty()) {
            f.acc.longest = 0;
            f.acc.shortest = 0;
        } else {
            f.acc.longest = -1;
            f.acc.shortest = std::numeric_limits<std::int32_t>::max();
        }
        stack.push_back(std::move(f));
    };
    const auto absorb = [](Entry& acc, const Entry& child, std::uint32_t idx) {
        if (child.longest + 1 > acc.longest) {
            acc.longest = child.longest + 1;
            acc.longest_move = idx;
        }
        if (child.shortest + 1 < acc.shortest) {
            acc.shortest = child.shortest + 1;
            acc.shortest_move = idx;
        }
    };
    // A complete path of length `total` runs through the first `depth` stack moves.
    const auto offer = [&](std::int64_t total, std::size_t depth) {
        if (total <= best_lower_) return;
        best_lower_ = total;
        best_prefix_.clear();
        for (std::size_t i = 0; i < depth; ++i) best_prefix_.push_back(stack[i].next);
    };
    // The open path is a valid flip sequence; finish it along known longest
    // moves (or the first move where unknown) to get a complete lower bound.
    const auto abort = [&]() {
        std::vector<std::uint32_t> path;
        for (const auto& f : stack) path.push_back(f.next);
        const Frame& top = stack.back();
        Matching current = apply_flip(points_, top.m, top.moves[top.next].crossing, top.moves[top.next].choice);
        for (auto moves = successor_moves(points_, current, regime_); !moves.empty();
             moves = successor_moves(points_, current, regime_)) {
            std::uint32_t idx = 0;
            if (auto it = memo_.find(current.key()); it != memo_.end() && it->second.longest > 0) {
                idx = it->second.longest_move;
            }
            path.push_back(idx);
            current = apply_flip(points_, current, moves[idx].crossing, moves[idx].choice);
        }
        if (static_cast<std::int64_t>(path.size()) > best_lower_) {
            best_lower_ = static_cast<std::int64_t>(path.size());
            best_prefix_ = std::move(path);
        }
        for (const auto& f : stack) memo_.erase(f.key);
        return std::nullopt;
    };

    open(start, start.key());
    std::size_t opened = 0;
    while (!stack.empty()) {
        Frame& top = stack.back();
        if (top.next < top.moves.size()) {
            const Move& mv = top.moves[top.next];
            Matching child = apply_flip(points_, top.m, mv.crossing, mv.choice);
            std::string ckey = child.key();
            if (auto it = memo_.find(ckey); it != memo_.end()) {
                if (it->second.longest < 0) {
                    throw InvariantViolation("flip graph cycle through " + to_string(child));
                }
                offer(static_cast<std::int64_t>(stack.size()) + it->second.longest, stack.size());
                absorb(top.acc, it->second, top.next);
                ++top.next;
                continue;
            }
            if (memo_.size() >= limits.max_states || stack.size() >= limits.max_depth ||
                (++opened % 256 == 0 && deadline.expired())) {
                return abort();
            }
            open(std::move(child), std::move(ckey));
            continue;
        }
        const Entry done = top.acc;
        memo_[top.key] = done;
        offer(static_cast<std::int64_t>(stack.size() - 1) + done.longest, stack.size() - 1);
        stack.pop_back();
        if (!stack.empty()) {
            absorb(stack.back().acc, done, stack.back().next);
            ++stack.back().next;
        } else {
            return NodeValues{done.longest, done.shortest};
        }
    }
    return std::nullopt;
}

FlipTrace FlipGraph::follow(const Matching& start, bool longest, std::span<const std::uint32_t> prefix) const {
    FlipTrace trace = start_trace(start);
    Matching current = start;
    for (std::uint32_t idx : prefix) {
        const auto moves = successor_moves(points_, current, regime_);
        push_flip(points_, trace, current, moves.at(idx));
    }
    while (!is_noncrossing(points_, current)) {
        const auto it = memo_.find(current.key());
        if (it == memo_.end() || it->second.longest < 0) {
            throw Error("witness requested for an unevaluated matching " + to_string(current));
        }
        const auto moves = successor_moves(points_, current, regime_);
        push_flip(points_, trace, current, moves.at(longest ? it->second.longest_move : it->second.shortest_move));
    }
    trace.final_matching = current;
    trace.complete = is_noncrossing(points_, current);
    return trace;
}

FlipTrace FlipGraph::longest_witness(const Matching& start) const { return follow(start, true, {}); }
FlipTrace FlipGraph::shortest_witness(const Matching& start) const { return follow(start, false, {}); }
FlipTrace FlipGraph::partial_witness(const Matching& start) const { return follow(start, true, best_prefix_); }

SearchResult longest_flip_sequence(const Instance& inst, const SearchLimits& limits, ChoiceRegime regime) {
    FlipGraph graph(inst.points, regime);
    SearchResult result;
    const auto values = graph.evaluate(inst.matching, limits);
    result.states_expanded = graph.states();
    if (values) {
        result.value = values->longest;
        result.lower_bound = values->longest;
        result.upper_bound = values->longest;
        result.witness = graph.longest_witness(inst.matching);
    } else {
        result.limits_hit = true;
        result.lower_bound = graph.best_lower_bound();
        result.witness = graph.partial_witness(inst.matching);
    }
    result.witness.instance_id = inst.id();
    return result;
}

SearchResult shortest_flip_sequence(const Instance& inst, const SearchLimits& limits, ChoiceRegime regime) {
    SearchResult result;
    const PointSet& points = inst.points;
    const Matching& start = inst.matching;
    result.witness = start_trace(start);
    result.witness.instance_id = inst.id();
    if (is_noncrossing(points, start)) {
        result.value = 0;
        result.lower_bound = 0;
        result.upper_bound = 0;
        result.states_expanded = 1;
        result.witness.complete = true;
        return result;
    }

    struct Parent {
        std::string key;
        std::uint32_t move = 0;
        std::size_t depth = 0;
    };
    const Deadline deadline(limits.time_budget);
    std::unordered_map<std::string, Parent> parents;
    std::deque<Matching> frontier;
    const std::string start_key = start.key();
    parents.emplace(start_key, Parent{});
    frontier.push_back(start);

    std::optional<std::string> target;
    while (!frontier.empty() && !target) {
        const Matching m = std::move(frontier.front());
        frontier.pop_front();
        const std::string key = m.key();
        const std::size_t depth = parents.at(key).depth;
        if (depth + 1 > limits.max_depth || parents.size() >= limits.max_states || deadline.expired()) {
            frontier.push_front(m);
            break;
        }
        const auto moves = successor_moves(points, m, regime);
        for (std::uint32_t i = 0; i < moves.size(); ++i) {
            Matching child = apply_flip(points, m, moves[i].crossing, moves[i].choice);
            std::string ckey = child.key();
            if (parents.contains(ckey)) continue;
            parents.emplace(ckey, Parent{key, i, depth + 1});
            if (is_noncrossing(points, child)) {
                target = ckey;
                break;
            }
            frontier.push_back(std::move(child));
        }
    }
    result.states_expanded = parents.size();
    result.frontier_size = frontier.size();

    if (!target) {
        result.limits_hit = true;
        FlipTrace greedy = run_strategy(inst, Strategy::greedy_x(), RunOptions{limits.max_depth, false, false});
        if (greedy.complete) result.upper_bound = static_cast<std::int64_t>(greedy.steps());
        return result;
    }

    std::vector<std::uint32_t> path;
    for (std::string k = *target; k != start_key;) {
        const Parent& p = parents.at(k);
        path.push_back(p.move);
        k = p.key;
    }
    std::reverse(path.begin(), path.end());
    Matching current = start;
    for (std::uint32_t idx : path) {
        const auto moves = successor_moves(points, current, regime);
        push_flip(points, result.witness, current, moves.at(idx));
    }
    result.witness.final_matching = current;
    result.witness.complete = true;
    result.value = static_cast<std::int64_t>(path.size());
    result.lower_bound = result.value;
    result.upper_bound = result.value;
    return result;
}

void for_each_matching(std::size_t num_points, const std::function<void(const Matching&)>& visit, std::size_t cap) {
    if (num_points == 0 || num_points % 2 != 0) throw InvalidInput("matchings need an even, non-zero point count");
    if (num_points / 2 > cap) {
        throw CapExceeded("enumeration of n=" + std::to_string(num_points / 2) + " exceeds the cap of " +
                          std::to_string(cap));
    }
    std::vector<bool> used(num_points, false);
    std::vector<Segment> pairs;
    const std::function<void()> recurse = [&]() {
        std::size_t i = 0;
        while (i < num_points && used[i]) ++i;
        if (i == num_points) {
            visit(Matching(num_points, pairs));
            return;
        }
        used[i] = true;
        for (std::size_t j = i + 1; j < num_points; ++j) {
            if (used[j]) continue;
            used[j] = true;
            pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
            recurse();
            pairs.pop_back();
            used[j] = false;
        }
        used[i] = false;
    };
    recurse();
}

std::vector<Matching> enumerate_all_matchings(const PointSet& points, std::size_t cap) {
    std::vector<Matching> out;
    for_each_matching(points.size(), [&](const Matching& m) { out.push_back(m); }, cap);
    return out;
}

ExtremalEstimates extremal_estimates(const PointSet& points, const SearchLimits& limits, std::size_t cap) {
    ExtremalEstimates est;
    est.matchings = enumerate_all_matchings(points, cap);
    FlipGraph graph(points);
    est.values.reserve(est.matchings.size());
    std::size_t g_at = 0;
    std::size_t k_at = 0;
    for (std::size_t i = 0; i < est.matchings.size(); ++i) {
        const auto v = graph.evaluate(est.matchings[i], limits);
        if (!v) throw Error("search limits hit while evaluating " + to_string(est.matchings[i]));
        est.values.push_back(*v);
        if (v->longest > est.values[g_at].longest) g_at = i;
        if (v->shortest > est.values[k_at].shortest) k_at = i;
    }
    est.g_hat = est.values[g_at].longest;
    est.k_hat = est.values[k_at].shortest;
    est.g_argmax = est.matchings[g_at];
    est.k_argmax = est.matchings[k_at];
    est.g_witness = graph.longest_witness(est.g_argmax);
    est.k_witness = graph.shortest_witness(est.k_argmax);
    est.states = graph.states();
    return est;
}

std::string Strategy::name() const {
    switch (kind) {
        case StrategyKind::GreedyX: return "greedy-x";
        case StrategyKind::BubbleAdjacent: return "bubble";
        case StrategyKind::Random: return "random";
        case StrategyKind::FirstCrossing: return "first";
        case StrategyKind::AdversaryImposed:
            switch (adversary) {
                case AdversaryKind::Random: return "adversary:random";
                case AdversaryKind::FirstCrossing: return "adversary:first";
                case AdversaryKind::MaxCrossing: return "adversary:max";
            }
    }
    return "?";
}

Strategy Strategy::parse(const std::string& name, std::uint64_t seed) {
    if (name == "greedy-x") return greedy_x();
    if (name == "bubble") return bubble_adjacent();
    if (name == "random") return random(seed);
    if (name == "first") return first_crossing();
    if (name == "adversary:random") return adversary_imposed(AdversaryKind::Random, seed);
    if (name == "adversary:first") return adversary_imposed(AdversaryKind::FirstCrossing, seed);
    if (name == "adversary:max") return adversary_imposed(AdversaryKind::MaxCrossing, seed);
    throw InvalidInput("unknown strategy '" + name + "'");
}

namespace {

// Ranks in lexicographic (x, y) order; equal to x ranks after shearing.
std::vector<int> lexicographic_ranks(const PointSet& points) {
    std::vector<int> order(points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return points[i] < points[j]; });
    std::vector<int> rank(points.size());
    for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = static_cast<int>(r);
    return rank;
}

Move bubble_move(const Instance& inst, const Matching& m) {
    const int n = static_cast<int>(inst.n());
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) {
        const int top = m.mate(i);
        if (top < n) {
            throw InapplicableStrategy("bubble: bottom points " + std::to_string(i) + " and " + std::to_string(top) +
                                       " are matched to each other");
        }
        perm[i] = top - n;
    }
    for (int i = 0; i + 1 < n; ++i) {
        if (perm[i] <= perm[i + 1]) continue;
        const CrossingPair c(Segment(i, m.mate(i)), Segment(i + 1, m.mate(i + 1)));
        if (!segments_properly_cross(c.e1, c.e2, inst.points)) {
            throw InapplicableStrategy("bubble: adjacent inversion at " + std::to_string(i) + " does not cross");
        }
        const Segment swapped(i, m.mate(i + 1));
        const auto [a1, a2] = reconnect(inst.points, c, FlipChoice::ReconnectA);
        return {c, (a1 == swapped || a2 == swapped) ? FlipChoice::ReconnectA : FlipChoice::ReconnectB};
    }
    throw InapplicableStrategy("bubble: crossings remain but the permutation is sorted");
}

}  // namespace

FlipTrace run_strategy(const Instance& inst, const Strategy& strategy, const RunOptions& options) {
    if (strategy.kind == StrategyKind::BubbleAdjacent && inst.provenance.kind != Provenance::Kind::TwoLine) {
        throw InapplicableStrategy("bubble strategy needs a two-line instance, got '" + inst.id() + "'");
    }
    const PointSet& points = inst.points;
    std::optional<PointSet> gap_points;
    if (options.instrument_phi_k) {
        try {
            gap_points = shear_to_distinct_x(points);
        } catch (const CoordinateOverflow&) {
            // Left uninstrumented.
        }
    }
    const auto rank = lexicographic_ranks(points);
    const auto span = [&](const Segment& s) { return std::abs(rank[s.a] - rank[s.b]); };
    std::mt19937_64 rng(strategy.seed);

    FlipTrace trace = start_trace(inst.matching);
    trace.instance_id = inst.id();
    Matching current = inst.matching;
    std::optional<std::int64_t> phi_k;
    std::optional<std::int64_t> phi_l;
    if (gap_points) phi_k = phi_vertical(*gap_points, current);
    if (options.instrument_phi_l) phi_l = phi_lines(points, current);
    trace.initial_phi_k = phi_k;
    trace.initial_phi_l = phi_l;

    while (trace.steps() < options.max_steps) {
        const auto crossings = find_crossings(points, current);
        if (crossings.empty()) break;
        Move mv;
        switch (strategy.kind) {
            case StrategyKind::GreedyX:
                mv = {crossings.front(), greedy_x_choice(points, crossings.front())};
                break;
            case StrategyKind::FirstCrossing:
                mv = {crossings.front(), FlipChoice::ReconnectA};
                break;
            case StrategyKind::Random:
                mv.crossing = crossings[rng() % crossings.size()];
                mv.choice = kFlipChoices[rng() % 2];
                break;
            case StrategyKind::BubbleAdjacent:
                mv = bubble_move(inst, current);
                break;
            case StrategyKind::AdversaryImposed: {
                std::size_t pick = 0;
                if (strategy.adversary == AdversaryKind::Random) {
                    pick = rng() % crossings.size();
                } else if (strategy.adversary == AdversaryKind::MaxCrossing) {
                    int worst = std::numeric_limits<int>::min();
                    for (std::size_t i = 0; i < crossings.size(); ++i) {
                        const auto& c = crossings[i];
                        const auto [n1, n2] = reconnect(points, c, greedy_x_choice(points, c));
                        const int delta = span(n1) + span(n2) - span(c.e1) - span(c.e2);
                        if (delta > worst) {
                            worst = delta;
                            pick = i;
                        }
                    }
                }
                mv = {crossings[pick], greedy_x_choice(points, crossings[pick])};
                break;
            }
        }
        auto result = flip(points, current, mv.crossing, mv.choice);
        FlipRecord& rec = result.record;
        if (phi_k) {
            rec.phi_k_before = phi_k;
            phi_k = *phi_k - span(rec.crossing.e1) - span(rec.crossing.e2) + span(rec.new_e1) + span(rec.new_e2);
            rec.phi_k_after = phi_k;
        }
        if (phi_l) {
            rec.phi_l_before = phi_l;
            phi_l = phi_lines(points, result.matching);
            rec.phi_l_after = phi_l;
        }
        rec.crossings_after = count_crossings(points, result.matching);
        trace.records.push_back(rec);
        current = std::move(result.matching);
    }
    trace.final_matching = current;
    trace.complete = is_noncrossing(points, current);
    return trace;
}

}  // namespace flipmatch
