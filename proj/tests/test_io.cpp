#include <gtest/gtest.h>

#include <random>
#include <regex>

#include "flipmatch/errors.hpp"
#include "flipmatch/generators.hpp"
#include "flipmatch/io.hpp"
#include "flipmatch/search.hpp"
#include "flipmatch/svg.hpp"

using namespace flipmatch;

namespace {

std::size_t count_of(const std::string& text, const std::string& needle) {
    std::size_t count = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++count;
    return count;
}

FlipTrace scripted_reappear_trace() {
    const auto inst = fixtures::segment_reappears();
    FlipTrace t;
    t.instance_id = inst.id();
    t.initial = inst.matching;
    Matching m = inst.matching;
    for (const auto& step : fixtures::segment_reappears_script()) {
        auto r = flip(inst.points, m, step.crossing, step.choice);
        t.records.push_back(r.record);
        m = r.matching;
    }
    t.final_matching = m;
    t.complete = true;
    return t;
}

}  // namespace

TEST(InstanceJson, RoundTripsGeneratorOutputs) {
    std::vector<Instance> all{gen_two_line(Permutation({2, 0, 3, 1})), gen_convex(6), fixtures::segment_reappears(),
                              fixtures::crossing_increase()};
    std::mt19937_64 rng(4);
    for (int i = 0; i < 20; ++i) all.push_back(gen_random(1 + rng() % 8, rng(), BBox{-100, -100, 100, 100}));
    for (auto inst : all) {
        inst.notes = "round trip";
        const std::string text = io::instance_to_json(inst);
        const Instance back = io::instance_from_json(text);
        EXPECT_EQ(back, inst);
        EXPECT_EQ(io::instance_to_json(back), text);
    }
}

TEST(InstanceJson, RejectsBadInput) {
    EXPECT_THROW(io::instance_from_json("{not json"), InvalidInput);
    EXPECT_THROW(io::instance_from_json(R"({"points": [[0,0],[1,1],[2,2],[3,0]], "matching": [[0,1],[2,3]]})"),
                 InvalidInput);
    EXPECT_THROW(io::instance_from_json(R"({"points": [[0,0],[1,0]], "matching": [[0,2]]})"), InvalidInput);
    EXPECT_THROW(io::instance_from_json(R"({"points": [[0,0],[1,0],[0,1],[1,1]], "matching": [[0,1]]})"),
                 InvalidInput);
    EXPECT_THROW(io::instance_from_json(R"({"points": [[0,0],[1,0]]})"), InvalidInput);
    EXPECT_THROW(io::instance_from_json(R"({"points": [[0,0,4],[1,0]], "matching": [[0,1]]})"), InvalidInput);
}

TEST(TraceCsv, HeaderAndInitialRow) {
    const auto inst = fixtures::segment_reappears();
    const std::string csv = io::trace_to_csv(inst.points, scripted_reappear_trace());
    EXPECT_EQ(csv.substr(0, csv.find('\n')), io::kTraceHeader);
    const auto rows = io::trace_rows_from_csv(csv);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0].crossings_after, 3u);
    EXPECT_FALSE(rows[0].choice.has_value());
    EXPECT_EQ(rows[1].removed_1, Segment(1, 4));
    EXPECT_EQ(rows[1].added_1, Segment(1, 2));
    EXPECT_EQ(rows[1].crossings_after, 2u);
    EXPECT_EQ(rows[3].crossings_after, 0u);
    EXPECT_FALSE(rows[3].phi_k_after.has_value());
}

TEST(TraceCsv, ReplaysStrategyRuns) {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 20; ++i) {
        const auto inst = gen_random(5, rng(), BBox{0, 0, 500, 500});
        const auto trace = run_strategy(inst, Strategy::random(rng()), RunOptions{1000, true, true});
        const auto rows = io::trace_rows_from_csv(io::trace_to_csv(inst.points, trace));
        ASSERT_EQ(rows.size(), trace.steps() + 1);
        const auto records = io::records_from_rows(rows);
        EXPECT_EQ(replay(inst.points, inst.matching, records), trace.final_matching);
        for (std::size_t s = 0; s < trace.steps(); ++s) {
            EXPECT_EQ(rows[s + 1].length_after, trace.records[s].length_after);
            EXPECT_EQ(rows[s + 1].phi_k_after, trace.records[s].phi_k_after);
            EXPECT_EQ(rows[s + 1].phi_l_after, trace.records[s].phi_l_after);
        }
    }
}

TEST(TraceCsv, RejectsMalformed) {
    EXPECT_THROW(io::trace_rows_from_csv("step,foo\n0,,,,,,0,1.5,,\n"), InvalidInput);
    EXPECT_THROW(io::trace_rows_from_csv(std::string(io::kTraceHeader) + "\n0,,,,\n"), InvalidInput);
    EXPECT_THROW(io::trace_rows_from_csv(std::string(io::kTraceHeader) + "\n"), InvalidInput);
    EXPECT_THROW(io::trace_rows_from_csv(std::string(io::kTraceHeader) + "\n0,,,,,,0,1.5,,\n2,0-1,2-3,0-2,1-3,A,0,1,,\n"),
                 InvalidInput);
}

TEST(ReportJson, RoundTripKeepsAbsentFields) {
    io::Report r;
    r.instance = "convex:4";
    r.n = 4;
    r.h = 3;
    r.witness_trace = "h.csv";
    r.states_expanded = 17;
    const auto back = io::report_from_json(io::report_to_json(r));
    EXPECT_EQ(back.h, 3);
    EXPECT_FALSE(back.f.has_value());
    EXPECT_FALSE(back.g_hat.has_value());
    EXPECT_EQ(back.witness_trace, "h.csv");
    EXPECT_EQ(back.states_expanded, 17u);
    EXPECT_EQ(io::report_to_json(r).find("\"f\""), std::string::npos);
}

TEST(AuditJson, ListsLineTypes) {
    const auto inst = gen_random(4, 3, BBox{0, 0, 100, 100});
    std::vector<DecrementAudit> audits;
    for (const auto& c : find_crossings(inst.points, inst.matching))
        for (FlipChoice ch : kFlipChoices) audits.push_back(decrement_audit(inst.points, inst.matching, c, ch));
    const std::string text = io::audit_to_json(audits);
    EXPECT_EQ(count_of(text, "\"delta_phi_l\""), audits.size());
}

TEST(Svg, SingleSegment) {
    const PointSet p({{0, 0}, {3, 4}});
    const auto svg = svg::render_frame(p, Matching(2, {Segment(0, 1)}));
    EXPECT_EQ(count_of(svg, "<circle"), 2u);
    EXPECT_EQ(count_of(svg, "<line"), 1u);
    EXPECT_EQ(count_of(svg, "crossing"), 0u);
}

TEST(Svg, ConvexTwelvePoints) {
    const auto inst = gen_convex(6);
    const auto svg = svg::render_frame(inst.points, inst.matching);
    EXPECT_EQ(count_of(svg, "<circle"), 12u);
    EXPECT_EQ(count_of(svg, "<line"), 6u);
    EXPECT_EQ(count_of(svg, "segment crossing"), 6u);
}

TEST(Svg, ScriptedTraceFrames) {
    const auto inst = fixtures::segment_reappears();
    const auto frames = svg::render_trace(inst.points, scripted_reappear_trace());
    ASSERT_EQ(frames.size(), 4u);
    for (std::size_t i = 0; i < frames.size(); ++i) {
        EXPECT_EQ(count_of(frames[i], "<line"), 3u);
        EXPECT_EQ(count_of(frames[i], "stroke-dasharray"), i < 3 ? 2u : 0u);
    }
    // First frame: the dashed pair is p2p5 and p3p4.
    const std::regex dashed("<line class=\"[^\"]*removed\"");
    EXPECT_EQ(std::distance(std::sregex_iterator(frames[0].begin(), frames[0].end(), dashed), std::sregex_iterator()), 2);
}
