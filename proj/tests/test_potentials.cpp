#include <gtest/gtest.h>

#include <random>

#include "flipmatch/errors.hpp"
#include "flipmatch/generators.hpp"
#include "flipmatch/potentials.hpp"
#include "flipmatch/search.hpp"
#include "oracles.hpp"

using namespace flipmatch;

namespace {

const PointSet& square() {
    static const PointSet sq({{0, 0}, {2, 0}, {2, 2}, {0, 2}});
    return sq;
}

}  // namespace

TEST(CrossesPerturbedLine, OwnSupportingLineNeverCrossed) {
    EXPECT_FALSE(crosses_perturbed_line({0, 2, Side::Plus}, Segment(0, 2), square()));
    EXPECT_FALSE(crosses_perturbed_line({0, 2, Side::Minus}, Segment(0, 2), square()));
}

TEST(CrossesPerturbedLine, BottomSideCopyTowardsTop) {
    const PerturbedLine line{0, 1, Side::Plus};  // top points have orient +1
    EXPECT_TRUE(crosses_perturbed_line(line, Segment(0, 2), square()));
    EXPECT_FALSE(crosses_perturbed_line(line, Segment(2, 3), square()));
}

TEST(PhiLines, SinglesegmentIsZero) {
    EXPECT_EQ(phi_lines(PointSet({{0, 0}, {3, 1}}), Matching(2, {Segment(0, 1)})), 0);
}

TEST(PhiLines, SquareBeforeAndAfterFlip) {
    // Frozen from an explicit-offset enumeration of all 12 lines.
    const Matching diagonals(4, {Segment(0, 2), Segment(1, 3)});
    EXPECT_EQ(phi_lines(square(), diagonals), 12);
    EXPECT_EQ(phi_lines(square(), Matching(4, {Segment(0, 1), Segment(2, 3)})), 8);
    EXPECT_EQ(phi_lines(square(), Matching(4, {Segment(1, 2), Segment(0, 3)})), 8);
    EXPECT_EQ(perturbed_lines(square()).size(), 12u);
}

TEST(PhiLines, SegmentReappearsInitialValue) {
    const auto inst = fixtures::segment_reappears();
    EXPECT_EQ(phi_lines(inst.points, inst.matching), 48);
}

TEST(PhiLines, AgreesWithNumericOffsetOracle) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const auto inst = gen_random(1 + rng() % 8, rng(), BBox{-30, -30, 30, 30});
        ASSERT_EQ(phi_lines(inst.points, inst.matching),
                  oracle::phi_lines_numeric(inst.points, oracle::from_matching(inst.matching)));
    }
}

TEST(PhiLines, BoundHoldsExhaustivelyForSmallN) {
    std::mt19937_64 rng(3);
    for (std::size_t n = 1; n <= 4; ++n) {
        for (int set = 0; set < 3; ++set) {
            const auto inst = gen_random(n, rng(), BBox{0, 0, 60, 60});
            for_each_matching(inst.points.size(), [&](const Matching& m) {
                const auto v = phi_lines(inst.points, m);
                EXPECT_LE(v, phi_lines_bound(n));
                EXPECT_LE(v, phi_lines_sharp_bound(n));
            });
        }
    }
}

TEST(PhiLines, InvariantUnderShear) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const auto inst = gen_random(5, rng(), BBox{0, 0, 40, 40});
        std::vector<Point> moved;
        const Coord k = uniform_coord(rng, -3, 3);
        for (const auto& p : inst.points.points()) moved.push_back({p.x + k * p.y, p.y});
        ASSERT_EQ(phi_lines(inst.points, inst.matching), phi_lines(PointSet(moved), inst.matching));
        ASSERT_EQ(phi_lines(inst.points, inst.matching),
                  phi_lines(shear_to_distinct_x(inst.points), inst.matching));
    }
}

TEST(PhiVertical, Examples) {
    EXPECT_EQ(phi_vertical(PointSet({{0, 0}, {1, 5}}), Matching(2, {Segment(0, 1)})), 1);
    const PointSet row({{0, 0}, {1, 3}, {2, 1}, {3, 4}});
    EXPECT_EQ(phi_vertical(row, Matching(4, {Segment(0, 3), Segment(1, 2)})), 4);
    EXPECT_EQ(phi_vertical(row, Matching(4, {Segment(0, 1), Segment(2, 3)})), 2);
}

TEST(PhiVertical, RequiresDistinctX) {
    const auto inst = fixtures::segment_reappears();
    EXPECT_THROW(phi_vertical(inst.points, inst.matching), InvalidInput);
}

TEST(PhiVertical, AgreesWithGapCounting) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 300; ++trial) {
        auto inst = gen_random(1 + rng() % 9, rng(), BBox{0, 0, 500, 500});
        const PointSet pts = shear_to_distinct_x(inst.points);
        const auto v = phi_vertical(pts, inst.matching);
        ASSERT_EQ(v, oracle::phi_vertical_gaps(pts, oracle::from_matching(inst.matching)));
        ASSERT_LE(v, phi_vertical_bound(inst.n()));
    }
}

TEST(PhiVertical, NeverExceedsNSquared) {
    for (std::size_t n = 1; n <= 4; ++n) {
        const auto inst = gen_random(n, 100 + n, BBox{0, 0, 500, 500});
        const PointSet pts = shear_to_distinct_x(inst.points);
        std::int64_t best = 0;
        for (const auto& m : enumerate_all_matchings(pts)) best = std::max(best, phi_vertical(pts, m));
        const auto n2 = static_cast<std::int64_t>(n * n);
        EXPECT_EQ(best, n2);  // reached by nesting the lowest n ranks with the highest n
        EXPECT_LE(n2, phi_vertical_bound(n));
    }
}

TEST(ClassifyLine, SquareCases) {
    const CrossingPair quad(Segment(0, 2), Segment(1, 3));
    EXPECT_EQ(classify_line_vs_quad({0, 1, Side::Plus}, quad, square()), LineType::L1);
    EXPECT_EQ(classify_line_vs_quad({2, 3, Side::Plus}, quad, square()), LineType::L1);
    EXPECT_EQ(classify_line_vs_quad({1, 2, Side::Plus}, quad, square()), LineType::L2);
    EXPECT_EQ(classify_line_vs_quad({0, 3, Side::Minus}, quad, square()), LineType::L2);
    EXPECT_EQ(classify_line_vs_quad({0, 2, Side::Plus}, quad, square()), LineType::L3);
    EXPECT_EQ(classify_line_vs_quad({0, 2, Side::Minus}, quad, square()), LineType::L3);
    EXPECT_EQ(classify_line_vs_quad({0, 1, Side::Minus}, quad, square()), LineType::NoIntersect);
}

TEST(ClassifyLine, RejectsNonCrossingQuad) {
    EXPECT_THROW(classify_line_vs_quad({0, 1, Side::Plus}, CrossingPair(Segment(0, 1), Segment(2, 3)), square()),
                 InvalidInput);
}

TEST(DecrementAudit, SquareBothChoices) {
    const Matching diagonals(4, {Segment(0, 2), Segment(1, 3)});
    const CrossingPair c(Segment(0, 2), Segment(1, 3));
    for (FlipChoice choice : kFlipChoices) {
        const auto a = decrement_audit(square(), diagonals, c, choice);
        EXPECT_EQ(a.phi_l_before, 12);
        EXPECT_EQ(a.phi_l_after, 8);
        EXPECT_FALSE(a.delta_phi_k().has_value());  // square has repeated x
    }
}

TEST(DecrementAudit, RejectsStaleCrossing) {
    const Matching sides(4, {Segment(0, 1), Segment(2, 3)});
    EXPECT_THROW(decrement_audit(square(), sides, CrossingPair(Segment(0, 2), Segment(1, 3)), FlipChoice::ReconnectA),
                 StaleCrossing);
}

TEST(DecrementAudit, RandomFlipsMeetEveryClaim) {
    std::mt19937_64 rng(4242);
    std::size_t audits = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const auto inst = gen_random(2 + rng() % 6, rng(), BBox{0, 0, 500, 500});
        const PointSet pts = shear_to_distinct_x(inst.points);
        Matching m = inst.matching;
        for (auto cs = find_crossings(pts, m); !cs.empty(); cs = find_crossings(pts, m)) {
            const auto c = cs[rng() % cs.size()];
            for (FlipChoice choice : kFlipChoices) {
                const auto a = decrement_audit(pts, m, c, choice);
                ++audits;
                const Matching next = apply_flip(pts, m, c, choice);
                ASSERT_EQ(a.phi_l_after, phi_lines(pts, next));
                ASSERT_LE(a.delta_phi_l(), -4);
                ASSERT_GE(a.type_counts[0], 2u);
                ASSERT_GE(a.type_counts[1], 2u);
                const std::size_t gone = choice == FlipChoice::ReconnectA ? a.type_counts[0] : a.type_counts[1];
                ASSERT_EQ(a.delta_phi_l(), -2 * static_cast<std::int64_t>(gone));
                for (const auto& l : a.lines) {
                    ASSERT_LE(l.delta(), 0);
                    if (l.type == LineType::L3) ASSERT_EQ(l.delta(), 0);
                }
                ASSERT_TRUE(a.delta_phi_k().has_value());
                ASSERT_EQ(*a.phi_k_after, phi_vertical(pts, next));
                ASSERT_LE(*a.delta_phi_k(), 0);
                if (choice == greedy_x_choice(pts, c)) {
                    ASSERT_LE(*a.delta_phi_k(), -2);
                    ASSERT_EQ(*a.delta_phi_k(), -2 * *a.middle_gaps);
                }
            }
            m = apply_flip(pts, m, c, kFlipChoices[rng() % 2]);
        }
    }
    EXPECT_GT(audits, 1000u);
}
