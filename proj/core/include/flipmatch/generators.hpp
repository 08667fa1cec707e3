#pragma once

// Instance construction: the two-line permutation family, the convex-position
// family, seeded random instances, and a few small pinned fixtures.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "flipmatch/geometry.hpp"
#include "flipmatch/matching.hpp"

namespace flipmatch {

class Permutation {
public:
    Permutation() = default;
    // Throws InvalidInput unless images is a bijection on 0..n-1 with n >= 1.
    explicit Permutation(std::vector<int> images);

    static Permutation identity(std::size_t n);
    static Permutation reverse(std::size_t n);

    std::size_t size() const noexcept { return images_.size(); }
    int operator()(std::size_t i) const { return images_[i]; }
    const std::vector<int>& images() const noexcept { return images_; }
    std::size_t inversions() const;

    friend bool operator==(const Permutation&, const Permutation&) = default;

private:
    std::vector<int> images_;
};

struct BBox {
    Coord xmin = 0;
    Coord ymin = 0;
    Coord xmax = 100;
    Coord ymax = 100;

    friend bool operator==(const BBox&, const BBox&) = default;
};

struct Provenance {
    enum class Kind { TwoLine, Convex, Random, Fixture, Custom };

    Kind kind = Kind::Custom;
    Permutation permutation;  // TwoLine
    std::size_t n = 0;        // Convex, Random
    std::uint64_t seed = 0;   // Random
    BBox bbox;                // Random
    std::string label;        // Fixture name, or the raw text of a Custom tag

    static Provenance two_line(Permutation pi);
    static Provenance convex(std::size_t n);
    static Provenance random(std::size_t n, std::uint64_t seed, BBox bbox);
    static Provenance fixture(std::string name);
    static Provenance custom(std::string text);

    // Canonical text form, e.g. "two-line:2,1,0", "convex:6",
    // "random:n=3,seed=7,bbox=0,0,100,100", "fixture:square".
    std::string to_string() const;
    // Unrecognized text becomes Custom with the text preserved verbatim.
    static Provenance parse(const std::string& text);

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct Instance {
    PointSet points;
    Matching matching;
    Provenance provenance;
    std::string notes;

    std::size_t n() const noexcept { return matching.size(); }
    std::string id() const { return provenance.to_string(); }

    friend bool operator==(const Instance&, const Instance&) = default;
};

// Checks general position and that the matching covers the point set.
// Throws InvalidInput naming the violation.
Instance make_instance(PointSet points, Matching matching, Provenance provenance, std::string notes = {});

// Bottom point i sits on y = i^2 at x = 4n*i; top point j on y = D - j^2 at
// x = 4n*j + 2n, with D = 32n^2. Bottom i is matched to top pi(i). Bottom
// points have indices 0..n-1, top points n..2n-1.
Instance gen_two_line(const Permutation& pi);

// 2n points snapped from a circle of radius 2^16, labeled counterclockwise.
// Matching: p_1 p_{n+1} plus p_i p_{2n+2-i} for i = 2..n (1-based), so every
// other segment crosses p_1 p_{n+1}.
Instance gen_convex(std::size_t n);

// Rejection-samples 2n points in the inclusive bbox, then a random perfect matching.
// Throws GenerationFailed when the rejection budget runs out.
Instance gen_random(std::size_t n, std::uint64_t seed, const BBox& bbox);

// Uniform random perfect matching on num_points points.
Matching random_matching(std::size_t num_points, std::mt19937_64& rng);

// Uniform integer in [lo, hi], portable across standard libraries.
Coord uniform_coord(std::mt19937_64& rng, Coord lo, Coord hi);

namespace fixtures {

// Four corners of the 2x2 square, matched along the diagonals.
Instance square_diagonals();

// Six points of the "segment disappears and reappears" scenario, scaled by 10:
// (0,8) (10,0) (10,20) (20,0) (20,20) (30,8), matched {p1p6, p2p5, p3p4}.
Instance segment_reappears();

struct ScriptedFlip {
    CrossingPair crossing;
    FlipChoice choice;
};

// The three flips that remove p3p4 and later bring it back.
std::vector<ScriptedFlip> segment_reappears_script();

// A pinned instance with exactly one crossing whose flip along
// crossing_increase_choice() produces three crossings.
Instance crossing_increase();
FlipChoice crossing_increase_choice();

}  // namespace fixtures

}  // namespace flipmatch
