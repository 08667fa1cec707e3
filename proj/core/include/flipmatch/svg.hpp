#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flipmatch/geometry.hpp"
#include "flipmatch/matching.hpp"

namespace flipmatch::svg {

struct FrameStyle {
    // Segments about to be removed are drawn dashed.
    std::optional<CrossingPair> removed;
    bool highlight_crossings = true;
    std::string title;
    double width = 480.0;
};

// Points as labeled dots (1-based labels p1..p2n), segments as lines.
// Segments taking part in a crossing get class "crossing".
std::string render_frame(const PointSet& points, const Matching& m, const FrameStyle& style = {});

// One frame per matching of the trace: frame i shows M_i with the segments
// removed by flip i+1 dashed; the last frame shows the final matching.
std::vector<std::string> render_trace(const PointSet& points, const FlipTrace& trace);

}  // namespace flipmatch::svg
