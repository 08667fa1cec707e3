#include "flipmatch/svg.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace flipmatch::svg {

namespace {

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_frame(const PointSet& points, const Matching& m, const FrameStyle& style) {
    Coord xmin = points[0].x, xmax = points[0].x, ymin = points[0].y, ymax = points[0].y;
    for (const auto& p : points.points()) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const double span = static_cast<double>(std::max<Coord>({xmax - xmin, ymax - ymin, 1}));
    const double margin = 24.0;
    const double scale = (style.width - 2 * margin) / span;
    const double height = static_cast<double>(ymax - ymin) * scale + 2 * margin;
    // SVG y grows downwards.
    const auto sx = [&](Coord x) { return margin + static_cast<double>(x - xmin) * scale; };
    const auto sy = [&](Coord y) { return height - margin - static_cast<double>(y - ymin) * scale; };

    std::set<Segment> crossing;
    if (style.highlight_crossings) {
        for (const auto& c : find_crossings(points, m)) {
            crossing.insert(c.e1);
            crossing.insert(c.e2);
        }
    }

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << style.width << "\" height=\""
        << height << "\">\n";
    if (!style.title.empty()) out << "<title>" << escape(style.title) << "</title>\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << style.width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    for (const auto& s : m.segments()) {
        const bool removed = style.removed && (s == style.removed->e1 || s == style.removed->e2);
        std::string cls = "segment";
        std::string stroke = "black";
        if (crossing.contains(s)) {
            cls += " crossing";
            stroke = "#c0392b";
        }
        if (removed) cls += " removed";
        out << "<line class=\"" << cls << "\" x1=\"" << sx(points[s.a].x) << "\" y1=\"" << sy(points[s.a].y)
            << "\" x2=\"" << sx(points[s.b].x) << "\" y2=\"" << sy(points[s.b].y) << "\" stroke=\"" << stroke
            << "\" stroke-width=\"2\"" << (removed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double cx = sx(points[i].x);
        const double cy = sy(points[i].y);
        out << "<circle class=\"point\" cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"4\" fill=\"black\"/>\n";
        out << "<text class=\"label\" x=\"" << cx + 6 << "\" y=\"" << cy - 6
            << "\" font-family=\"sans-serif\" font-size=\"12\">p" << i + 1 << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::vector<std::string> render_trace(const PointSet& points, const FlipTrace& trace) {
    std::vector<std::string> frames;
    Matching current = trace.initial;
    for (std::size_t i = 0; i <= trace.records.size(); ++i) {
        FrameStyle style;
        style.title = trace.instance_id + " step " + std::to_string(i);
        if (i < trace.records.size()) style.removed = trace.records[i].crossing;
        frames.push_back(render_frame(points, current, style));
        if (i < trace.records.size()) {
            const auto& rec = trace.records[i];
            current = current.replace(rec.crossing.e1, rec.crossing.e2, rec.new_e1, rec.new_e2);
        }
    }
    return frames;
}

}  // namespace flipmatch::svg
