#include "flipmatch/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "flipmatch/errors.hpp"
#include "json.hpp"

namespace flipmatch::io {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

std::string instance_to_json(const Instance& inst) {
    json doc;
    doc["points"] = json::array();
    for (const auto& p : inst.points.points()) doc["points"].push_back({p.x, p.y});
    doc["matching"] = json::array();
    for (const auto& s : inst.matching.segments()) doc["matching"].push_back({s.a, s.b});
    doc["provenance"] = inst.provenance.to_string();
    doc["notes"] = inst.notes;
    return doc.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("instance is not valid JSON: ") + e.what());
    }
    try {
        std::vector<Point> pts;
        for (const auto& p : doc.at("points")) {
            if (!p.is_array() || p.size() != 2) throw InvalidInput("each point must be [x, y]");
            pts.push_back({p.at(0).get<Coord>(), p.at(1).get<Coord>()});
        }
        PointSet points(std::move(pts));
        std::vector<Segment> pairs;
        for (const auto& s : doc.at("matching")) {
            if (!s.is_array() || s.size() != 2) throw InvalidInput("each matching pair must be [i, j]");
            const int a = s.at(0).get<int>();
            const int b = s.at(1).get<int>();
            if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= points.size() ||
                static_cast<std::size_t>(b) >= points.size()) {
                throw InvalidInput("matching index out of range");
            }
            pairs.emplace_back(a, b);
        }
        Matching m(points.size(), std::move(pairs));
        return make_instance(std::move(points), std::move(m), Provenance::parse(doc.value("provenance", "")),
                             doc.value("notes", ""));
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed instance: ") + e.what());
    }
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
    write_file(path, instance_to_json(inst));
}

Instance load_instance(const std::filesystem::path& path) { return instance_from_json(read_file(path)); }

namespace {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string segment_field(const std::optional<Segment>& s) { return s ? to_string(*s) : std::string(); }

template <typename T>
std::string optional_field(const std::optional<T>& v) {
    return v ? std::to_string(*v) : std::string();
}

std::optional<Segment> parse_segment(const std::string& field) {
    if (field.empty()) return std::nullopt;
    const auto dash = field.find('-');
    if (dash == std::string::npos) throw InvalidInput("segment field '" + field + "' is not i-j");
    return Segment(std::stoi(field.substr(0, dash)), std::stoi(field.substr(dash + 1)));
}

std::optional<std::int64_t> parse_optional_int(const std::string& field) {
    if (field.empty()) return std::nullopt;
    return std::stoll(field);
}

}  // namespace

std::vector<TraceRow> trace_rows(const PointSet& points, const FlipTrace& trace) {
    std::vector<TraceRow> rows;
    TraceRow first;
    first.crossings_after = count_crossings(points, trace.initial);
    first.length_after = total_length(points, trace.initial);
    first.phi_l_after = trace.initial_phi_l;
    first.phi_k_after = trace.initial_phi_k;
    rows.push_back(first);
    Matching current = trace.initial;
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
        const auto& rec = trace.records[i];
        current = current.replace(rec.crossing.e1, rec.crossing.e2, rec.new_e1, rec.new_e2);
        TraceRow row;
        row.step = i + 1;
        row.removed_1 = rec.crossing.e1;
        row.removed_2 = rec.crossing.e2;
        row.added_1 = rec.new_e1;
        row.added_2 = rec.new_e2;
        row.choice = rec.choice;
        row.crossings_after = rec.crossings_after ? *rec.crossings_after : count_crossings(points, current);
        row.length_after = rec.length_after;
        row.phi_l_after = rec.phi_l_after;
        row.phi_k_after = rec.phi_k_after;
        rows.push_back(row);
    }
    return rows;
}

std::string trace_to_csv(const PointSet& points, const FlipTrace& trace) {
    std::ostringstream out;
    out << kTraceHeader << "\n";
    for (const auto& row : trace_rows(points, trace)) {
        out << row.step << "," << segment_field(row.removed_1) << "," << segment_field(row.removed_2) << ","
            << segment_field(row.added_1) << "," << segment_field(row.added_2) << ","
            << (row.choice ? std::string(1, to_char(*row.choice)) : std::string()) << "," << row.crossings_after
            << "," << format_double(row.length_after) << "," << optional_field(row.phi_l_after) << ","
            << optional_field(row.phi_k_after) << "\n";
    }
    return out.str();
}

std::vector<TraceRow> trace_rows_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kTraceHeader) throw InvalidInput("trace CSV header mismatch");
    std::vector<TraceRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (!line.empty() && line.back() == ',') fields.emplace_back();
        if (fields.size() != 10) throw InvalidInput("trace row has " + std::to_string(fields.size()) + " fields");
        try {
            TraceRow row;
            row.step = std::stoull(fields[0]);
            row.removed_1 = parse_segment(fields[1]);
            row.removed_2 = parse_segment(fields[2]);
            row.added_1 = parse_segment(fields[3]);
            row.added_2 = parse_segment(fields[4]);
            if (!fields[5].empty()) row.choice = flip_choice_from_char(fields[5].front());
            row.crossings_after = std::stoull(fields[6]);
            row.length_after = std::stod(fields[7]);
            row.phi_l_after = parse_optional_int(fields[8]);
            row.phi_k_after = parse_optional_int(fields[9]);
            if (row.step != rows.size()) throw InvalidInput("trace steps are not consecutive");
            rows.push_back(row);
        } catch (const std::logic_error& e) {
            throw InvalidInput("bad trace row '" + line + "': " + e.what());
        }
    }
    if (rows.empty()) throw InvalidInput("trace has no initial row");
    return rows;
}

std::vector<FlipRecord> records_from_rows(const std::vector<TraceRow>& rows) {
    std::vector<FlipRecord> records;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (!row.removed_1 || !row.removed_2 || !row.added_1 || !row.added_2 || !row.choice) {
            throw InvalidInput("trace row " + std::to_string(i) + " is missing flip fields");
        }
        FlipRecord rec;
        rec.crossing = CrossingPair(*row.removed_1, *row.removed_2);
        rec.choice = *row.choice;
        rec.new_e1 = std::min(*row.added_1, *row.added_2);
        rec.new_e2 = std::max(*row.added_1, *row.added_2);
        rec.length_after = row.length_after;
        rec.phi_l_after = row.phi_l_after;
        rec.phi_k_after = row.phi_k_after;
        rec.crossings_after = row.crossings_after;
        records.push_back(rec);
    }
    return records;
}

void save_trace(const PointSet& points, const FlipTrace& trace, const std::filesystem::path& path) {
    write_file(path, trace_to_csv(points, trace));
}

std::vector<TraceRow> load_trace(const std::filesystem::path& path) { return trace_rows_from_csv(read_file(path)); }

std::string report_to_json(const Report& report) {
    json doc;
    doc["instance"] = report.instance;
    doc["n"] = report.n;
    const auto put = [&](const char* key, const auto& value) {
        if (value) doc[key] = *value;
    };
    put("f", report.f);
    put("f_lower_bound", report.f_lower_bound);
    put("h", report.h);
    put("h_upper_bound", report.h_upper_bound);
    put("g_hat", report.g_hat);
    put("k_hat", report.k_hat);
    put("witness_trace", report.witness_trace);
    put("shortest_witness_trace", report.shortest_witness_trace);
    doc["limits_hit"] = report.limits_hit;
    doc["states_expanded"] = report.states_expanded;
    return doc.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
    try {
        const json doc = json::parse(text);
        Report r;
        r.instance = doc.value("instance", "");
        r.n = doc.value("n", std::size_t{0});
        const auto get_int = [&](const char* key) -> std::optional<std::int64_t> {
            if (!doc.contains(key)) return std::nullopt;
            return doc.at(key).get<std::int64_t>();
        };
        const auto get_str = [&](const char* key) -> std::optional<std::string> {
            if (!doc.contains(key)) return std::nullopt;
            return doc.at(key).get<std::string>();
        };
        r.f = get_int("f");
        r.f_lower_bound = get_int("f_lower_bound");
        r.h = get_int("h");
        r.h_upper_bound = get_int("h_upper_bound");
        r.g_hat = get_int("g_hat");
        r.k_hat = get_int("k_hat");
        r.witness_trace = get_str("witness_trace");
        r.shortest_witness_trace = get_str("shortest_witness_trace");
        r.limits_hit = doc.value("limits_hit", false);
        r.states_expanded = doc.value("states_expanded", std::size_t{0});
        return r;
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed report: ") + e.what());
    }
}

std::string audit_to_json(const std::vector<DecrementAudit>& audits) {
    json doc = json::array();
    for (const auto& a : audits) {
        json entry;
        entry["crossing"] = {to_string(a.crossing.e1), to_string(a.crossing.e2)};
        entry["choice"] = std::string(1, to_char(a.choice));
        entry["added"] = {to_string(a.new_e1), to_string(a.new_e2)};
        entry["line_types"] = {{"L1", a.type_counts[0]},
                               {"L2", a.type_counts[1]},
                               {"L3", a.type_counts[2]},
                               {"none", a.type_counts[3]}};
        json lines = json::array();
        for (const auto& l : a.lines) {
            lines.push_back({{"line", to_string(l.line)},
                             {"type", to_string(l.type)},
                             {"before", l.before},
                             {"after", l.after},
                             {"delta", l.delta()}});
        }
        entry["lines"] = std::move(lines);
        entry["phi_l_before"] = a.phi_l_before;
        entry["phi_l_after"] = a.phi_l_after;
        entry["delta_phi_l"] = a.delta_phi_l();
        if (const auto dk = a.delta_phi_k()) {
            entry["phi_k_before"] = *a.phi_k_before;
            entry["phi_k_after"] = *a.phi_k_after;
            entry["delta_phi_k"] = *dk;
            entry["middle_gaps"] = *a.middle_gaps;
        }
        doc.push_back(std::move(entry));
    }
    return doc.dump(2) + "\n";
}

}  // namespace flipmatch::io
