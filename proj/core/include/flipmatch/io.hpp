#pragma once

// File formats: JSON instances, reports and audits; CSV flip traces.
//
// Instance:  {"matching": [[i,j],...], "notes": "...", "points": [[x,y],...], "provenance": "..."}
// Trace CSV: step,removed_1,removed_2,added_1,added_2,choice,crossings_after,length_after,phi_l_after,phi_k_after
//            Row 0 describes the initial matching; segments are written "i-j".

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "flipmatch/generators.hpp"
#include "flipmatch/matching.hpp"
#include "flipmatch/potentials.hpp"

namespace flipmatch::io {

std::string instance_to_json(const Instance& inst);
// Re-validates indices, perfectness and general position. Throws InvalidInput.
Instance instance_from_json(const std::string& text);

void save_instance(const Instance& inst, const std::filesystem::path& path);
Instance load_instance(const std::filesystem::path& path);

struct TraceRow {
    std::size_t step = 0;
    std::optional<Segment> removed_1;
    std::optional<Segment> removed_2;
    std::optional<Segment> added_1;
    std::optional<Segment> added_2;
    std::optional<FlipChoice> choice;
    std::size_t crossings_after = 0;
    double length_after = 0.0;
    std::optional<std::int64_t> phi_l_after;
    std::optional<std::int64_t> phi_k_after;
};

inline constexpr const char* kTraceHeader =
    "step,removed_1,removed_2,added_1,added_2,choice,crossings_after,length_after,phi_l_after,phi_k_after";

std::vector<TraceRow> trace_rows(const PointSet& points, const FlipTrace& trace);
std::string trace_to_csv(const PointSet& points, const FlipTrace& trace);
std::vector<TraceRow> trace_rows_from_csv(const std::string& text);
// Flip records (without lengths or potentials) for replay().
std::vector<FlipRecord> records_from_rows(const std::vector<TraceRow>& rows);

void save_trace(const PointSet& points, const FlipTrace& trace, const std::filesystem::path& path);
std::vector<TraceRow> load_trace(const std::filesystem::path& path);

struct Report {
    std::string instance;
    std::size_t n = 0;
    std::optional<std::int64_t> f;
    std::optional<std::int64_t> f_lower_bound;
    std::optional<std::int64_t> h;
    std::optional<std::int64_t> h_upper_bound;
    std::optional<std::int64_t> g_hat;
    std::optional<std::int64_t> k_hat;
    std::optional<std::string> witness_trace;
    std::optional<std::string> shortest_witness_trace;
    bool limits_hit = false;
    std::size_t states_expanded = 0;
};

std::string report_to_json(const Report& report);
Report report_from_json(const std::string& text);

std::string audit_to_json(const std::vector<DecrementAudit>& audits);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace flipmatch::io
