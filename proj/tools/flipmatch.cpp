// flipmatch: generate instances, run flip strategies, search flip graphs,
// audit potential decrements and render matchings.
//
// Exit codes: 0 success, 1 internal error, 2 input error, 3 strategy not
// applicable, 4 search limits, enumeration caps or step cap reached.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "flipmatch/errors.hpp"
#include "flipmatch/generators.hpp"
#include "flipmatch/io.hpp"
#include "flipmatch/potentials.hpp"
#include "flipmatch/search.hpp"
#include "flipmatch/svg.hpp"

namespace fs = std::filesystem;
using namespace flipmatch;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;
constexpr int kExitInapplicable = 3;
constexpr int kExitLimits = 4;

std::vector<long long> split_ints(const std::string& text) {
    std::vector<long long> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        try {
            out.push_back(std::stoll(item, &used));
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw InvalidInput("'" + text + "' is not a comma-separated integer list");
    }
    return out;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        io::write_file(out_path, text);
    }
}

struct LimitFlags {
    std::size_t max_states = 10'000'000;
    std::size_t max_depth = 1'000'000;
    long long time_budget_ms = 60'000;

    void attach(CLI::App* cmd) {
        cmd->add_option("--max-states", max_states, "Abort after this many distinct matchings")->capture_default_str();
        cmd->add_option("--max-depth", max_depth, "Abort beyond this many flips along one path")->capture_default_str();
        cmd->add_option("--time-budget-ms", time_budget_ms, "Wall-clock budget per search")->capture_default_str();
    }
    SearchLimits limits() const { return {max_states, max_depth, std::chrono::milliseconds(time_budget_ms)}; }
};

// ---- gen -------------------------------------------------------------------

struct GenArgs {
    std::string perm;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string bbox = "0,0,100,100";
    std::string fixture;
    std::string notes;
    std::string out;
};

void add_gen(CLI::App& app, GenArgs& args, std::function<int()>& action) {
    auto* gen = app.add_subcommand("gen", "Generate an instance file");
    gen->require_subcommand(1);
    gen->add_option("-o,--out", args.out, "Output path (default: standard output)");
    gen->add_option("--notes", args.notes, "Free-text notes stored in the file");

    auto* two = gen->add_subcommand("two-line", "Permutation instance on two opposing arcs");
    two->add_option("--perm", args.perm, "Permutation images, e.g. 2,1,0")->required();
    two->fallthrough();
    two->callback([&] {
        action = [&] {
            std::vector<int> images;
            for (auto v : split_ints(args.perm)) images.push_back(static_cast<int>(v));
            auto inst = gen_two_line(Permutation(std::move(images)));
            inst.notes = args.notes;
            emit(io::instance_to_json(inst), args.out);
            return kExitOk;
        };
    });

    auto* convex = gen->add_subcommand("convex", "Convex-position instance with a spine and parallel chords");
    convex->add_option("--n", args.n, "Number of segments")->required();
    convex->fallthrough();
    convex->callback([&] {
        action = [&] {
            auto inst = gen_convex(args.n);
            inst.notes = args.notes;
            emit(io::instance_to_json(inst), args.out);
            return kExitOk;
        };
    });

    auto* random = gen->add_subcommand("random", "Random points in general position with a random matching");
    random->add_option("--n", args.n, "Number of segments")->required();
    random->add_option("--seed", args.seed, "RNG seed")->capture_default_str();
    random->add_option("--bbox", args.bbox, "xmin,ymin,xmax,ymax (inclusive)")->capture_default_str();
    random->fallthrough();
    random->callback([&] {
        action = [&] {
            const auto b = split_ints(args.bbox);
            if (b.size() != 4) throw InvalidInput("--bbox needs four integers");
            auto inst = gen_random(args.n, args.seed, BBox{b[0], b[1], b[2], b[3]});
            inst.notes = args.notes;
            emit(io::instance_to_json(inst), args.out);
            return kExitOk;
        };
    });

    auto* fixture = gen->add_subcommand("fixture", "Pinned small instances");
    fixture->add_option("--name", args.fixture, "square | segment-reappears | crossing-increase")
        ->required()
        ->check(CLI::IsMember({"square", "segment-reappears", "crossing-increase"}));
    fixture->fallthrough();
    fixture->callback([&] {
        action = [&] {
            Instance inst = args.fixture == "square"              ? fixtures::square_diagonals()
                            : args.fixture == "segment-reappears" ? fixtures::segment_reappears()
                                                                  : fixtures::crossing_increase();
            if (!args.notes.empty()) inst.notes = args.notes;
            emit(io::instance_to_json(inst), args.out);
            return kExitOk;
        };
    });
}

// ---- run -------------------------------------------------------------------

struct RunArgs {
    std::string instance;
    std::string strategy = "greedy-x";
    std::string respond = "greedy-x";
    std::uint64_t seed = 0;
    std::size_t max_steps = 1'000'000;
    bool no_phi_l = false;
    std::string out;
};

struct DeltaStats {
    std::optional<std::int64_t> min, max;
    double sum = 0.0;
    std::size_t count = 0;

    void add(std::int64_t d) {
        min = min ? std::min(*min, d) : d;
        max = max ? std::max(*max, d) : d;
        sum += static_cast<double>(d);
        ++count;
    }
    std::string describe(const std::string& name) const {
        if (count == 0) return "";
        char buf[160];
        std::snprintf(buf, sizeof buf, " %s_min=%lld %s_mean=%.3f %s_max=%lld", name.c_str(),
                      static_cast<long long>(*min), name.c_str(), sum / static_cast<double>(count), name.c_str(),
                      static_cast<long long>(*max));
        return buf;
    }
};

int do_run(const RunArgs& args) {
    const Instance inst = io::load_instance(args.instance);
    if (args.respond != "greedy-x") throw InvalidInput("only the greedy-x responder is available");
    const Strategy strategy = Strategy::parse(args.strategy, args.seed);
    const FlipTrace trace = run_strategy(inst, strategy, RunOptions{args.max_steps, !args.no_phi_l, true});
    if (!args.out.empty()) io::save_trace(inst.points, trace, args.out);

    DeltaStats dk, dl;
    for (const auto& r : trace.records) {
        if (r.phi_k_before && r.phi_k_after) dk.add(*r.phi_k_after - *r.phi_k_before);
        if (r.phi_l_before && r.phi_l_after) dl.add(*r.phi_l_after - *r.phi_l_before);
    }
    std::cout << "steps=" << trace.steps() << " final_crossings=" << count_crossings(inst.points, trace.final_matching)
              << " complete=" << (trace.complete ? 1 : 0) << dk.describe("dphi_k") << dl.describe("dphi_l") << "\n";
    return trace.complete ? kExitOk : kExitLimits;
}

// ---- search ----------------------------------------------------------------

struct SearchArgs {
    std::string instance;
    std::string which = "both";
    bool extremal = false;
    std::string regime = "both";
    LimitFlags limits;
    std::size_t cap = kDefaultEnumerationCap;
    std::string out;
    std::string witness_dir;
};

int do_search(const SearchArgs& args) {
    const Instance inst = io::load_instance(args.instance);
    const ChoiceRegime regime = args.regime == "greedy-x" ? ChoiceRegime::GreedyXOnly : ChoiceRegime::Both;
    const SearchLimits limits = args.limits.limits();

    fs::path witness_dir = args.witness_dir;
    std::string stem = "search";
    if (!args.out.empty()) {
        stem = fs::path(args.out).stem().string();
        if (witness_dir.empty()) witness_dir = fs::path(args.out).parent_path();
    }
    const auto write_witness = [&](const FlipTrace& t, const std::string& tag) -> std::optional<std::string> {
        if (args.out.empty() && args.witness_dir.empty()) return std::nullopt;
        const fs::path path = witness_dir / (stem + "." + tag + ".csv");
        io::save_trace(inst.points, t, path);
        return path.string();
    };

    io::Report report;
    report.instance = inst.id();
    report.n = inst.n();
    if (args.which == "f" || args.which == "both") {
        const auto r = longest_flip_sequence(inst, limits, regime);
        report.f = r.value;
        report.f_lower_bound = r.lower_bound;
        report.limits_hit |= r.limits_hit;
        report.states_expanded += r.states_expanded;
        report.witness_trace = write_witness(r.witness, "f");
    }
    if (args.which == "h" || args.which == "both") {
        const auto r = shortest_flip_sequence(inst, limits, regime);
        report.h = r.value;
        report.h_upper_bound = r.upper_bound;
        report.limits_hit |= r.limits_hit;
        report.states_expanded += r.states_expanded;
        const auto path = write_witness(r.witness, "h");
        if (args.which == "h") {
            report.witness_trace = path;
        } else {
            report.shortest_witness_trace = path;
        }
    }
    if (args.extremal) {
        try {
            const auto e = extremal_estimates(inst.points, limits, args.cap);
            report.g_hat = e.g_hat;
            report.k_hat = e.k_hat;
            report.states_expanded += e.states;
        } catch (const CapExceeded&) {
            report.limits_hit = true;
        } catch (const InvariantViolation&) {
            throw;
        } catch (const Error&) {
            report.limits_hit = true;
        }
    }
    emit(io::report_to_json(report), args.out);
    return report.limits_hit ? kExitLimits : kExitOk;
}

// ---- sweep -----------------------------------------------------------------

struct SweepArgs {
    std::string family;
    std::size_t n_min = 2;
    std::size_t n_max = 6;
    std::size_t seeds = 3;
    std::uint64_t base_seed = 1;
    std::string bbox = "0,0,1000,1000";
    LimitFlags limits;
    std::size_t cap = 4;
    unsigned jobs = 0;
    std::string out_dir;
};

struct SweepJob {
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

std::string opt(const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : ""; }

std::string sweep_row(const SweepArgs& args, const SweepJob& job, const fs::path& instance_dir) {
    const auto n = static_cast<std::int64_t>(job.n);
    std::ostringstream row;
    row << args.family << "," << job.n << "," << job.seed << ",";
    std::optional<std::int64_t> crossings, f, f_lower, h, g_hat, k_hat, phi_l, phi_k, greedy_steps;
    std::string status = "ok";
    std::string instance_name;
    try {
        Instance inst;
        if (args.family == "two-line") {
            inst = gen_two_line(Permutation::reverse(job.n));
            f_lower = static_cast<std::int64_t>(run_strategy(inst, Strategy::bubble_adjacent()).steps());
        } else if (args.family == "convex") {
            inst = gen_convex(job.n);
        } else {
            const auto b = split_ints(args.bbox);
            inst = gen_random(job.n, job.seed, BBox{b.at(0), b.at(1), b.at(2), b.at(3)});
        }
        instance_name = args.family + "_n" + std::to_string(job.n) + "_s" + std::to_string(job.seed) + ".json";
        io::save_instance(inst, instance_dir / instance_name);
        crossings = static_cast<std::int64_t>(count_crossings(inst.points, inst.matching));
        phi_l = phi_lines(inst.points, inst.matching);
        phi_k = phi_vertical(shear_to_distinct_x(inst.points), inst.matching);
        greedy_steps = static_cast<std::int64_t>(run_strategy(inst, Strategy::greedy_x()).steps());

        const auto lr = longest_flip_sequence(inst, args.limits.limits());
        f = lr.value;
        f_lower = std::max(f_lower.value_or(0), lr.lower_bound.value_or(0));
        const auto sr = shortest_flip_sequence(inst, args.limits.limits());
        h = sr.value;
        if (lr.limits_hit || sr.limits_hit) status = "limits";
        if (args.family == "random") {
            if (job.n <= args.cap) {
                const auto e = extremal_estimates(inst.points, args.limits.limits(), args.cap);
                g_hat = e.g_hat;
                k_hat = e.k_hat;
            } else {
                status = status == "ok" ? "cap" : status + "+cap";
            }
        }
    } catch (const std::exception& e) {
        status = std::string("error: ") + e.what();
        std::replace(status.begin(), status.end(), ',', ';');
    }
    const std::int64_t k_bound = (n * n + 1) / 2;
    row << instance_name << "," << opt(crossings) << "," << opt(f) << "," << opt(f_lower) << "," << opt(h) << ","
        << opt(g_hat) << "," << opt(k_hat) << "," << opt(phi_l) << "," << opt(phi_k) << "," << phi_lines_bound(job.n)
        << "," << n * n * n << "," << k_bound << "," << phi_vertical_bound(job.n) / 2 << "," << opt(greedy_steps)
        << "," << status;
    return row.str();
}

int do_sweep(const SweepArgs& args) {
    if (args.n_min < 1 || args.n_min > args.n_max) throw InvalidInput("need 1 <= n-min <= n-max");
    if (args.family == "random" && split_ints(args.bbox).size() != 4) throw InvalidInput("--bbox needs four integers");
    std::vector<SweepJob> jobs;
    for (std::size_t n = args.n_min; n <= args.n_max; ++n) {
        const std::size_t reps = args.family == "random" ? std::max<std::size_t>(args.seeds, 1) : 1;
        for (std::size_t s = 0; s < reps; ++s) jobs.push_back({n, args.family == "random" ? args.base_seed + s : 0});
    }
    const fs::path out_dir = args.out_dir;
    const fs::path instance_dir = out_dir / "instances";
    fs::create_directories(instance_dir);

    std::vector<std::string> rows(jobs.size());
    std::atomic<std::size_t> next{0};
    const unsigned workers =
        std::max(1u, std::min<unsigned>(args.jobs ? args.jobs : std::thread::hardware_concurrency(),
                                        static_cast<unsigned>(jobs.size())));
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < jobs.size(); i = next++) rows[i] = sweep_row(args, jobs[i], instance_dir);
        });
    }
    for (auto& t : pool) t.join();

    std::ostringstream csv;
    csv << "family,n,seed,instance,crossings,f,f_lower,h,g_hat,k_hat,phi_l,phi_k,phi_l_bound,g_bound,k_bound,"
           "k_bound_gaps,greedy_steps,status\n";
    std::size_t failures = 0;
    for (const auto& r : rows) {
        csv << r << "\n";
        failures += r.ends_with(",ok") ? 0 : 1;
    }
    io::write_file(out_dir / "sweep.csv", csv.str());
    std::cout << "rows=" << rows.size() << " not_ok=" << failures << " out=" << (out_dir / "sweep.csv").string()
              << "\n";
    return kExitOk;
}

// ---- audit -----------------------------------------------------------------

struct AuditArgs {
    std::string instance;
    std::string choice = "both";
    int crossing = -1;
    bool shear = false;
    std::string out;
};

int do_audit(const AuditArgs& args) {
    const Instance inst = io::load_instance(args.instance);
    const PointSet points = args.shear ? shear_to_distinct_x(inst.points) : inst.points;
    const auto crossings = find_crossings(points, inst.matching);
    if (args.crossing >= static_cast<int>(crossings.size())) {
        throw InvalidInput("crossing index " + std::to_string(args.crossing) + " out of range (" +
                           std::to_string(crossings.size()) + " crossings)");
    }
    std::vector<DecrementAudit> audits;
    for (std::size_t i = 0; i < crossings.size(); ++i) {
        if (args.crossing >= 0 && static_cast<int>(i) != args.crossing) continue;
        const auto& c = crossings[i];
        std::vector<FlipChoice> choices;
        if (args.choice == "both") {
            choices.assign(kFlipChoices.begin(), kFlipChoices.end());
        } else if (args.choice == "greedy-x") {
            choices.push_back(greedy_x_choice(points, c));
        } else {
            choices.push_back(flip_choice_from_char(args.choice.at(0)));
        }
        for (FlipChoice ch : choices) audits.push_back(decrement_audit(points, inst.matching, c, ch));
    }
    emit(io::audit_to_json(audits), args.out);
    return kExitOk;
}

// ---- render ----------------------------------------------------------------

struct RenderArgs {
    std::string instance;
    std::string trace;
    int frame = -1;
    std::string out;
    std::string out_dir;
};

int do_render(const RenderArgs& args) {
    const Instance inst = io::load_instance(args.instance);
    if (args.trace.empty()) {
        svg::FrameStyle style;
        style.title = inst.id();
        emit(svg::render_frame(inst.points, inst.matching, style), args.out);
        return kExitOk;
    }
    FlipTrace trace;
    trace.instance_id = inst.id();
    trace.initial = inst.matching;
    trace.records = io::records_from_rows(io::load_trace(args.trace));
    trace.final_matching = replay(inst.points, inst.matching, trace.records);
    const auto frames = svg::render_trace(inst.points, trace);
    if (args.frame >= 0) {
        if (args.frame >= static_cast<int>(frames.size())) {
            throw InvalidInput("frame " + std::to_string(args.frame) + " out of range (" +
                               std::to_string(frames.size()) + " frames)");
        }
        emit(frames[args.frame], args.out);
        return kExitOk;
    }
    if (args.out_dir.empty()) throw InvalidInput("rendering every frame needs --out-dir");
    for (std::size_t i = 0; i < frames.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%03zu.svg", i);
        io::write_file(fs::path(args.out_dir) / name, frames[i]);
    }
    std::cout << "frames=" << frames.size() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Flip sequences on perfect straight-line matchings"};
    app.require_subcommand(1);
    std::function<int()> action;

    GenArgs gen_args;
    add_gen(app, gen_args, action);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Run a flip strategy and write its trace");
    run->add_option("instance", run_args.instance, "Instance JSON")->required();
    run->add_option("--strategy", run_args.strategy,
                    "greedy-x | bubble | random | first | adversary:random | adversary:first | adversary:max")
        ->capture_default_str();
    run->add_option("--respond", run_args.respond, "Responder for adversary strategies")->capture_default_str();
    run->add_option("--seed", run_args.seed, "Seed for random choices")->capture_default_str();
    run->add_option("--max-steps", run_args.max_steps, "Step cap")->capture_default_str();
    run->add_flag("--no-phi-l", run_args.no_phi_l, "Skip the supporting-line potential (O(n^3) per step)");
    run->add_option("-o,--out", run_args.out, "Trace CSV path");
    run->callback([&] { action = [&] { return do_run(run_args); }; });

    SearchArgs search_args;
    auto* search = app.add_subcommand("search", "Exact longest/shortest flip sequences");
    search->add_option("instance", search_args.instance, "Instance JSON")->required();
    search->add_option("--which", search_args.which, "f | h | both")
        ->check(CLI::IsMember({"f", "h", "both"}))
        ->capture_default_str();
    search->add_flag("--extremal", search_args.extremal, "Also compute max f and max h over all matchings of P");
    search->add_option("--cap", search_args.cap, "Largest n for --extremal")->capture_default_str();
    search->add_option("--regime", search_args.regime, "both | greedy-x (single reconnection per crossing)")
        ->check(CLI::IsMember({"both", "greedy-x"}))
        ->capture_default_str();
    search_args.limits.attach(search);
    search->add_option("-o,--out", search_args.out, "Report JSON path (default: standard output)");
    search->add_option("--witness-dir", search_args.witness_dir, "Directory for witness trace CSVs");
    search->callback([&] { action = [&] { return do_search(search_args); }; });

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "Aggregate search results over an instance family");
    sweep->add_option("--family", sweep_args.family, "two-line | convex | random")
        ->required()
        ->check(CLI::IsMember({"two-line", "convex", "random"}));
    sweep->add_option("--n-min", sweep_args.n_min)->capture_default_str();
    sweep->add_option("--n-max", sweep_args.n_max)->capture_default_str();
    sweep->add_option("--seeds", sweep_args.seeds, "Instances per n (random family)")->capture_default_str();
    sweep->add_option("--seed", sweep_args.base_seed, "First seed (random family)")->capture_default_str();
    sweep->add_option("--bbox", sweep_args.bbox, "xmin,ymin,xmax,ymax (random family)")->capture_default_str();
    sweep->add_option("--cap", sweep_args.cap, "Largest n for exhaustive max f / max h columns")
        ->capture_default_str();
    sweep->add_option("--jobs", sweep_args.jobs, "Worker threads (0: hardware concurrency)")->capture_default_str();
    sweep_args.limits.attach(sweep);
    sweep->add_option("-o,--out-dir", sweep_args.out_dir, "Output directory")->required();
    sweep->callback([&] { action = [&] { return do_sweep(sweep_args); }; });

    AuditArgs audit_args;
    auto* audit = app.add_subcommand("audit", "Dry-run potential accounting for crossings of an instance");
    audit->add_option("instance", audit_args.instance, "Instance JSON")->required();
    audit->add_option("--choice", audit_args.choice, "both | A | B | greedy-x")
        ->check(CLI::IsMember({"both", "A", "B", "greedy-x"}))
        ->capture_default_str();
    audit->add_option("--crossing", audit_args.crossing, "Index into the sorted crossing list (default: all)");
    audit->add_flag("--shear", audit_args.shear, "Shear to distinct x first so the vertical potential is reported");
    audit->add_option("-o,--out", audit_args.out, "Audit JSON path (default: standard output)");
    audit->callback([&] { action = [&] { return do_audit(audit_args); }; });

    RenderArgs render_args;
    auto* render = app.add_subcommand("render", "Render an instance or trace frames as SVG");
    render->add_option("instance", render_args.instance, "Instance JSON")->required();
    render->add_option("--trace", render_args.trace, "Trace CSV to render frame by frame");
    render->add_option("--frame", render_args.frame, "Render only this frame of the trace");
    render->add_option("-o,--out", render_args.out, "SVG path for a single frame (default: standard output)");
    render->add_option("--out-dir", render_args.out_dir, "Directory for all trace frames");
    render->callback([&] { action = [&] { return do_render(render_args); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        return action ? action() : kExitInput;
    } catch (const InapplicableStrategy& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInapplicable;
    } catch (const CapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitLimits;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
