#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "flipmatch/io.hpp"

namespace fs = std::filesystem;
using namespace flipmatch;

namespace {

struct Result {
    int code = -1;
    std::string out;
};

Result cli(const std::string& args) {
    const std::string cmd = std::string(FLIPMATCH_CLI_PATH) + " " + args + " 2>/dev/null";
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        std::random_device rd;
        dir_ = fs::temp_directory_path() / ("flipmatch_cli_" + std::to_string(rd()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text) n += c == '\n' ? 1 : 0;
    return n;
}

}  // namespace

TEST_F(Cli, GenIsDeterministicAndMatchesGolden) {
    const auto a = cli("gen random --n 3 --seed 7");
    const auto b = cli("gen random --n 3 --seed 7");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out, io::read_file(FLIPMATCH_TEST_DATA_DIR "/random_n3_seed7.json"));
    EXPECT_NE(a.out, cli("gen random --n 3 --seed 8").out);
}

TEST_F(Cli, GenWritesLoadableInstances) {
    ASSERT_EQ(cli("gen two-line --perm 2,0,1 -o " + path("t.json")).code, 0);
    ASSERT_EQ(cli("gen convex --n 5 -o " + path("c.json")).code, 0);
    ASSERT_EQ(cli("gen fixture --name segment-reappears -o " + path("f.json")).code, 0);
    EXPECT_EQ(io::load_instance(path("t.json")).id(), "two-line:2,0,1");
    EXPECT_EQ(io::load_instance(path("c.json")).n(), 5u);
    EXPECT_EQ(io::load_instance(path("f.json")).id(), "fixture:segment-reappears");
}

TEST_F(Cli, BubbleRunTakesOneFlipPerInversion) {
    ASSERT_EQ(cli("gen two-line --perm 4,3,2,1,0 -o " + path("rev.json")).code, 0);
    const auto r = cli("run " + path("rev.json") + " --strategy bubble -o " + path("t.csv"));
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("steps=10 "), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("final_crossings=0"), std::string::npos);
    const auto rows = io::load_trace(path("t.csv"));
    EXPECT_EQ(rows.size(), 11u);
}

TEST_F(Cli, GreedyRunReportsPotentialDecrements) {
    ASSERT_EQ(cli("gen convex --n 5 -o " + path("c.json")).code, 0);
    const auto r = cli("run " + path("c.json") + " --strategy adversary:max --respond greedy-x");
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("dphi_k_max=-"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("dphi_l_max=-"), std::string::npos) << r.out;
}

TEST_F(Cli, AdversaryTraceRowsDropVerticalPotential) {
    ASSERT_EQ(cli("gen two-line --perm 5,4,3,2,1,0 -o " + path("r.json")).code, 0);
    ASSERT_EQ(cli("run " + path("r.json") + " --strategy adversary:random --respond greedy-x --seed 9 -o " +
                  path("t.csv")).code,
              0);
    const auto rows = io::load_trace(path("t.csv"));
    ASSERT_GT(rows.size(), 1u);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        ASSERT_TRUE(rows[i].phi_k_after && rows[i - 1].phi_k_after);
        EXPECT_LE(*rows[i].phi_k_after - *rows[i - 1].phi_k_after, -2);
        ASSERT_TRUE(rows[i].phi_l_after && rows[i - 1].phi_l_after);
        EXPECT_LE(*rows[i].phi_l_after - *rows[i - 1].phi_l_after, -4);
    }
    const auto lean = cli("run " + path("r.json") + " --no-phi-l");
    EXPECT_EQ(lean.out.find("dphi_l"), std::string::npos);
}

TEST_F(Cli, ExitCodes) {
    ASSERT_EQ(cli("gen random --n 3 --seed 1 -o " + path("r.json")).code, 0);
    ASSERT_EQ(cli("gen two-line --perm 5,4,3,2,1,0 -o " + path("rev.json")).code, 0);
    EXPECT_EQ(cli("run " + path("r.json") + " --strategy bubble").code, 3);
    EXPECT_EQ(cli("run " + path("rev.json") + " --strategy first --max-steps 1").code, 4);
    EXPECT_EQ(cli("search " + path("rev.json") + " --max-states 5").code, 4);
    EXPECT_EQ(cli("run " + path("missing.json")).code, 2);
    EXPECT_EQ(cli("run " + path("r.json") + " --strategy nonsense").code, 2);
    EXPECT_EQ(cli("run " + path("r.json") + " --respond first").code, 2);
    EXPECT_EQ(cli("gen convex --n 0").code, 2);
    EXPECT_EQ(cli("gen two-line --perm 0,0").code, 2);
    EXPECT_EQ(cli("frobnicate").code, 2);
    EXPECT_EQ(cli("").code, 2);
    std::ofstream(path("bad.json")) << "{\"points\": [[0,0],[1,1]], \"matching\": [[0,0]]}";
    EXPECT_EQ(cli("search " + path("bad.json")).code, 2);
    std::ofstream(path("collinear.json")) << "{\"points\": [[0,0],[1,1],[2,2],[3,0]], \"matching\": [[0,1],[2,3]]}";
    EXPECT_EQ(cli("run " + path("collinear.json")).code, 2);
}

TEST_F(Cli, SearchReportsExactValuesAndWitnesses) {
    ASSERT_EQ(cli("gen convex --n 4 -o " + path("c.json")).code, 0);
    ASSERT_EQ(cli("search " + path("c.json") + " -o " + path("rep.json")).code, 0);
    const auto rep = io::report_from_json(io::read_file(path("rep.json")));
    ASSERT_TRUE(rep.h && rep.f);
    EXPECT_EQ(*rep.h, 3);
    EXPECT_GE(*rep.f, *rep.h);
    EXPECT_FALSE(rep.limits_hit);
    ASSERT_TRUE(rep.witness_trace);
    EXPECT_EQ(io::load_trace(*rep.witness_trace).size(), static_cast<std::size_t>(*rep.f) + 1);
    ASSERT_TRUE(rep.shortest_witness_trace);
    EXPECT_EQ(io::load_trace(*rep.shortest_witness_trace).size(), 4u);

    ASSERT_EQ(cli("gen fixture --name square -o " + path("sq.json")).code, 0);
    const auto sq = io::report_from_json(cli("search " + path("sq.json")).out);
    EXPECT_EQ(sq.f, 1);
    EXPECT_EQ(sq.h, 1);
}

TEST_F(Cli, SearchLimitsGiveBounds) {
    ASSERT_EQ(cli("gen two-line --perm 5,4,3,2,1,0 -o " + path("rev.json")).code, 0);
    const auto r = cli("search " + path("rev.json") + " --which f --max-states 5");
    ASSERT_EQ(r.code, 4);
    const auto rep = io::report_from_json(r.out);
    EXPECT_TRUE(rep.limits_hit);
    EXPECT_FALSE(rep.f);
    ASSERT_TRUE(rep.f_lower_bound);
    EXPECT_GT(*rep.f_lower_bound, 0);
}

TEST_F(Cli, ExtremalEstimates) {
    ASSERT_EQ(cli("gen convex --n 3 -o " + path("c.json")).code, 0);
    const auto rep = io::report_from_json(cli("search " + path("c.json") + " --which h --extremal").out);
    ASSERT_TRUE(rep.g_hat && rep.k_hat);
    EXPECT_LE(*rep.g_hat, 27);
    EXPECT_LE(*rep.k_hat, 5);
    EXPECT_GE(*rep.k_hat, 2);
}

TEST_F(Cli, SweepWritesOneRowPerInstance) {
    const auto r = cli("sweep --family random --n-min 2 --n-max 3 --seeds 2 --jobs 2 -o " + path("sw"));
    ASSERT_EQ(r.code, 0);
    const auto csv = io::read_file(path("sw/sweep.csv"));
    EXPECT_EQ(csv.rfind("family,n,seed,instance,crossings,f,f_lower,h,g_hat,k_hat,", 0), 0u);
    EXPECT_EQ(count_lines(csv), 5u);
    EXPECT_EQ(std::distance(fs::directory_iterator(path("sw/instances")), fs::directory_iterator{}), 4);

    ASSERT_EQ(cli("sweep --family two-line --n-min 2 --n-max 5 -o " + path("tl")).code, 0);
    std::istringstream rows(io::read_file(path("tl/sweep.csv")));
    std::string line;
    std::getline(rows, line);
    std::size_t n = 2;
    while (std::getline(rows, line)) {
        // family,n,seed,instance,crossings,f,f_lower,...
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
        ASSERT_GE(cells.size(), 7u);
        EXPECT_EQ(std::stoul(cells[4]), n * (n - 1) / 2);
        EXPECT_GE(std::stol(cells[5]), std::stol(cells[6]));
        EXPECT_GE(std::stoul(cells[6]), n * (n - 1) / 2);
        EXPECT_EQ(cells.back(), "ok");
        ++n;
    }
    EXPECT_EQ(n, 6u);
}

TEST_F(Cli, AuditEmitsJson) {
    ASSERT_EQ(cli("gen fixture --name square -o " + path("sq.json")).code, 0);
    const auto r = cli("audit " + path("sq.json"));
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("\"delta_phi_l\": -4"), std::string::npos);
    EXPECT_EQ(cli("audit " + path("sq.json") + " --crossing 3").code, 2);
}

TEST_F(Cli, RenderFrames) {
    ASSERT_EQ(cli("gen two-line --perm 3,2,1,0 -o " + path("rev.json")).code, 0);
    ASSERT_EQ(cli("run " + path("rev.json") + " --strategy bubble -o " + path("t.csv")).code, 0);
    const auto r = cli("render " + path("rev.json") + " --trace " + path("t.csv") + " --out-dir " + path("frames"));
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(std::distance(fs::directory_iterator(path("frames")), fs::directory_iterator{}), 7);
    const auto one = cli("render " + path("rev.json") + " --trace " + path("t.csv") + " --frame 2");
    ASSERT_EQ(one.code, 0);
    EXPECT_NE(one.out.find("stroke-dasharray"), std::string::npos);
    EXPECT_EQ(cli("render " + path("rev.json") + " --trace " + path("t.csv") + " --frame 7").code, 2);
    const auto still = cli("render " + path("rev.json"));
    ASSERT_EQ(still.code, 0);
    EXPECT_NE(still.out.find("<svg"), std::string::npos);
    EXPECT_NE(still.out.find("</svg>"), std::string::npos);

    std::ofstream(path("broken.csv")) << "step,removed_1\n";
    EXPECT_EQ(cli("render " + path("rev.json") + " --trace " + path("broken.csv") + " --out-dir " + path("x")).code, 2);
}
