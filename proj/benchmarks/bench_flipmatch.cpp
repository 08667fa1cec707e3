#include <benchmark/benchmark.h>

#include <random>

#include "flipmatch/generators.hpp"
#include "flipmatch/potentials.hpp"
#include "flipmatch/search.hpp"

using namespace flipmatch;

namespace {

Instance random_instance(std::size_t n) { return gen_random(n, 1234 + n, BBox{0, 0, 700, 700}); }

void BM_FindCrossings(benchmark::State& state) {
    const auto inst = random_instance(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(find_crossings(inst.points, inst.matching));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FindCrossings)->RangeMultiplier(2)->Range(4, 128)->Complexity();

void BM_PhiLines(benchmark::State& state) {
    const auto inst = random_instance(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(phi_lines(inst.points, inst.matching));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PhiLines)->RangeMultiplier(2)->Range(4, 64)->Complexity(benchmark::oNCubed);

void BM_DecrementAudit(benchmark::State& state) {
    const auto inst = gen_two_line(Permutation::reverse(static_cast<std::size_t>(state.range(0))));
    const auto c = find_crossings(inst.points, inst.matching).front();
    for (auto _ : state) benchmark::DoNotOptimize(decrement_audit(inst.points, inst.matching, c, FlipChoice::ReconnectA));
}
BENCHMARK(BM_DecrementAudit)->Arg(4)->Arg(8)->Arg(16);

void BM_GreedyRun(benchmark::State& state) {
    const auto inst = gen_two_line(Permutation::reverse(static_cast<std::size_t>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(run_strategy(inst, Strategy::greedy_x()));
}
BENCHMARK(BM_GreedyRun)->Arg(8)->Arg(16)->Arg(32);

void BM_LongestSearch(benchmark::State& state) {
    const auto inst = gen_two_line(Permutation::reverse(static_cast<std::size_t>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(longest_flip_sequence(inst));
}
BENCHMARK(BM_LongestSearch)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

void BM_ShortestSearch(benchmark::State& state) {
    const auto inst = gen_convex(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(shortest_flip_sequence(inst));
}
BENCHMARK(BM_ShortestSearch)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

void BM_Extremal(benchmark::State& state) {
    const auto inst = random_instance(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(extremal_estimates(inst.points, SearchLimits{}, 5));
}
BENCHMARK(BM_Extremal)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
