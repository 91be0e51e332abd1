#include <benchmark/benchmark.h>

#include <vector>

#include "scengen/rng.hpp"
#include "scengen/stats.hpp"

using namespace scengen;

namespace {

std::vector<double> scores(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(n);
    // score-like data with plenty of ties
    for (double& x : v) x = static_cast<double>(rng.next_below(20)) / 20.0;
    return v;
}

void bm_mann_whitney(benchmark::State& state) {
    const auto x = scores(static_cast<std::size_t>(state.range(0)), 1);
    const auto y = scores(static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(mann_whitney_u(x, y));
}

}  // namespace

BENCHMARK(bm_mann_whitney)->Arg(10)->Arg(20)->Arg(100);
