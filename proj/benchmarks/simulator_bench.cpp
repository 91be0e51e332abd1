#include <benchmark/benchmark.h>

#include "scengen/simulator.hpp"

using namespace scengen;

namespace {

ScenarioSetup braking_setup() {
    ScenarioSetup s;
    s.ego_v0 = 33.0;
    s.ego_v_set = 33.0;
    s.lead_present = true;
    s.lead_gap0 = 90.0;
    s.lead_v0 = 22.0;
    s.lead_maneuver = {ManeuverKind::brake, 12.0, 2.5};
    return s;
}

void bm_simulate_40s(benchmark::State& state) {
    const ScenarioSetup setup = braking_setup();
    const AccParameters acc;
    for (auto _ : state) benchmark::DoNotOptimize(simulate(setup, acc));
}

void bm_oracles(benchmark::State& state) {
    const ScenarioSetup setup = braking_setup();
    const SimulationTrace trace = simulate(setup, AccParameters{});
    const OracleTolerances tol;
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_oracles(trace, setup, tol));
}

}  // namespace

BENCHMARK(bm_simulate_40s)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_oracles)->Unit(benchmark::kMicrosecond);
