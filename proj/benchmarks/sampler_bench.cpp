#include <benchmark/benchmark.h>

#include "scengen/hybrid_model.hpp"
#include "scengen/twise_sampler.hpp"

using namespace scengen;

namespace {

void bm_sample(benchmark::State& state) {
    const FeatureModel model = derive(load_model(SCENGEN_MODELS_DIR "/acc_scenarios.json"),
                                      AbstractionLevel::semi_concrete);
    SamplingConfig cfg;
    cfg.t = static_cast<int>(state.range(0));
    cfg.seed = 7;
    for (auto _ : state) {
        auto suite = sample(model, cfg);
        benchmark::DoNotOptimize(suite);
        state.counters["configs"] = static_cast<double>(suite.size());
    }
}

}  // namespace

BENCHMARK(bm_sample)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);
