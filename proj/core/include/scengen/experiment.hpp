#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scengen/concretizer.hpp"
#include "scengen/mutation.hpp"
#include "scengen/stats.hpp"
#include "scengen/twise_sampler.hpp"

namespace scengen {

struct ExperimentPlan {
    std::string model_path;
    std::string bindings_path;
    std::vector<StrategyKind> strategies;
    std::vector<int> t_values;
    std::vector<bool> feedback_modes = {false};
    int repetitions = 10;
    std::size_t mutant_count = 50;
    std::uint64_t master_seed = 0;
    PolarityMode polarity_mode = PolarityMode::both_polarities;
    unsigned worker_threads = 0;  // 0 = hardware concurrency
};

ExperimentPlan parse_plan(const std::string& document_text);
ExperimentPlan load_plan(const std::string& path);
std::string serialize_plan(const ExperimentPlan& plan);

struct CellResult {
    StrategyKind strategy = StrategyKind::parameter_range;
    int t = 1;
    bool feedback = false;
    int repetition = 0;
    std::uint64_t seed = 0;
    std::size_t suite_size = 0;
    std::size_t relevant_count = 0;
    long resample_attempts = 0;   // total draws across the suite
    long simulation_count = 0;    // suite size + resample overhead
    double mutation_score = 0;
};

struct PairwiseComparison {
    std::string group_x;
    std::string group_y;
    int t = 1;
    ComparisonResult stats;
};

struct ExperimentResult {
    std::string tool_version;
    std::string model_hash;
    std::uint64_t master_seed = 0;
    std::vector<MutantSpec> mutants;
    std::vector<CellResult> cells;
    std::vector<PairwiseComparison> comparisons;
};

// Runs the full strategies x t x feedback x repetitions matrix against one
// shared mutant set. The expert baseline is deterministic, so it executes
// once per t regardless of the repetition count.
ExperimentResult run_experiment(const ExperimentPlan& plan);

std::string serialize_result(const ExperimentResult& result);
ExperimentResult parse_result(const std::string& document_text);
ExperimentResult load_result(const std::string& path);

// Group label used in comparisons and reports: strategy name plus
// "+feedback" when the feedback loop was on.
std::string group_label(StrategyKind strategy, bool feedback);

}  // namespace scengen
