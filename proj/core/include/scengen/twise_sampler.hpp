#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scengen/feature_model.hpp"

namespace scengen {

enum class PolarityMode { positive_only, both_polarities };

std::string_view to_string(PolarityMode mode);
PolarityMode polarity_mode_from(std::string_view name);

struct SamplingConfig {
    int t = 2;
    std::uint64_t seed = 0;
    PolarityMode polarity_mode = PolarityMode::both_polarities;
    std::optional<std::size_t> max_configs;
};

// t distinct features with a polarity each.
struct InteractionTuple {
    std::vector<NamedLiteral> literals;

    bool operator==(const InteractionTuple&) const = default;
};

struct CoverageReport {
    std::size_t total_valid_tuples = 0;
    std::size_t covered_tuples = 0;
    std::vector<InteractionTuple> uncovered;
    double ratio = 1.0;
};

// Greedy covering-array construction: every satisfiable interaction of
// t literals appears in at least one returned configuration; all returned
// configurations are valid; deterministic per (model, cfg).
std::vector<Configuration> sample(const FeatureModel& model, const SamplingConfig& cfg);

CoverageReport measure_coverage(const FeatureModel& model, std::span<const Configuration> suite,
                                int t, PolarityMode mode);

struct SuiteDocument {
    std::string model_hash;
    int t = 0;
    std::uint64_t seed = 0;
    PolarityMode polarity_mode = PolarityMode::both_polarities;
    std::vector<Configuration> configurations;
};

std::string serialize_suite(const SuiteDocument& doc);
SuiteDocument parse_suite(const std::string& text);

}  // namespace scengen
