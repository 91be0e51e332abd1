#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scengen/hybrid_model.hpp"

namespace scengen {

enum class StrategyKind { expert_baseline, parameter_range, sub_parameter_range };

std::string_view to_string(StrategyKind kind);
StrategyKind strategy_from(std::string_view name);

struct Strategy {
    StrategyKind kind = StrategyKind::parameter_range;
    bool feedback = false;
    int budget = 50;  // max draws per scenario when feedback is on
    std::uint64_t seed = 0;
};

// Scenario relevance check; must be pure. An empty function accepts everything.
using RelevancePredicate = std::function<bool(const ConcreteScenario&)>;

struct ConcretizationOutcome {
    ConcreteScenario scenario;
    bool relevant = true;
    int attempts = 1;
};

ConcretizationOutcome concretize(const SemiConcreteScenario& scn, const Strategy& strategy,
                                 const RelevancePredicate& relevance);

struct SuiteConcretization {
    std::vector<ConcretizationOutcome> outcomes;
    long total_attempts = 0;
};

// Element-wise concretize with per-scenario sub-seeds, so results do not
// depend on suite order or execution order.
SuiteConcretization concretize_suite(std::span<const SemiConcreteScenario> suite,
                                     const Strategy& strategy,
                                     const RelevancePredicate& relevance);

std::string serialize_outcomes(const SuiteConcretization& result);
SuiteConcretization parse_outcomes(const std::string& text);

}  // namespace scengen
