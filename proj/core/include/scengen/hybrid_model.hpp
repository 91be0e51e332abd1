#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "scengen/feature_model.hpp"

namespace scengen {

// Abstraction layers of a scenario feature model. A logical model keeps
// parameters abstract; the semi-concrete layer fixes discrete choices; the
// concrete layer additionally fixes a sub-range per continuous parameter.
enum class AbstractionLevel { logical, semi_concrete, concrete };

std::string_view to_string(AbstractionLevel level);
AbstractionLevel abstraction_level_from(std::string_view name);

struct OpenParameter {
    std::string id;
    double lo = 0;
    double hi = 0;
    std::string unit;
    std::vector<SubRange> sub_ranges;  // copied from the parameter spec; may be empty

    bool operator==(const OpenParameter&) const = default;
};

// A configuration with discrete choices resolved and continuous parameters
// still open. sub_range_bindings is populated only when the configuration
// came from a concrete-level model.
struct SemiConcreteScenario {
    Configuration configuration;
    std::vector<OpenParameter> open_parameters;
    std::map<std::string, std::size_t> sub_range_bindings;
};

struct Provenance {
    std::string strategy;
    std::uint64_t seed = 0;
    int attempts = 1;
    bool relevant = true;
};

struct ConcreteScenario {
    Configuration configuration;
    std::map<std::string, double> values;
    Provenance provenance;
};

// Expands each discrete parameter into an alternative group of concrete
// children named `<id>_<value>` (a single-value domain becomes one mandatory
// child). The parameter-carrying feature keeps its spec.
FeatureModel derive_semi_concrete(const FeatureModel& logical);

// derive_semi_concrete plus expansion of each continuous parameter into
// concrete children `<id>_sub<k>`, one per sub-range.
FeatureModel derive_concrete(const FeatureModel& logical);

FeatureModel derive(const FeatureModel& logical, AbstractionLevel level);

// Restriction of cfg to the features `onto` knows; drops expanded children
// when projecting a derived-model configuration onto a shallower layer.
Configuration project(const FeatureModel& onto, const Configuration& cfg);

// Reads the open continuous parameters (and, on a concrete model, the chosen
// sub-range per parameter) off a valid configuration.
SemiConcreteScenario lift(const Configuration& cfg, const FeatureModel& model,
                          AbstractionLevel level);

}  // namespace scengen
