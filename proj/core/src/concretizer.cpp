#include "scengen/concretizer.hpp"

#include <nlohmann/json.hpp>

#include "scengen/rng.hpp"

namespace scengen {

using nlohmann::json;

std::string_view to_string(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::expert_baseline: return "expert_baseline";
        case StrategyKind::parameter_range: return "parameter_range";
        case StrategyKind::sub_parameter_range: return "sub_parameter_range";
    }
    return "?";
}

StrategyKind strategy_from(std::string_view name) {
    if (name == "expert_baseline") return StrategyKind::expert_baseline;
    if (name == "parameter_range") return StrategyKind::parameter_range;
    if (name == "sub_parameter_range") return StrategyKind::sub_parameter_range;
    throw ValidationError("unknown strategy '" + std::string(name) +
                          "' (expected expert_baseline|parameter_range|sub_parameter_range)");
}

namespace {

const SubRange& bound_sub_range(const SemiConcreteScenario& scn, const OpenParameter& p) {
    if (p.sub_ranges.empty())
        throw ValidationError("parameter '" + p.id + "' has no sub-ranges");
    auto it = scn.sub_range_bindings.find(p.id);
    if (it == scn.sub_range_bindings.end())
        throw ValidationError("parameter '" + p.id + "' has no sub-range binding");
    if (it->second >= p.sub_ranges.size())
        throw ValidationError("parameter '" + p.id + "' is bound to an out-of-range sub-range");
    return p.sub_ranges[it->second];
}

}  // namespace

ConcretizationOutcome concretize(const SemiConcreteScenario& scn, const Strategy& strategy,
                                 const RelevancePredicate& relevance) {
    if (strategy.budget < 1) throw ValidationError("feedback budget must be at least 1");

    ConcretizationOutcome out;
    out.scenario.configuration = scn.configuration;
    out.scenario.provenance.strategy = std::string(to_string(strategy.kind));
    out.scenario.provenance.seed = strategy.seed;

    if (strategy.kind == StrategyKind::expert_baseline) {
        for (const OpenParameter& p : scn.open_parameters)
            out.scenario.values[p.id] = bound_sub_range(scn, p).expert_value;
        out.attempts = 1;
        out.relevant = relevance ? relevance(out.scenario) : true;
        out.scenario.provenance.attempts = out.attempts;
        out.scenario.provenance.relevant = out.relevant;
        return out;
    }

    const int max_attempts = strategy.feedback ? strategy.budget : 1;
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        Rng rng(derive_seed({strategy.seed, seed_tag("concretize"),
                             static_cast<std::uint64_t>(attempt)}));
        out.scenario.values.clear();
        for (const OpenParameter& p : scn.open_parameters) {
            if (strategy.kind == StrategyKind::parameter_range) {
                out.scenario.values[p.id] = rng.next_in(p.lo, p.hi);
            } else {
                const SubRange& sr = bound_sub_range(scn, p);
                out.scenario.values[p.id] = rng.next_in(sr.lo, sr.hi);
            }
        }
        out.attempts = attempt;
        out.relevant = relevance ? relevance(out.scenario) : true;
        if (out.relevant) break;
    }
    out.scenario.provenance.attempts = out.attempts;
    out.scenario.provenance.relevant = out.relevant;
    return out;
}

SuiteConcretization concretize_suite(std::span<const SemiConcreteScenario> suite,
                                     const Strategy& strategy,
                                     const RelevancePredicate& relevance) {
    SuiteConcretization result;
    result.outcomes.reserve(suite.size());
    for (std::size_t i = 0; i < suite.size(); ++i) {
        Strategy sub = strategy;
        sub.seed = derive_seed({strategy.seed, seed_tag("scenario"), i});
        try {
            result.outcomes.push_back(concretize(suite[i], sub, relevance));
        } catch (const ValidationError& e) {
            throw ValidationError("scenario " + std::to_string(i) + ": " + e.what());
        }
        result.total_attempts += result.outcomes.back().attempts;
    }
    return result;
}

std::string serialize_outcomes(const SuiteConcretization& result) {
    json doc;
    json outcomes = json::array();
    for (const auto& o : result.outcomes) {
        json entry;
        json names = json::array();
        for (const auto& n : o.scenario.configuration.selected) names.push_back(n);
        entry["configuration"] = std::move(names);
        entry["values"] = o.scenario.values;
        entry["provenance"] = {{"strategy", o.scenario.provenance.strategy},
                               {"seed", o.scenario.provenance.seed},
                               {"attempts", o.attempts},
                               {"relevant", o.relevant}};
        outcomes.push_back(std::move(entry));
    }
    doc["outcomes"] = std::move(outcomes);
    doc["total_attempts"] = result.total_attempts;
    return doc.dump(2);
}

SuiteConcretization parse_outcomes(const std::string& text) {
    try {
        json doc = json::parse(text);
        SuiteConcretization result;
        result.total_attempts = doc.at("total_attempts").get<long>();
        for (const json& entry : doc.at("outcomes")) {
            ConcretizationOutcome o;
            for (const json& n : entry.at("configuration"))
                o.scenario.configuration.selected.insert(n.get<std::string>());
            for (const auto& [id, v] : entry.at("values").items())
                o.scenario.values[id] = v.get<double>();
            const json& prov = entry.at("provenance");
            o.scenario.provenance.strategy = prov.at("strategy").get<std::string>();
            o.scenario.provenance.seed = prov.at("seed").get<std::uint64_t>();
            o.scenario.provenance.attempts = prov.at("attempts").get<int>();
            o.scenario.provenance.relevant = prov.at("relevant").get<bool>();
            o.attempts = o.scenario.provenance.attempts;
            o.relevant = o.scenario.provenance.relevant;
            result.outcomes.push_back(std::move(o));
        }
        return result;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("outcomes: ") + e.what());
    }
}

}  // namespace scengen
