#include "scengen/twise_sampler.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "scengen/rng.hpp"

namespace scengen {

using nlohmann::json;

std::string_view to_string(PolarityMode mode) {
    return mode == PolarityMode::positive_only ? "positive_only" : "both_polarities";
}

PolarityMode polarity_mode_from(std::string_view name) {
    if (name == "positive_only") return PolarityMode::positive_only;
    if (name == "both_polarities") return PolarityMode::both_polarities;
    throw ValidationError("unknown polarity mode '" + std::string(name) +
                          "' (expected positive_only|both_polarities)");
}

namespace {

using Tuple = std::vector<IndexLiteral>;  // feature indices strictly ascending

bool covers(const std::vector<bool>& mask, const Tuple& tuple) {
    for (const auto& lit : tuple)
        if (mask[lit.feature] != lit.positive) return false;
    return true;
}

bool same_feature_set(const Tuple& a, const Tuple& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].feature != b[i].feature) return false;
    return true;
}

// All satisfiable t-literal interactions, ordered by ascending feature-index
// combination, then polarity pattern (all-positive first).
std::vector<Tuple> valid_tuples(const FeatureModel& model, const TreeSolver& solver, int t,
                                PolarityMode mode) {
    if (t < 1) throw ValidationError("interaction strength t must be at least 1");
    if (static_cast<std::size_t>(t) > model.size())
        throw ValidationError("interaction strength t exceeds the feature count");

    std::vector<Tuple> out;
    const std::size_t n = model.size();
    const std::uint32_t patterns =
        mode == PolarityMode::positive_only ? 1u : (1u << static_cast<unsigned>(t));

    std::vector<std::size_t> combo(static_cast<std::size_t>(t));
    for (std::size_t i = 0; i < combo.size(); ++i) combo[i] = i;

    auto emit = [&]() {
        for (std::uint32_t p = 0; p < patterns; ++p) {
            Tuple tuple(combo.size());
            for (std::size_t j = 0; j < combo.size(); ++j)
                tuple[j] = {combo[j], (p & (1u << j)) == 0};
            if (solver.satisfiable(tuple)) out.push_back(std::move(tuple));
        }
    };

    // standard combination walker
    while (true) {
        emit();
        std::size_t k = combo.size();
        while (k > 0 && combo[k - 1] == n - combo.size() + (k - 1)) --k;
        if (k == 0) break;
        ++combo[k - 1];
        for (std::size_t j = k; j < combo.size(); ++j) combo[j] = combo[j - 1] + 1;
    }
    return out;
}

std::string tuple_text(const FeatureModel& model, const Tuple& tuple) {
    std::string s;
    for (const auto& lit : tuple) {
        if (!s.empty()) s += ' ';
        s += lit.positive ? '+' : '-';
        s += model[lit.feature].name;
    }
    return s;
}

}  // namespace

std::vector<Configuration> sample(const FeatureModel& model, const SamplingConfig& cfg) {
    TreeSolver solver(model);
    if (!solver.satisfiable({}))
        throw ValidationError("model '" + model.name() + "' has no valid configuration");

    const std::vector<Tuple> targets = valid_tuples(model, solver, cfg.t, cfg.polarity_mode);
    std::vector<char> covered(targets.size(), 0);
    std::size_t remaining = targets.size();

    Rng rng(derive_seed({cfg.seed, seed_tag("twise_sampler")}));
    std::vector<Configuration> suite;

    while (remaining > 0) {
        if (cfg.max_configs && suite.size() >= *cfg.max_configs) {
            std::string msg = "configuration cap " + std::to_string(*cfg.max_configs) +
                              " reached with " + std::to_string(remaining) +
                              " interactions uncovered:";
            std::size_t listed = 0;
            for (std::size_t i = 0; i < targets.size() && listed < 5; ++i)
                if (!covered[i]) msg += " [" + tuple_text(model, targets[i]) + "]", ++listed;
            if (remaining > listed) msg += " ...";
            throw ValidationError(msg);
        }

        // seed tuple: first uncovered feature combination, RNG tie-break
        // between its remaining polarity patterns
        std::size_t first = 0;
        while (covered[first]) ++first;
        std::vector<std::size_t> group;
        for (std::size_t i = first; i < targets.size() && same_feature_set(targets[i], targets[first]); ++i)
            if (!covered[i]) group.push_back(i);
        const std::size_t chosen = group[rng.next_below(group.size())];

        std::vector<IndexLiteral> partial = targets[chosen];
        std::vector<std::int8_t> polarity_of(model.size(), -1);
        for (const auto& lit : partial) polarity_of[lit.feature] = lit.positive ? 1 : 0;

        for (std::size_t i = 0; i < targets.size(); ++i) {
            if (covered[i] || i == chosen) continue;
            bool conflict = false;
            bool adds_anything = false;
            for (const auto& lit : targets[i]) {
                const std::int8_t have = polarity_of[lit.feature];
                if (have == -1) adds_anything = true;
                else if (have != (lit.positive ? 1 : 0)) { conflict = true; break; }
            }
            if (conflict || !adds_anything) continue;

            std::vector<IndexLiteral> candidate = partial;
            for (const auto& lit : targets[i])
                if (polarity_of[lit.feature] == -1) candidate.push_back(lit);
            if (!solver.satisfiable(candidate)) continue;
            partial = std::move(candidate);
            for (const auto& lit : targets[i]) polarity_of[lit.feature] = lit.positive ? 1 : 0;
        }

        const auto mask = solver.solve(partial);
        if (!mask) throw std::runtime_error("internal error: satisfiable partial failed to complete");
        for (std::size_t i = 0; i < targets.size(); ++i) {
            if (!covered[i] && covers(*mask, targets[i])) {
                covered[i] = 1;
                --remaining;
            }
        }
        suite.push_back(configuration_from_mask(model, *mask));
    }

    if (suite.empty()) suite.push_back(configuration_from_mask(model, *solver.solve({})));
    return suite;
}

CoverageReport measure_coverage(const FeatureModel& model, std::span<const Configuration> suite,
                                int t, PolarityMode mode) {
    TreeSolver solver(model);
    std::vector<std::vector<bool>> masks;
    masks.reserve(suite.size());
    for (std::size_t i = 0; i < suite.size(); ++i) {
        if (!is_valid(model, suite[i]))
            throw ValidationError("configuration " + std::to_string(i) + " in the suite is invalid");
        masks.push_back(mask_from_configuration(model, suite[i]));
    }

    const std::vector<Tuple> targets = valid_tuples(model, solver, t, mode);
    CoverageReport report;
    report.total_valid_tuples = targets.size();
    for (const auto& tuple : targets) {
        const bool hit = std::any_of(masks.begin(), masks.end(),
                                     [&](const std::vector<bool>& m) { return covers(m, tuple); });
        if (hit) {
            ++report.covered_tuples;
        } else {
            InteractionTuple named;
            for (const auto& lit : tuple)
                named.literals.push_back({model[lit.feature].name, lit.positive});
            report.uncovered.push_back(std::move(named));
        }
    }
    report.ratio = report.total_valid_tuples == 0
                       ? 1.0
                       : static_cast<double>(report.covered_tuples) /
                             static_cast<double>(report.total_valid_tuples);
    return report;
}

std::string serialize_suite(const SuiteDocument& doc) {
    json j;
    j["model_hash"] = doc.model_hash;
    j["t"] = doc.t;
    j["seed"] = doc.seed;
    j["polarity_mode"] = std::string(to_string(doc.polarity_mode));
    json configs = json::array();
    for (const auto& c : doc.configurations) {
        json names = json::array();
        for (const auto& n : c.selected) names.push_back(n);
        configs.push_back(std::move(names));
    }
    j["configurations"] = std::move(configs);
    return j.dump(2);
}

SuiteDocument parse_suite(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("suite document is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("suite document must be a JSON object");

    SuiteDocument doc;
    if (!j.contains("model_hash") || !j["model_hash"].is_string())
        throw ValidationError("suite document: missing string field 'model_hash'");
    doc.model_hash = j["model_hash"].get<std::string>();
    if (!j.contains("t") || !j["t"].is_number_integer())
        throw ValidationError("suite document: missing integer field 't'");
    doc.t = j["t"].get<int>();
    if (!j.contains("seed") || !j["seed"].is_number_unsigned())
        throw ValidationError("suite document: missing unsigned field 'seed'");
    doc.seed = j["seed"].get<std::uint64_t>();
    if (!j.contains("polarity_mode") || !j["polarity_mode"].is_string())
        throw ValidationError("suite document: missing string field 'polarity_mode'");
    doc.polarity_mode = polarity_mode_from(j["polarity_mode"].get<std::string>());
    if (!j.contains("configurations") || !j["configurations"].is_array())
        throw ValidationError("suite document: missing array field 'configurations'");
    for (const auto& c : j["configurations"]) {
        if (!c.is_array()) throw ValidationError("suite configurations must be arrays of names");
        Configuration cfg;
        for (const auto& n : c) {
            if (!n.is_string()) throw ValidationError("feature names must be strings");
            cfg.selected.insert(n.get<std::string>());
        }
        doc.configurations.push_back(std::move(cfg));
    }
    return doc;
}

}  // namespace scengen
