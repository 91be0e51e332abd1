#include "scengen/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "scengen/hybrid_model.hpp"
#include "scengen/rng.hpp"
#include "scengen/simulator.hpp"
#include "scengen/version.hpp"

namespace scengen {

using nlohmann::json;

std::string group_label(StrategyKind strategy, bool feedback) {
    std::string label(to_string(strategy));
    if (feedback && strategy != StrategyKind::expert_baseline) label += "+feedback";
    return label;
}

namespace {

json read_json(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string(what) + " is not valid JSON: " + e.what());
    }
}

template <typename T>
std::vector<T> unique_checked(std::vector<T> v, const char* what) {
    std::vector<T> seen;
    for (const T& item : v) {
        if (std::find(seen.begin(), seen.end(), item) != seen.end())
            throw ValidationError(std::string("plan: duplicate entry in ") + what);
        seen.push_back(item);
    }
    return v;
}

EffectMagnitude magnitude_from(std::string_view name) {
    if (name == "negligible") return EffectMagnitude::negligible;
    if (name == "small") return EffectMagnitude::small;
    if (name == "medium") return EffectMagnitude::medium;
    if (name == "large") return EffectMagnitude::large;
    throw ValidationError("unknown effect magnitude '" + std::string(name) + "'");
}

PValueMethod method_from(std::string_view name) {
    if (name == "exact") return PValueMethod::exact;
    if (name == "normal_approx") return PValueMethod::normal_approx;
    throw ValidationError("unknown p-value method '" + std::string(name) + "'");
}

}  // namespace

namespace {

ExperimentPlan parse_plan_checked(const json& doc);
ExperimentResult parse_result_checked(const json& doc);

}  // namespace

ExperimentPlan parse_plan(const std::string& document_text) {
    const json doc = read_json(document_text, "plan document");
    if (!doc.is_object()) throw ValidationError("plan document must be a JSON object");
    try {
        return parse_plan_checked(doc);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("plan: ") + e.what());
    }
}

namespace {

ExperimentPlan parse_plan_checked(const json& doc) {
    ExperimentPlan plan;
    if (!doc.contains("model") || !doc["model"].is_string())
        throw ValidationError("plan: missing string field 'model'");
    plan.model_path = doc["model"].get<std::string>();
    if (!doc.contains("bindings") || !doc["bindings"].is_string())
        throw ValidationError("plan: missing string field 'bindings'");
    plan.bindings_path = doc["bindings"].get<std::string>();

    if (doc.contains("strategies")) {
        if (!doc["strategies"].is_array())
            throw ValidationError("plan: 'strategies' must be an array");
        plan.strategies.clear();
        for (const auto& s : doc["strategies"])
            plan.strategies.push_back(strategy_from(s.get<std::string>()));
    } else {
        plan.strategies = {StrategyKind::expert_baseline, StrategyKind::parameter_range,
                           StrategyKind::sub_parameter_range};
    }
    if (doc.contains("t_values")) {
        if (!doc["t_values"].is_array()) throw ValidationError("plan: 't_values' must be an array");
        plan.t_values.clear();
        for (const auto& t : doc["t_values"]) {
            if (!t.is_number_integer() || t.get<int>() < 1)
                throw ValidationError("plan: t values must be integers >= 1");
            plan.t_values.push_back(t.get<int>());
        }
    } else {
        plan.t_values = {1, 2};
    }
    if (doc.contains("feedback_modes")) {
        if (!doc["feedback_modes"].is_array())
            throw ValidationError("plan: 'feedback_modes' must be an array");
        plan.feedback_modes.clear();
        for (const auto& f : doc["feedback_modes"]) {
            if (!f.is_boolean()) throw ValidationError("plan: feedback modes must be booleans");
            plan.feedback_modes.push_back(f.get<bool>());
        }
    } else {
        plan.feedback_modes = {false, true};
    }
    if (doc.contains("repetitions")) plan.repetitions = doc["repetitions"].get<int>();
    if (doc.contains("mutant_count")) plan.mutant_count = doc["mutant_count"].get<std::size_t>();
    if (doc.contains("master_seed")) plan.master_seed = doc["master_seed"].get<std::uint64_t>();
    if (doc.contains("polarity_mode"))
        plan.polarity_mode = polarity_mode_from(doc["polarity_mode"].get<std::string>());
    if (doc.contains("worker_threads")) plan.worker_threads = doc["worker_threads"].get<unsigned>();

    if (plan.repetitions < 1) throw ValidationError("plan: repetitions must be at least 1");
    if (plan.strategies.empty()) throw ValidationError("plan: at least one strategy is required");
    if (plan.t_values.empty()) throw ValidationError("plan: at least one t value is required");
    if (plan.feedback_modes.empty())
        throw ValidationError("plan: at least one feedback mode is required");
    plan.strategies = unique_checked(std::move(plan.strategies), "strategies");
    plan.t_values = unique_checked(std::move(plan.t_values), "t_values");
    plan.feedback_modes = unique_checked(std::move(plan.feedback_modes), "feedback_modes");
    return plan;
}

}  // namespace

ExperimentPlan load_plan(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open plan file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_plan(ss.str());
}

std::string serialize_plan(const ExperimentPlan& plan) {
    json doc;
    doc["model"] = plan.model_path;
    doc["bindings"] = plan.bindings_path;
    json strategies = json::array();
    for (auto s : plan.strategies) strategies.push_back(std::string(to_string(s)));
    doc["strategies"] = std::move(strategies);
    doc["t_values"] = plan.t_values;
    json feedback = json::array();
    for (bool f : plan.feedback_modes) feedback.push_back(f);
    doc["feedback_modes"] = std::move(feedback);
    doc["repetitions"] = plan.repetitions;
    doc["mutant_count"] = plan.mutant_count;
    doc["master_seed"] = plan.master_seed;
    doc["polarity_mode"] = std::string(to_string(plan.polarity_mode));
    doc["worker_threads"] = plan.worker_threads;
    return doc.dump(2);
}

ExperimentResult run_experiment(const ExperimentPlan& plan) {
    const FeatureModel logical = load_model(plan.model_path);
    const ParameterBindings bindings = load_bindings(plan.bindings_path);
    const AccParameters nominal;
    const OracleTolerances tolerances;

    ExperimentResult result;
    result.tool_version = std::string(tool_version);
    result.model_hash = model_hash(logical);
    result.master_seed = plan.master_seed;
    result.mutants = generate_mutants(plan.mutant_count, plan.master_seed);

    const RelevancePredicate relevance = [&](const ConcreteScenario& scenario) {
        return is_relevant(simulate(build_setup(scenario, bindings), nominal));
    };

    // one sampled suite per (abstraction level, t), shared by the strategies
    // that operate on that level
    std::map<std::pair<AbstractionLevel, int>, std::vector<SemiConcreteScenario>> suites;
    std::map<AbstractionLevel, FeatureModel> models;
    auto scenarios_for = [&](AbstractionLevel level, int t) -> const std::vector<SemiConcreteScenario>& {
        const auto key = std::make_pair(level, t);
        auto it = suites.find(key);
        if (it != suites.end()) return it->second;
        auto model_it = models.find(level);
        if (model_it == models.end())
            model_it = models.emplace(level, derive(logical, level)).first;
        SamplingConfig cfg;
        cfg.t = t;
        cfg.polarity_mode = plan.polarity_mode;
        cfg.seed = derive_seed({plan.master_seed, seed_tag("sample"),
                                static_cast<std::uint64_t>(level), static_cast<std::uint64_t>(t)});
        std::vector<SemiConcreteScenario> scenarios;
        for (const Configuration& c : sample(model_it->second, cfg))
            scenarios.push_back(lift(c, model_it->second, level));
        return suites.emplace(key, std::move(scenarios)).first->second;
    };

    auto run_cell = [&](StrategyKind kind, int t, bool feedback, int repetition) {
        const AbstractionLevel level = kind == StrategyKind::parameter_range
                                           ? AbstractionLevel::semi_concrete
                                           : AbstractionLevel::concrete;
        CellResult cell;
        cell.strategy = kind;
        cell.t = t;
        cell.feedback = feedback;
        cell.repetition = repetition;
        cell.seed = derive_seed({plan.master_seed, seed_tag("cell"),
                                 static_cast<std::uint64_t>(kind), static_cast<std::uint64_t>(t),
                                 feedback ? 1u : 0u, static_cast<std::uint64_t>(repetition)});
        try {
            const auto& scenarios = scenarios_for(level, t);
            Strategy strategy{kind, feedback, 50, cell.seed};
            const SuiteConcretization sc = concretize_suite(scenarios, strategy, relevance);

            std::vector<ScenarioSetup> setups;
            setups.reserve(sc.outcomes.size());
            for (const auto& o : sc.outcomes) {
                setups.push_back(build_setup(o.scenario, bindings));
                if (o.relevant) ++cell.relevant_count;
            }
            cell.suite_size = sc.outcomes.size();
            cell.resample_attempts = sc.total_attempts;
            cell.simulation_count = sc.total_attempts;  // suite size + resample overhead

            const KillMatrix km = run_kill_matrix(setups, result.mutants, nominal, tolerances,
                                                  plan.worker_threads);
            cell.mutation_score = km.mutation_score;
        } catch (const std::exception& e) {
            throw std::runtime_error("cell (" + group_label(kind, feedback) +
                                     ", t=" + std::to_string(t) +
                                     ", rep=" + std::to_string(repetition) + "): " + e.what());
        }
        result.cells.push_back(cell);
    };

    for (StrategyKind kind : plan.strategies) {
        for (int t : plan.t_values) {
            if (kind == StrategyKind::expert_baseline) {
                // deterministic: a single run per t stands for all repetitions
                run_cell(kind, t, false, 0);
                continue;
            }
            for (bool feedback : plan.feedback_modes)
                for (int rep = 0; rep < plan.repetitions; ++rep) run_cell(kind, t, feedback, rep);
        }
    }

    // pairwise comparisons per t, in canonical group order
    for (int t : plan.t_values) {
        struct Group {
            std::string label;
            std::vector<double> scores;
        };
        std::vector<Group> groups;
        for (StrategyKind kind : {StrategyKind::expert_baseline, StrategyKind::parameter_range,
                                  StrategyKind::sub_parameter_range}) {
            for (bool feedback : {false, true}) {
                if (kind == StrategyKind::expert_baseline && feedback) continue;
                Group g;
                g.label = group_label(kind, feedback);
                for (const CellResult& cell : result.cells)
                    if (cell.strategy == kind && cell.t == t && cell.feedback == feedback)
                        g.scores.push_back(cell.mutation_score);
                if (!g.scores.empty()) groups.push_back(std::move(g));
            }
        }
        for (std::size_t i = 0; i < groups.size(); ++i)
            for (std::size_t j = i + 1; j < groups.size(); ++j)
                result.comparisons.push_back(
                    {groups[i].label, groups[j].label, t,
                     compare_samples(groups[i].scores, groups[j].scores)});
    }
    return result;
}

std::string serialize_result(const ExperimentResult& result) {
    json doc;
    doc["tool_version"] = result.tool_version;
    doc["model_hash"] = result.model_hash;
    doc["master_seed"] = result.master_seed;
    json mutants = json::array();
    for (const auto& m : result.mutants)
        mutants.push_back({{"id", m.id},
                           {"operator", std::string(to_string(m.op))},
                           {"site", m.site},
                           {"magnitude", m.magnitude}});
    doc["mutants"] = std::move(mutants);
    json cells = json::array();
    for (const auto& c : result.cells)
        cells.push_back({{"strategy", std::string(to_string(c.strategy))},
                         {"t", c.t},
                         {"feedback", c.feedback},
                         {"repetition", c.repetition},
                         {"seed", c.seed},
                         {"suite_size", c.suite_size},
                         {"relevant_count", c.relevant_count},
                         {"resample_attempts", c.resample_attempts},
                         {"simulation_count", c.simulation_count},
                         {"mutation_score", c.mutation_score}});
    doc["cells"] = std::move(cells);
    json comparisons = json::array();
    for (const auto& c : result.comparisons)
        comparisons.push_back({{"group_x", c.group_x},
                               {"group_y", c.group_y},
                               {"t", c.t},
                               {"u", c.stats.u_statistic},
                               {"p_value", c.stats.p_value},
                               {"a12", c.stats.a12},
                               {"magnitude", std::string(to_string(c.stats.magnitude))},
                               {"method", std::string(to_string(c.stats.method))}});
    doc["comparisons"] = std::move(comparisons);
    return doc.dump(2);
}

ExperimentResult parse_result(const std::string& document_text) {
    const json doc = read_json(document_text, "result document");
    if (!doc.is_object()) throw ValidationError("result document must be a JSON object");
    try {
        return parse_result_checked(doc);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("result document: ") + e.what());
    }
}

namespace {

ExperimentResult parse_result_checked(const json& doc) {
    ExperimentResult result;
    result.tool_version = doc.at("tool_version").get<std::string>();
    result.model_hash = doc.at("model_hash").get<std::string>();
    result.master_seed = doc.at("master_seed").get<std::uint64_t>();
    for (const auto& m : doc.at("mutants")) {
        MutantSpec spec;
        spec.id = m.at("id").get<std::size_t>();
        const std::string op = m.at("operator").get<std::string>();
        bool found = false;
        for (auto candidate :
             {MutantOperator::gain_scale, MutantOperator::constant_shift, MutantOperator::sign_flip,
              MutantOperator::clamp_swap, MutantOperator::sensor_range_scale,
              MutantOperator::stuck_output, MutantOperator::detection_offset}) {
            if (to_string(candidate) == op) {
                spec.op = candidate;
                found = true;
                break;
            }
        }
        if (!found) throw ValidationError("unknown mutant operator '" + op + "'");
        spec.site = m.at("site").get<std::string>();
        spec.magnitude = m.at("magnitude").get<double>();
        result.mutants.push_back(std::move(spec));
    }
    for (const auto& c : doc.at("cells")) {
        CellResult cell;
        cell.strategy = strategy_from(c.at("strategy").get<std::string>());
        cell.t = c.at("t").get<int>();
        cell.feedback = c.at("feedback").get<bool>();
        cell.repetition = c.at("repetition").get<int>();
        cell.seed = c.at("seed").get<std::uint64_t>();
        cell.suite_size = c.at("suite_size").get<std::size_t>();
        cell.relevant_count = c.at("relevant_count").get<std::size_t>();
        cell.resample_attempts = c.at("resample_attempts").get<long>();
        cell.simulation_count = c.at("simulation_count").get<long>();
        cell.mutation_score = c.at("mutation_score").get<double>();
        result.cells.push_back(cell);
    }
    for (const auto& c : doc.at("comparisons")) {
        PairwiseComparison cmp;
        cmp.group_x = c.at("group_x").get<std::string>();
        cmp.group_y = c.at("group_y").get<std::string>();
        cmp.t = c.at("t").get<int>();
        cmp.stats.u_statistic = c.at("u").get<double>();
        cmp.stats.p_value = c.at("p_value").get<double>();
        cmp.stats.a12 = c.at("a12").get<double>();
        cmp.stats.magnitude = magnitude_from(c.at("magnitude").get<std::string>());
        cmp.stats.method = method_from(c.at("method").get<std::string>());
        result.comparisons.push_back(std::move(cmp));
    }
    return result;
}

}  // namespace

ExperimentResult load_result(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open result file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_result(ss.str());
}

}  // namespace scengen
