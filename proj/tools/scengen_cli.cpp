// Command line front end. Exit codes: 0 ok, 2 validation/usage error,
// 1 anything else.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scengen/concretizer.hpp"
#include "scengen/experiment.hpp"
#include "scengen/feature_model.hpp"
#include "scengen/hybrid_model.hpp"
#include "scengen/mutation.hpp"
#include "scengen/report.hpp"
#include "scengen/rng.hpp"
#include "scengen/simulator.hpp"
#include "scengen/twise_sampler.hpp"
#include "scengen/version.hpp"

namespace {

using namespace scengen;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::cout << content << '\n';
    else
        write_file(out_path, content);
}

FeatureModel load_at_level(const std::string& path, const std::string& level_name) {
    FeatureModel logical = load_model(path);
    return derive(logical, abstraction_level_from(level_name));
}

// Relevance check backed by the nominal simulation, as used by the
// feedback loop. Only available when bindings are given.
RelevancePredicate relevance_from(const ParameterBindings& bindings) {
    return [bindings](const ConcreteScenario& scenario) {
        return is_relevant(simulate(build_setup(scenario, bindings), AccParameters{}));
    };
}

void cmd_model_validate(const std::string& model_path) {
    FeatureModel model = load_model(model_path);
    std::cout << "ok: " << model.name() << " (" << model.size() << " features, "
              << model.constraints().size() << " constraints)\n";
}

void cmd_model_stats(const std::string& model_path, const std::string& level_name) {
    FeatureModel model = load_at_level(model_path, level_name);
    std::size_t by_kind[3] = {0, 0, 0};
    std::size_t continuous = 0;
    std::size_t discrete = 0;
    for (const Feature& f : model.features()) {
        ++by_kind[static_cast<int>(f.kind)];
        if (f.parameter) {
            if (f.parameter->type == ParameterType::continuous)
                ++continuous;
            else
                ++discrete;
        }
    }
    std::cout << "name: " << model.name() << '\n'
              << "level: " << level_name << '\n'
              << "hash: " << model_hash(model) << '\n'
              << "features: " << model.size() << " (structure " << by_kind[0] << ", logical "
              << by_kind[1] << ", concrete " << by_kind[2] << ")\n"
              << "parameters: " << continuous << " continuous, " << discrete << " discrete\n"
              << "constraints: " << model.constraints().size() << '\n';
    if (model.size() <= 30) {
        try {
            std::cout << "valid configurations: " << enumerate_valid(model, 2'000'000).size()
                      << '\n';
        } catch (const ValidationError&) {
            std::cout << "valid configurations: not enumerated (too many)\n";
        }
    }
}

void cmd_sample(const std::string& model_path, const std::string& level_name, int t,
                std::uint64_t seed, const std::string& polarity, std::optional<std::size_t> cap,
                const std::string& out_path) {
    FeatureModel model = load_at_level(model_path, level_name);
    SamplingConfig cfg;
    cfg.t = t;
    cfg.seed = seed;
    cfg.polarity_mode = polarity_mode_from(polarity);
    cfg.max_configs = cap;
    std::vector<Configuration> suite = sample(model, cfg);

    SuiteDocument doc;
    doc.model_hash = model_hash(model);
    doc.t = t;
    doc.seed = seed;
    doc.polarity_mode = cfg.polarity_mode;
    doc.configurations = suite;
    emit(out_path, serialize_suite(doc));
    std::cerr << "sampled " << suite.size() << " configurations (t=" << t << ", "
              << polarity << ")\n";
}

void cmd_concretize(const std::string& model_path, const std::string& bindings_path,
                    const std::string& strategy_name, bool feedback, int t, std::uint64_t seed,
                    int budget, const std::string& out_path) {
    Strategy strategy;
    strategy.kind = strategy_from(strategy_name);
    strategy.feedback = feedback;
    strategy.budget = budget;
    strategy.seed = seed;

    // parameter_range draws from full ranges and needs no sub-range choice,
    // so it samples the semi-concrete layer; the other strategies need the
    // concrete layer's sub-range bindings.
    const AbstractionLevel level = strategy.kind == StrategyKind::parameter_range
                                       ? AbstractionLevel::semi_concrete
                                       : AbstractionLevel::concrete;
    FeatureModel logical = load_model(model_path);
    FeatureModel derived = derive(logical, level);

    SamplingConfig cfg;
    cfg.t = t;
    cfg.seed = derive_seed({seed, seed_tag("sample")});
    std::vector<Configuration> suite = sample(derived, cfg);
    std::vector<SemiConcreteScenario> scenarios;
    scenarios.reserve(suite.size());
    for (const Configuration& c : suite) scenarios.push_back(lift(c, derived, level));

    RelevancePredicate relevance;
    if (!bindings_path.empty()) relevance = relevance_from(load_bindings(bindings_path));
    if (feedback && bindings_path.empty())
        throw ValidationError("--feedback needs --bindings for the relevance check");

    SuiteConcretization result = concretize_suite(scenarios, strategy, relevance);
    emit(out_path, serialize_outcomes(result));
    std::size_t relevant = 0;
    for (const auto& o : result.outcomes) relevant += o.relevant ? 1 : 0;
    std::cerr << "concretized " << result.outcomes.size() << " scenarios, " << relevant
              << " relevant, " << result.total_attempts << " draws\n";
}

void cmd_simulate(const std::string& bindings_path, const std::string& scenarios_path, int index,
                  const std::string& out_dir) {
    ParameterBindings bindings = load_bindings(bindings_path);
    SuiteConcretization suite = parse_outcomes(read_file(scenarios_path));
    if (suite.outcomes.empty()) throw ValidationError("no scenarios in '" + scenarios_path + "'");
    if (index >= 0 && static_cast<std::size_t>(index) >= suite.outcomes.size())
        throw ValidationError("scenario index " + std::to_string(index) + " out of range (suite has " +
                              std::to_string(suite.outcomes.size()) + ")");
    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

    const OracleTolerances tol;
    for (std::size_t i = 0; i < suite.outcomes.size(); ++i) {
        if (index >= 0 && static_cast<std::size_t>(index) != i) continue;
        ScenarioSetup setup = build_setup(suite.outcomes[i].scenario, bindings);
        SimulationTrace trace = simulate(setup, AccParameters{});
        OracleVerdicts verdicts = evaluate_oracles(trace, setup, tol);
        std::cout << "scenario " << i << ": relevant=" << (is_relevant(trace) ? "yes" : "no")
                  << ", " << (verdicts.all_passed() ? "pass" : "FAIL") << '\n'
                  << verdicts_to_text(verdicts);
        if (!out_dir.empty()) {
            std::string path = out_dir + "/trace_" + std::to_string(i) + ".csv";
            write_file(path, trace_to_csv(trace));
            std::cout << "trace written to " << path << '\n';
        }
    }
}

void cmd_mutants(std::size_t count, std::uint64_t seed, const std::string& out_path) {
    std::vector<MutantSpec> mutants = generate_mutants(count, seed);
    emit(out_path, serialize_mutants(mutants, seed));
    std::cerr << "generated " << mutants.size() << " of " << mutant_catalog_size()
              << " catalog mutants\n";
}

void cmd_experiment_run(const std::string& plan_path, const std::string& out_dir,
                        std::optional<std::uint64_t> seed_override,
                        std::optional<int> reps_override) {
    ExperimentPlan plan = load_plan(plan_path);
    if (seed_override) plan.master_seed = *seed_override;
    if (reps_override) plan.repetitions = *reps_override;

    ExperimentResult result = run_experiment(plan);
    if (out_dir.empty()) {
        std::cout << serialize_result(result) << '\n';
    } else {
        write_report(result, out_dir);
        std::cout << "report written to " << out_dir << '\n';
    }
    std::cerr << result.cells.size() << " cells, " << result.comparisons.size()
              << " comparisons\n";
}

void cmd_report(const std::string& result_path, const std::string& out_dir, bool hide_low) {
    ExperimentResult result = load_result(result_path);
    ReportOptions options;
    options.boxplot_hide_low_scores = hide_low;
    write_report(result, out_dir, options);
    std::cout << "report written to " << out_dir << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"combinatorial scenario suite generation and mutation analysis"};
    app.set_version_flag("--version", std::string(tool_version));
    app.require_subcommand(1);

    std::string model_path;
    std::string bindings_path;
    std::string level_name = "logical";
    std::string polarity = "both_polarities";
    std::string strategy_name;
    std::string out_path;
    std::string scenarios_path;
    std::string plan_path;
    std::string result_path;
    int t = 2;
    int budget = 50;
    int sim_index = -1;
    bool feedback = false;
    bool hide_low = false;
    std::uint64_t seed = 0;
    std::size_t mutant_count = 50;
    std::optional<std::size_t> max_configs;
    std::optional<std::uint64_t> seed_override;
    std::optional<int> reps_override;

    auto* model_cmd = app.add_subcommand("model", "inspect feature models");
    model_cmd->require_subcommand(1);
    auto* validate_cmd = model_cmd->add_subcommand("validate", "parse and type-check a model");
    validate_cmd->add_option("--model", model_path, "model JSON file")->required();
    validate_cmd->callback([&] { cmd_model_validate(model_path); });

    auto* stats_cmd = model_cmd->add_subcommand("stats", "feature and parameter counts");
    stats_cmd->add_option("--model", model_path, "model JSON file")->required();
    stats_cmd->add_option("--level", level_name, "logical|semi_concrete|concrete");
    stats_cmd->callback([&] { cmd_model_stats(model_path, level_name); });

    auto* sample_cmd = app.add_subcommand("sample", "build a t-wise covering suite");
    sample_cmd->add_option("--model", model_path, "model JSON file")->required();
    sample_cmd->add_option("--t", t, "interaction strength");
    sample_cmd->add_option("--level", level_name, "logical|semi_concrete|concrete");
    sample_cmd->add_option("--seed", seed, "sampler seed");
    sample_cmd->add_option("--polarity", polarity, "positive_only|both_polarities");
    sample_cmd->add_option("--max-configs", max_configs, "fail if the suite would exceed this");
    sample_cmd->add_option("--out", out_path, "suite JSON output (stdout if omitted)");
    sample_cmd->callback(
        [&] { cmd_sample(model_path, level_name, t, seed, polarity, max_configs, out_path); });

    auto* concretize_cmd = app.add_subcommand("concretize", "sample and bind parameter values");
    concretize_cmd->add_option("--model", model_path, "model JSON file")->required();
    concretize_cmd->add_option("--bindings", bindings_path, "simulator bindings JSON file");
    concretize_cmd->add_option("--strategy", strategy_name,
                               "expert_baseline|parameter_range|sub_parameter_range")
        ->required();
    concretize_cmd->add_flag("--feedback", feedback, "redraw irrelevant scenarios");
    concretize_cmd->add_option("--t", t, "interaction strength");
    concretize_cmd->add_option("--seed", seed, "strategy seed");
    concretize_cmd->add_option("--budget", budget, "max draws per scenario with feedback");
    concretize_cmd->add_option("--out", out_path, "outcomes JSON output (stdout if omitted)");
    concretize_cmd->callback([&] {
        cmd_concretize(model_path, bindings_path, strategy_name, feedback, t, seed, budget,
                       out_path);
    });

    auto* simulate_cmd = app.add_subcommand("simulate", "run scenarios against the nominal controller");
    simulate_cmd->add_option("--bindings", bindings_path, "simulator bindings JSON file")->required();
    simulate_cmd->add_option("--scenarios", scenarios_path, "outcomes JSON from concretize")->required();
    simulate_cmd->add_option("--index", sim_index, "run a single scenario");
    simulate_cmd->add_option("--out", out_path, "directory for trace CSVs");
    simulate_cmd->callback([&] { cmd_simulate(bindings_path, scenarios_path, sim_index, out_path); });

    auto* mutants_cmd = app.add_subcommand("mutants", "draw a mutant sample from the catalog");
    mutants_cmd->add_option("-n,--count", mutant_count, "number of mutants");
    mutants_cmd->add_option("--seed", seed, "draw seed");
    mutants_cmd->add_option("--out", out_path, "mutant list JSON output (stdout if omitted)");
    mutants_cmd->callback([&] { cmd_mutants(mutant_count, seed, out_path); });

    auto* experiment_cmd = app.add_subcommand("experiment", "strategy comparison experiments");
    experiment_cmd->require_subcommand(1);
    auto* run_cmd = experiment_cmd->add_subcommand("run", "execute an experiment plan");
    run_cmd->add_option("--plan", plan_path, "experiment plan JSON file")->required();
    run_cmd->add_option("--out", out_path, "report directory (stdout JSON if omitted)");
    run_cmd->add_option("--seed", seed_override, "override the plan's master seed");
    run_cmd->add_option("--reps", reps_override, "override the plan's repetition count");
    run_cmd->callback(
        [&] { cmd_experiment_run(plan_path, out_path, seed_override, reps_override); });

    auto* report_cmd = app.add_subcommand("report", "render a stored experiment result");
    report_cmd->add_option("--result", result_path, "result JSON file")->required();
    report_cmd->add_option("--out", out_path, "report directory")->required();
    report_cmd->add_flag("--hide-low-scores", hide_low, "drop scores below 0.5 from the boxplot");
    report_cmd->callback([&] { cmd_report(result_path, out_path, hide_low); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const scengen::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
