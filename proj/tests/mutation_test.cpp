#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "scengen/mutation.hpp"
#include "scengen/rng.hpp"

#include "support/nominal_scenarios.hpp"

using namespace scengen;
using testsupport::nominal_scenarios;

namespace {

MutantSpec spec(MutantOperator op, const char* site, double magnitude) {
    return {0, op, site, magnitude};
}

// Closing hard on a stopped car three metres ahead; no controller with the
// nominal braking authority avoids contact.
ScenarioSetup doomed_setup() {
    ScenarioSetup s;
    s.ego_v0 = 30;
    s.ego_v_set = 30;
    s.lead_present = true;
    s.lead_gap0 = 3;
    s.lead_v0 = 0;
    return s;
}

}  // namespace

TEST_CASE("the catalog enumerates 68 distinct faults") {
    CHECK(mutant_catalog_size() == 68);
    auto all = generate_mutants(68, 0);
    std::set<std::tuple<MutantOperator, std::string, double>> keys;
    for (const auto& m : all) keys.insert({m.op, m.site, m.magnitude});
    CHECK(keys.size() == 68);
}

TEST_CASE("mutant generation is deterministic and draws without replacement") {
    auto a = generate_mutants(20, 42);
    auto b = generate_mutants(20, 42);
    CHECK(a == b);

    auto c = generate_mutants(20, 43);
    CHECK(a != c);

    std::set<std::tuple<MutantOperator, std::string, double>> keys;
    for (const auto& m : a) keys.insert({m.op, m.site, m.magnitude});
    CHECK(keys.size() == a.size());

    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].id == i);
}

TEST_CASE("mutant count bounds") {
    CHECK_THROWS_AS(generate_mutants(0, 1), ValidationError);
    try {
        generate_mutants(69, 1);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("69") != std::string::npos);
        CHECK(msg.find("68") != std::string::npos);
    }
}

TEST_CASE("each operator edits exactly its target") {
    const AccParameters nominal;

    AccController c = apply_mutant(spec(MutantOperator::gain_scale, "k_gap", 0.5), nominal);
    CHECK(c.params.k_gap == 0.125);
    CHECK(c.params.k_rel == nominal.k_rel);
    CHECK_FALSE(c.stuck_command.has_value());

    c = apply_mutant(spec(MutantOperator::gain_scale, "tau", 0.0), nominal);
    CHECK(c.params.tau == 0.0);

    c = apply_mutant(spec(MutantOperator::constant_shift, "a_max", 0.5), nominal);
    CHECK(c.params.a_max == doctest::Approx(3.75));

    c = apply_mutant(spec(MutantOperator::constant_shift, "a_min", -0.9), nominal);
    CHECK(c.params.a_min == doctest::Approx(-0.6));

    c = apply_mutant(spec(MutantOperator::sign_flip, "rel_term", -1.0), nominal);
    CHECK(c.params.k_rel == -nominal.k_rel);

    c = apply_mutant(spec(MutantOperator::clamp_swap, "a_bounds", 0.0), nominal);
    CHECK(c.params.a_min == nominal.a_max);
    CHECK(c.params.a_max == nominal.a_min);

    c = apply_mutant(spec(MutantOperator::sensor_range_scale, "sensor_range", 0.25), nominal);
    CHECK(c.params.sensor_range == doctest::Approx(37.5));

    c = apply_mutant(spec(MutantOperator::stuck_output, "a_cmd", 0.0), nominal);
    CHECK(c.stuck_command == 0.0);
    c = apply_mutant(spec(MutantOperator::stuck_output, "a_cmd", 1.0), nominal);
    CHECK(c.stuck_command == nominal.a_max);
    c = apply_mutant(spec(MutantOperator::stuck_output, "a_cmd", -1.0), nominal);
    CHECK(c.stuck_command == nominal.a_min);

    c = apply_mutant(spec(MutantOperator::detection_offset, "sensor_range", 0.5), nominal);
    CHECK(c.params.sensor_range == doctest::Approx(75.0));

    CHECK_THROWS_AS(apply_mutant(spec(MutantOperator::gain_scale, "blinker", 1.0), nominal),
                    ValidationError);
}

TEST_CASE("kill matrix separates killing and surviving mutants") {
    // One free-driving test and one following test from the reference set.
    std::vector<ScenarioSetup> suite = {nominal_scenarios()[0], nominal_scenarios()[2]};

    // A dead throttle misses the set speed; a mild sensor trim changes
    // nothing the suite can see.
    std::vector<MutantSpec> mutants = {
        spec(MutantOperator::stuck_output, "a_cmd", 0.0),
        spec(MutantOperator::detection_offset, "sensor_range", 0.25),
    };
    mutants[1].id = 1;

    KillMatrix matrix = run_kill_matrix(suite, mutants, AccParameters{}, OracleTolerances{}, 1);
    CHECK(matrix.mutant_count == 2);
    CHECK(matrix.test_count == 2);
    CHECK(matrix.invalid_tests.empty());
    CHECK(matrix.killed[0][0]);
    CHECK_FALSE(matrix.killed[1][0]);
    CHECK(matrix.killed_mutants() == 1);
    CHECK(matrix.mutation_score == 0.5);
}

TEST_CASE("tests that fail on the nominal controller are excluded") {
    std::vector<ScenarioSetup> suite = {nominal_scenarios()[0], doomed_setup()};
    std::vector<MutantSpec> mutants = {spec(MutantOperator::clamp_swap, "a_bounds", 0.0)};

    KillMatrix matrix = run_kill_matrix(suite, mutants, AccParameters{}, OracleTolerances{}, 1);
    REQUIRE(matrix.invalid_tests.size() == 1);
    CHECK(matrix.invalid_tests[0] == 1);
    for (std::size_t m = 0; m < matrix.killed.size(); ++m) CHECK_FALSE(matrix.killed[m][1]);

    std::vector<ScenarioSetup> all_bad = {doomed_setup(), doomed_setup()};
    CHECK_THROWS_AS(run_kill_matrix(all_bad, mutants, AccParameters{}, OracleTolerances{}, 1),
                    ValidationError);
}

TEST_CASE("empty inputs are rejected") {
    std::vector<ScenarioSetup> suite = {nominal_scenarios()[0]};
    std::vector<MutantSpec> mutants = {spec(MutantOperator::clamp_swap, "a_bounds", 0.0)};
    CHECK_THROWS_AS(
        run_kill_matrix(std::span<const ScenarioSetup>{}, mutants, AccParameters{},
                        OracleTolerances{}, 1),
        ValidationError);
    CHECK_THROWS_AS(
        run_kill_matrix(suite, std::span<const MutantSpec>{}, AccParameters{},
                        OracleTolerances{}, 1),
        ValidationError);
}

TEST_CASE("thread count does not change the matrix") {
    const auto suite = nominal_scenarios();
    const auto mutants = generate_mutants(16, 5);
    KillMatrix serial = run_kill_matrix(suite, mutants, AccParameters{}, OracleTolerances{}, 1);
    KillMatrix parallel = run_kill_matrix(suite, mutants, AccParameters{}, OracleTolerances{}, 8);
    CHECK(serial.killed == parallel.killed);
    CHECK(serial.invalid_tests == parallel.invalid_tests);
    CHECK(serial.mutation_score == parallel.mutation_score);
}

TEST_CASE("dropping tests never raises the score") {
    const auto full = nominal_scenarios();
    const auto mutants = generate_mutants(24, 9);
    KillMatrix full_matrix =
        run_kill_matrix(full, mutants, AccParameters{}, OracleTolerances{}, 0);

    Rng rng(derive_seed({11, seed_tag("subset")}));
    for (int round = 0; round < 10; ++round) {
        std::vector<ScenarioSetup> subset;
        for (const auto& s : full)
            if (rng.next_below(2) == 1) subset.push_back(s);
        if (subset.empty()) subset.push_back(full[0]);
        KillMatrix sub =
            run_kill_matrix(subset, mutants, AccParameters{}, OracleTolerances{}, 0);
        CHECK(sub.mutation_score <= full_matrix.mutation_score);
    }
}

TEST_CASE("bound scenarios run through the same matrix") {
    const char* doc = R"({
        "defaults": {"duration": 40, "dt": 0.02},
        "parameters": {
            "speed": {"field": "ego_v0", "unit": "m/s"},
            "cruise": {"field": "ego_v_set", "unit": "m/s"},
            "gap": {"field": "lead_gap0", "unit": "m"},
            "lead_speed": {"field": "lead_v0", "unit": "m/s"}
        },
        "features": {
            "Lead": [{"field": "lead_present", "value": "true"}]
        }
    })";
    const ParameterBindings bindings = parse_bindings(doc);

    ConcreteScenario scn;
    scn.configuration.selected = {"Lead"};
    scn.values = {{"speed", 30}, {"cruise", 30}, {"gap", 60}, {"lead_speed", 25}};
    std::vector<ConcreteScenario> suite = {scn};

    std::vector<MutantSpec> mutants = {spec(MutantOperator::stuck_output, "a_cmd", 1.0)};
    KillMatrix via_bindings =
        run_kill_matrix(suite, bindings, mutants, AccParameters{}, OracleTolerances{}, 1);

    std::vector<ScenarioSetup> setups = {build_setup(scn, bindings)};
    KillMatrix direct = run_kill_matrix(setups, mutants, AccParameters{}, OracleTolerances{}, 1);
    CHECK(via_bindings.killed == direct.killed);
    CHECK(via_bindings.mutation_score == direct.mutation_score);
}

TEST_CASE("matrix CSV carries one row per mutant plus the score") {
    std::vector<ScenarioSetup> suite = {nominal_scenarios()[0], nominal_scenarios()[5]};
    const auto mutants = generate_mutants(4, 2);
    KillMatrix matrix = run_kill_matrix(suite, mutants, AccParameters{}, OracleTolerances{}, 1);
    const std::string csv = kill_matrix_to_csv(matrix);

    CHECK(csv.rfind("mutant,test_0,test_1,killed_any\n", 0) == 0);
    std::size_t rows = std::count(csv.begin(), csv.end(), '\n');
    CHECK(rows == mutants.size() + 2);
    CHECK(csv.find("score,") != std::string::npos);
}

TEST_CASE("mutant documents list every spec") {
    const auto mutants = generate_mutants(5, 31);
    const std::string text = serialize_mutants(mutants, 31);
    CHECK(text.find("\"seed\": 31") != std::string::npos);
    for (const auto& m : mutants)
        CHECK(text.find('"' + std::string(to_string(m.op)) + '"') != std::string::npos);
    std::size_t entries = 0;
    for (std::size_t pos = text.find("\"id\""); pos != std::string::npos;
         pos = text.find("\"id\"", pos + 1))
        ++entries;
    CHECK(entries == 5);
}

TEST_CASE("operator names are distinct") {
    std::set<std::string> names;
    for (MutantOperator op :
         {MutantOperator::gain_scale, MutantOperator::constant_shift, MutantOperator::sign_flip,
          MutantOperator::clamp_swap, MutantOperator::sensor_range_scale,
          MutantOperator::stuck_output, MutantOperator::detection_offset})
        names.insert(std::string(to_string(op)));
    CHECK(names.size() == 7);
}
