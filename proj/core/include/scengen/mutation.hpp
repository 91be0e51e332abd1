#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scengen/simulator.hpp"

namespace scengen {

enum class MutantOperator {
    gain_scale,
    constant_shift,
    sign_flip,
    clamp_swap,
    sensor_range_scale,
    stuck_output,
    detection_offset,
};

std::string_view to_string(MutantOperator op);

struct MutantSpec {
    std::size_t id = 0;
    MutantOperator op = MutantOperator::gain_scale;
    std::string site;      // parameter field or controller term
    double magnitude = 0;

    bool operator==(const MutantSpec&) const = default;
};

// Number of distinct (operator, site, magnitude) combinations available.
std::size_t mutant_catalog_size();

// n distinct specs drawn uniformly from the catalog; deterministic per seed.
// Throws ValidationError when n exceeds the catalog size.
std::vector<MutantSpec> generate_mutants(std::size_t count, std::uint64_t seed);

AccController apply_mutant(const MutantSpec& spec, const AccParameters& nominal);

std::string serialize_mutants(std::span<const MutantSpec> mutants, std::uint64_t seed);

struct KillMatrix {
    std::vector<std::vector<bool>> killed;   // [mutant][test]
    std::vector<std::size_t> invalid_tests;  // failed on nominal, excluded from cells
    std::size_t mutant_count = 0;
    std::size_t test_count = 0;
    double mutation_score = 0;

    std::size_t killed_mutants() const;
};

// Cell (m, s) is killed iff test s passes every oracle on the nominal
// controller and fails at least one on mutant m. Score = killed/all mutants.
KillMatrix run_kill_matrix(std::span<const ScenarioSetup> suite,
                           std::span<const MutantSpec> mutants, const AccParameters& nominal,
                           const OracleTolerances& tolerances, unsigned worker_threads = 0);

KillMatrix run_kill_matrix(std::span<const ConcreteScenario> suite,
                           const ParameterBindings& bindings,
                           std::span<const MutantSpec> mutants, const AccParameters& nominal,
                           const OracleTolerances& tolerances, unsigned worker_threads = 0);

std::string kill_matrix_to_csv(const KillMatrix& matrix);

}  // namespace scengen
