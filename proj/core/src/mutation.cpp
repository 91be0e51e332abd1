#include "scengen/mutation.hpp"

#include <atomic>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "scengen/rng.hpp"

namespace scengen {

using nlohmann::json;

std::string_view to_string(MutantOperator op) {
    switch (op) {
        case MutantOperator::gain_scale: return "gain_scale";
        case MutantOperator::constant_shift: return "constant_shift";
        case MutantOperator::sign_flip: return "sign_flip";
        case MutantOperator::clamp_swap: return "clamp_swap";
        case MutantOperator::sensor_range_scale: return "sensor_range_scale";
        case MutantOperator::stuck_output: return "stuck_output";
        case MutantOperator::detection_offset: return "detection_offset";
    }
    return "?";
}

namespace {

// The full (operator, site, magnitude) pool. stuck_output magnitudes are
// tags: 0 sticks at zero, +1 at a_max, -1 at a_min.
const std::vector<MutantSpec>& full_catalog() {
    static const std::vector<MutantSpec> catalog = [] {
        std::vector<MutantSpec> cat;
        auto add = [&](MutantOperator op, const char* site, double magnitude) {
            cat.push_back({cat.size(), op, site, magnitude});
        };
        for (const char* site : {"k_gap", "k_rel", "k_v", "tau"})
            for (double m : {0.0, -1.0, 0.1, 0.5, 2.0, 10.0})
                add(MutantOperator::gain_scale, site, m);
        for (const char* site :
             {"k_gap", "k_rel", "k_v", "tau", "d_min", "a_min", "a_max", "sensor_range"})
            for (double m : {-0.9, -0.5, 0.5, 0.9})
                add(MutantOperator::constant_shift, site, m);
        add(MutantOperator::sign_flip, "rel_term", -1.0);
        add(MutantOperator::clamp_swap, "a_bounds", 0.0);
        for (double m : {0.1, 0.25, 0.5, 2.0})
            add(MutantOperator::sensor_range_scale, "sensor_range", m);
        for (double m : {0.0, 1.0, -1.0}) add(MutantOperator::stuck_output, "a_cmd", m);
        for (double m : {0.25, 0.5, 0.9})
            add(MutantOperator::detection_offset, "sensor_range", m);
        return cat;
    }();
    return catalog;
}

double* field_of(AccParameters& p, const std::string& site) {
    if (site == "k_gap") return &p.k_gap;
    if (site == "k_rel") return &p.k_rel;
    if (site == "k_v") return &p.k_v;
    if (site == "tau") return &p.tau;
    if (site == "d_min") return &p.d_min;
    if (site == "a_min") return &p.a_min;
    if (site == "a_max") return &p.a_max;
    if (site == "sensor_range") return &p.sensor_range;
    throw ValidationError("unknown mutation site '" + site + "'");
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned count = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    pool.reserve(count);
    for (unsigned k = 0; k < count; ++k) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

std::size_t mutant_catalog_size() { return full_catalog().size(); }

std::vector<MutantSpec> generate_mutants(std::size_t count, std::uint64_t seed) {
    const auto& catalog = full_catalog();
    if (count < 1) throw ValidationError("mutant count must be at least 1");
    if (count > catalog.size())
        throw ValidationError("mutant count " + std::to_string(count) +
                              " exceeds the catalog size " + std::to_string(catalog.size()));

    Rng rng(derive_seed({seed, seed_tag("mutants")}));
    std::vector<char> used(catalog.size(), 0);
    std::vector<MutantSpec> out;
    out.reserve(count);
    std::size_t retries = 0;
    while (out.size() < count) {
        const std::size_t idx = rng.next_below(catalog.size());
        if (used[idx]) {
            if (++retries > 1000 * catalog.size())
                throw std::runtime_error("mutant drawing did not terminate");
            continue;
        }
        used[idx] = 1;
        MutantSpec spec = catalog[idx];
        spec.id = out.size();
        out.push_back(std::move(spec));
    }
    return out;
}

AccController apply_mutant(const MutantSpec& spec, const AccParameters& nominal) {
    AccController c{nominal, std::nullopt};
    AccParameters& p = c.params;
    switch (spec.op) {
        case MutantOperator::gain_scale:
            *field_of(p, spec.site) *= spec.magnitude;
            break;
        case MutantOperator::constant_shift:
            *field_of(p, spec.site) *= 1.0 + spec.magnitude;
            break;
        case MutantOperator::sign_flip:
            p.k_rel = -p.k_rel;
            break;
        case MutantOperator::clamp_swap:
            std::swap(p.a_min, p.a_max);
            break;
        case MutantOperator::sensor_range_scale:
            p.sensor_range *= spec.magnitude;
            break;
        case MutantOperator::stuck_output:
            c.stuck_command = spec.magnitude == 0.0
                                  ? 0.0
                                  : (spec.magnitude > 0 ? nominal.a_max : nominal.a_min);
            break;
        case MutantOperator::detection_offset:
            p.sensor_range -= spec.magnitude * nominal.sensor_range;
            break;
    }
    return c;
}

std::string serialize_mutants(std::span<const MutantSpec> mutants, std::uint64_t seed) {
    json doc;
    doc["seed"] = seed;
    json list = json::array();
    for (const auto& m : mutants)
        list.push_back({{"id", m.id},
                        {"operator", std::string(to_string(m.op))},
                        {"site", m.site},
                        {"magnitude", m.magnitude}});
    doc["mutants"] = std::move(list);
    return doc.dump(2);
}

std::size_t KillMatrix::killed_mutants() const {
    std::size_t n = 0;
    for (const auto& row : killed)
        for (bool cell : row)
            if (cell) { ++n; break; }
    return n;
}

KillMatrix run_kill_matrix(std::span<const ScenarioSetup> suite,
                           std::span<const MutantSpec> mutants, const AccParameters& nominal,
                           const OracleTolerances& tolerances, unsigned worker_threads) {
    if (mutants.empty()) throw ValidationError("mutant list is empty");
    if (suite.empty()) throw ValidationError("test suite is empty");

    const std::size_t tests = suite.size();
    std::vector<std::uint8_t> nominal_pass(tests, 0);
    parallel_for(tests, worker_threads, [&](std::size_t s) {
        const auto trace = simulate(suite[s], nominal);
        nominal_pass[s] = evaluate_oracles(trace, suite[s], tolerances).all_passed() ? 1 : 0;
    });

    KillMatrix matrix;
    matrix.mutant_count = mutants.size();
    matrix.test_count = tests;
    std::size_t valid = 0;
    for (std::size_t s = 0; s < tests; ++s) {
        if (nominal_pass[s]) ++valid;
        else matrix.invalid_tests.push_back(s);
    }
    if (valid == 0) throw ValidationError("every test fails on the nominal controller");

    std::vector<std::uint8_t> cells(mutants.size() * tests, 0);
    parallel_for(mutants.size() * tests, worker_threads, [&](std::size_t flat) {
        const std::size_t m = flat / tests;
        const std::size_t s = flat % tests;
        if (!nominal_pass[s]) return;
        const AccController mutant = apply_mutant(mutants[m], nominal);
        const auto trace = simulate(suite[s], mutant);
        cells[flat] = evaluate_oracles(trace, suite[s], tolerances).all_passed() ? 0 : 1;
    });

    matrix.killed.assign(mutants.size(), std::vector<bool>(tests, false));
    for (std::size_t m = 0; m < mutants.size(); ++m)
        for (std::size_t s = 0; s < tests; ++s)
            matrix.killed[m][s] = cells[m * tests + s] != 0;
    matrix.mutation_score =
        static_cast<double>(matrix.killed_mutants()) / static_cast<double>(mutants.size());
    return matrix;
}

KillMatrix run_kill_matrix(std::span<const ConcreteScenario> suite,
                           const ParameterBindings& bindings,
                           std::span<const MutantSpec> mutants, const AccParameters& nominal,
                           const OracleTolerances& tolerances, unsigned worker_threads) {
    std::vector<ScenarioSetup> setups;
    setups.reserve(suite.size());
    for (const auto& scenario : suite) setups.push_back(build_setup(scenario, bindings));
    return run_kill_matrix(setups, mutants, nominal, tolerances, worker_threads);
}

std::string kill_matrix_to_csv(const KillMatrix& matrix) {
    std::string out = "mutant";
    for (std::size_t s = 0; s < matrix.test_count; ++s) out += ",test_" + std::to_string(s);
    out += ",killed_any\n";
    for (std::size_t m = 0; m < matrix.killed.size(); ++m) {
        out += std::to_string(m);
        bool any = false;
        for (std::size_t s = 0; s < matrix.test_count; ++s) {
            out += matrix.killed[m][s] ? ",1" : ",0";
            any = any || matrix.killed[m][s];
        }
        out += any ? ",1\n" : ",0\n";
    }
    out += "score," + std::to_string(matrix.mutation_score) + "\n";
    return out;
}

}  // namespace scengen
