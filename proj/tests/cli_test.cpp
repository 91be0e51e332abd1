#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string cli = SCENGEN_CLI_PATH;
const std::string model = SCENGEN_MODELS_DIR "/acc_scenarios.json";
const std::string bindings = SCENGEN_MODELS_DIR "/acc_bindings.json";

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "scengen_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run(const std::string& args, std::string* output = nullptr) {
    const fs::path log = work_dir() / "last_output.txt";
    const std::string cmd = cli + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    if (output) {
        std::ifstream in(log);
        std::stringstream ss;
        ss << in.rdbuf();
        *output = ss.str();
    }
    if (status < 0) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST_CASE("model validate reports the feature and constraint counts") {
    std::string out;
    CHECK(run("model validate --model " + model, &out) == 0);
    CHECK(out.find("ok:") != std::string::npos);
    CHECK(out.find("features") != std::string::npos);
}

TEST_CASE("model stats prints the hash and counts") {
    std::string out;
    CHECK(run("model stats --model " + model, &out) == 0);
    CHECK(out.find("hash") != std::string::npos);
    CHECK(out.find("constraints") != std::string::npos);
}

TEST_CASE("exit codes separate usage, validation, and runtime failures") {
    std::string out;
    CHECK(run("model validate --model /nonexistent.json", &out) == 1);

    const fs::path broken = work_dir() / "broken.json";
    write_file(broken, "{\"name\": 42}");
    CHECK(run("model validate --model " + quoted(broken), &out) == 2);

    CHECK(run("model validate", &out) == 2);          // missing --model
    CHECK(run("frobnicate", &out) == 2);              // unknown subcommand
    CHECK(run("sample --model " + model + " --t 0", &out) == 2);
    CHECK(run("", &out) == 2);                        // no subcommand at all
    CHECK(run("--help", &out) == 0);
}

TEST_CASE("sample writes a suite document") {
    const fs::path suite = work_dir() / "suite.json";
    std::string out;
    CHECK(run("sample --model " + model + " --t 1 --seed 9 --out " + quoted(suite), &out) == 0);
    CHECK(fs::exists(suite));
    CHECK(fs::file_size(suite) > 0);

    // same seed, same document
    const fs::path again = work_dir() / "suite_again.json";
    CHECK(run("sample --model " + model + " --t 1 --seed 9 --out " + quoted(again), &out) == 0);
    std::ifstream a(suite), b(again);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
}

TEST_CASE("concretize, simulate, and mutants chain together") {
    const fs::path outcomes = work_dir() / "outcomes.json";
    std::string out;
    CHECK(run("concretize --model " + model + " --strategy expert_baseline --t 1 --seed 4 --out " +
                  quoted(outcomes),
              &out) == 0);
    CHECK(fs::exists(outcomes));

    CHECK(run("simulate --scenarios " + quoted(outcomes) + " --bindings " + bindings, &out) == 0);
    CHECK(out.find("collision_free") != std::string::npos);

    const fs::path mutants = work_dir() / "mutants.json";
    CHECK(run("mutants --count 10 --seed 3 --out " + quoted(mutants), &out) == 0);
    CHECK(fs::exists(mutants));
    CHECK(run("mutants --count 999 --seed 3", &out) == 2);
}

TEST_CASE("feedback concretization needs bindings for the relevance check") {
    std::string out;
    CHECK(run("concretize --model " + model +
                  " --strategy parameter_range --feedback --t 1 --seed 4",
              &out) == 2);
    CHECK(run("concretize --model " + model + " --strategy parameter_range --feedback --t 1" +
                  " --seed 4 --bindings " + bindings,
              &out) == 0);
}

TEST_CASE("experiment run and report work from a plan file") {
    const fs::path plan = work_dir() / "plan.json";
    write_file(plan, std::string("{\n") + "  \"model\": \"" + model + "\",\n" +
                         "  \"bindings\": \"" + bindings + "\",\n" +
                         "  \"t_values\": [1],\n  \"feedback_modes\": [false],\n" +
                         "  \"repetitions\": 2,\n  \"mutant_count\": 5,\n" +
                         "  \"master_seed\": 11\n}\n");

    const fs::path run_dir = work_dir() / "run";
    std::string out;
    CHECK(run("experiment run --plan " + quoted(plan) + " --out " + quoted(run_dir), &out) == 0);
    for (const char* name : {"scores.csv", "summary.md", "boxplot.svg", "result.json"}) {
        CAPTURE(name);
        CHECK(fs::exists(run_dir / name));
    }

    const fs::path report_dir = work_dir() / "report";
    CHECK(run("report --result " + quoted(run_dir / "result.json") + " --out " +
                  quoted(report_dir) + " --hide-low-scores",
              &out) == 0);
    CHECK(fs::exists(report_dir / "boxplot.svg"));

    CHECK(run("experiment run --plan /nonexistent_plan.json", &out) == 1);
    const fs::path bad_plan = work_dir() / "bad_plan.json";
    write_file(bad_plan, "{\"model\": 1}");
    CHECK(run("experiment run --plan " + quoted(bad_plan), &out) == 2);
}
