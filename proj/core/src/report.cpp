#include "scengen/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <vector>

namespace scengen {

namespace {

std::string fmt(double v, const char* spec = "%.6f") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

struct ScoreGroup {
    int t = 0;
    std::string label;
    std::vector<double> scores;  // sorted
};

std::vector<ScoreGroup> collect_groups(const ExperimentResult& result) {
    std::set<int> ts;
    for (const auto& c : result.cells) ts.insert(c.t);

    std::vector<ScoreGroup> groups;
    for (int t : ts) {
        for (StrategyKind kind : {StrategyKind::expert_baseline, StrategyKind::parameter_range,
                                  StrategyKind::sub_parameter_range}) {
            for (bool feedback : {false, true}) {
                if (kind == StrategyKind::expert_baseline && feedback) continue;
                ScoreGroup g;
                g.t = t;
                g.label = group_label(kind, feedback);
                for (const auto& c : result.cells)
                    if (c.strategy == kind && c.t == t && c.feedback == feedback)
                        g.scores.push_back(c.mutation_score);
                if (g.scores.empty()) continue;
                std::sort(g.scores.begin(), g.scores.end());
                groups.push_back(std::move(g));
            }
        }
    }
    return groups;
}

double median_of(std::span<const double> sorted) {
    const std::size_t n = sorted.size();
    return n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

// Tukey hinges: medians of the lower/upper half, middle element excluded
// when the count is odd.
void quartiles(std::span<const double> sorted, double& q1, double& q2, double& q3) {
    const std::size_t n = sorted.size();
    q2 = median_of(sorted);
    if (n == 1) {
        q1 = q3 = sorted[0];
        return;
    }
    const std::size_t half = n / 2;
    q1 = median_of(sorted.subspan(0, half));
    q3 = median_of(sorted.subspan(n - half, half));
}

}  // namespace

std::string result_to_csv(const ExperimentResult& result) {
    std::string out =
        "strategy,t,feedback,repetition,seed,suite_size,relevant_count,"
        "resample_attempts,simulation_count,mutation_score\n";
    for (const auto& c : result.cells) {
        out += std::string(to_string(c.strategy)) + ',' + std::to_string(c.t) + ',' +
               (c.feedback ? "1," : "0,") + std::to_string(c.repetition) + ',' +
               std::to_string(c.seed) + ',' + std::to_string(c.suite_size) + ',' +
               std::to_string(c.relevant_count) + ',' + std::to_string(c.resample_attempts) +
               ',' + std::to_string(c.simulation_count) + ',' + fmt(c.mutation_score) + '\n';
    }
    return out;
}

std::string result_to_markdown(const ExperimentResult& result) {
    std::string md = "# Scenario suite effectiveness\n\n";
    md += "- tool version: " + result.tool_version + "\n";
    md += "- model hash: " + result.model_hash + "\n";
    md += "- master seed: " + std::to_string(result.master_seed) + "\n";
    md += "- mutants: " + std::to_string(result.mutants.size()) + "\n\n";

    md += "## Mutation scores\n\n";
    md += "| t | group | n | median | mean | min | max |\n";
    md += "|---|-------|---|--------|------|-----|-----|\n";
    for (const auto& g : collect_groups(result)) {
        double mean = 0;
        for (double s : g.scores) mean += s;
        mean /= static_cast<double>(g.scores.size());
        md += "| " + std::to_string(g.t) + " | " + g.label + " | " +
              std::to_string(g.scores.size()) + " | " + fmt(median_of(g.scores), "%.3f") +
              " | " + fmt(mean, "%.3f") + " | " + fmt(g.scores.front(), "%.3f") + " | " +
              fmt(g.scores.back(), "%.3f") + " |\n";
    }

    md += "\n## Pairwise comparisons\n\n";
    md += "| t | group A | group B | U | p-value | A12 | magnitude | method |\n";
    md += "|---|---------|---------|---|---------|-----|-----------|--------|\n";
    for (const auto& c : result.comparisons) {
        md += "| " + std::to_string(c.t) + " | " + c.group_x + " | " + c.group_y + " | " +
              fmt(c.stats.u_statistic, "%.1f") + " | " + fmt(c.stats.p_value, "%.4g") + " | " +
              fmt(c.stats.a12, "%.3f") + " | " + std::string(to_string(c.stats.magnitude)) +
              " | " + std::string(to_string(c.stats.method)) + " |\n";
    }
    return md;
}

std::string result_to_svg_boxplot(const ExperimentResult& result, const ReportOptions& options) {
    std::vector<ScoreGroup> groups = collect_groups(result);
    if (options.boxplot_hide_low_scores) {
        for (auto& g : groups) {
            std::erase_if(g.scores, [](double s) { return s < 0.5; });
        }
        std::erase_if(groups, [](const ScoreGroup& g) { return g.scores.empty(); });
    }

    const double margin_left = 56, margin_top = 30, plot_h = 280;
    const double box_w = 34, gap = 30;
    const double width = margin_left + static_cast<double>(groups.size()) * (box_w + gap) + 30;
    const double height = margin_top + plot_h + 96;
    auto y_of = [&](double score) { return margin_top + (1.0 - score) * plot_h; };

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width, "%.0f") +
                      "\" height=\"" + fmt(height, "%.0f") + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fmt(margin_left, "%.0f") + "\" y=\"18\" font-size=\"13\">mutation score";
    if (options.boxplot_hide_low_scores) svg += " (scores below 0.5 hidden)";
    svg += "</text>\n";

    for (double tick : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const double y = y_of(tick);
        svg += "<line x1=\"" + fmt(margin_left - 4, "%.1f") + "\" y1=\"" + fmt(y, "%.1f") +
               "\" x2=\"" + fmt(width - 20, "%.1f") + "\" y2=\"" + fmt(y, "%.1f") +
               "\" stroke=\"#ddd\"/>\n";
        svg += "<text x=\"8\" y=\"" + fmt(y + 4, "%.1f") + "\" font-size=\"11\">" +
               fmt(tick, "%.2f") + "</text>\n";
    }

    for (std::size_t i = 0; i < groups.size(); ++i) {
        const auto& g = groups[i];
        const double x = margin_left + static_cast<double>(i) * (box_w + gap);
        const double cx = x + box_w / 2;
        double q1, q2, q3;
        quartiles(g.scores, q1, q2, q3);
        const double lo = g.scores.front(), hi = g.scores.back();
        const char* fill = g.t == 1 ? "#9ecae1" : "#fdae6b";

        svg += "<line x1=\"" + fmt(cx, "%.1f") + "\" y1=\"" + fmt(y_of(lo), "%.1f") + "\" x2=\"" +
               fmt(cx, "%.1f") + "\" y2=\"" + fmt(y_of(hi), "%.1f") + "\" stroke=\"black\"/>\n";
        svg += "<rect x=\"" + fmt(x, "%.1f") + "\" y=\"" + fmt(y_of(q3), "%.1f") + "\" width=\"" +
               fmt(box_w, "%.1f") + "\" height=\"" + fmt(std::max(1.0, y_of(q1) - y_of(q3)), "%.1f") +
               "\" fill=\"" + fill + "\" stroke=\"black\"/>\n";
        svg += "<line x1=\"" + fmt(x, "%.1f") + "\" y1=\"" + fmt(y_of(q2), "%.1f") + "\" x2=\"" +
               fmt(x + box_w, "%.1f") + "\" y2=\"" + fmt(y_of(q2), "%.1f") +
               "\" stroke=\"black\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + fmt(cx, "%.1f") + "\" y=\"" + fmt(margin_top + plot_h + 14, "%.1f") +
               "\" font-size=\"10\" transform=\"rotate(40 " + fmt(cx, "%.1f") + " " +
               fmt(margin_top + plot_h + 14, "%.1f") + ")\">t=" + std::to_string(g.t) + " " +
               g.label + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

void write_report(const ExperimentResult& result, const std::string& out_dir,
                  const ReportOptions& options) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec && !fs::is_directory(out_dir))
        throw std::runtime_error("cannot create report directory '" + out_dir + "'");

    auto write_file = [&](const char* name, const std::string& content) {
        const fs::path path = fs::path(out_dir) / name;
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
        out << content;
    };
    write_file("scores.csv", result_to_csv(result));
    write_file("summary.md", result_to_markdown(result));
    write_file("boxplot.svg", result_to_svg_boxplot(result, options));
    write_file("result.json", serialize_result(result));
}

}  // namespace scengen
