#pragma once

#include <string>

#include "scengen/experiment.hpp"

namespace scengen {

struct ReportOptions {
    // Drops scores below 0.5 from the boxplot drawing only; statistics and
    // CSV always use the full data.
    bool boxplot_hide_low_scores = false;
};

std::string result_to_csv(const ExperimentResult& result);
std::string result_to_markdown(const ExperimentResult& result);
std::string result_to_svg_boxplot(const ExperimentResult& result, const ReportOptions& options = {});

// Writes scores.csv, summary.md, boxplot.svg, result.json into out_dir.
void write_report(const ExperimentResult& result, const std::string& out_dir,
                  const ReportOptions& options = {});

}  // namespace scengen
