#pragma once

#include <span>
#include <string_view>

namespace scengen {

enum class EffectMagnitude { negligible, small, medium, large };
enum class PValueMethod { exact, normal_approx };

std::string_view to_string(EffectMagnitude m);
std::string_view to_string(PValueMethod m);

struct MannWhitneyResult {
    double u = 0;        // U of the first sample, ties counted half
    double p_value = 1;  // two-sided
    PValueMethod method = PValueMethod::exact;
};

// Exact tie-aware permutation distribution when |x|*|y| <= 400, otherwise
// normal approximation with tie and continuity correction.
MannWhitneyResult mann_whitney_u(std::span<const double> x, std::span<const double> y);

// The two p-value methods individually, for cross-checking.
double mann_whitney_exact_p(std::span<const double> x, std::span<const double> y);
double mann_whitney_normal_p(std::span<const double> x, std::span<const double> y);

struct A12Result {
    double a12 = 0.5;
    EffectMagnitude magnitude = EffectMagnitude::negligible;
};

A12Result vargha_delaney_a12(std::span<const double> x, std::span<const double> y);

struct ComparisonResult {
    double u_statistic = 0;
    double p_value = 1;
    double a12 = 0.5;
    EffectMagnitude magnitude = EffectMagnitude::negligible;
    PValueMethod method = PValueMethod::exact;
};

ComparisonResult compare_samples(std::span<const double> x, std::span<const double> y);

}  // namespace scengen
