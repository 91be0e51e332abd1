#include "scengen/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "scengen/errors.hpp"

namespace scengen {

std::string_view to_string(EffectMagnitude m) {
    switch (m) {
        case EffectMagnitude::negligible: return "negligible";
        case EffectMagnitude::small: return "small";
        case EffectMagnitude::medium: return "medium";
        case EffectMagnitude::large: return "large";
    }
    return "?";
}

std::string_view to_string(PValueMethod m) {
    return m == PValueMethod::exact ? "exact" : "normal_approx";
}

namespace {

// U of x with ties counted half, by direct pair counting.
double u_statistic(std::span<const double> x, std::span<const double> y) {
    double u = 0;
    for (double xi : x)
        for (double yj : y) {
            if (xi > yj) u += 1.0;
            else if (xi == yj) u += 0.5;
        }
    return u;
}

// Doubled midranks of the pooled sample (integers even under ties), split
// back into the x-part sum. Returns (x rank sum * 2, per-element doubled
// midranks, tie group sizes).
struct PooledRanks {
    std::vector<std::int64_t> doubled_midranks;  // aligned with sorted pool
    std::vector<std::size_t> tie_groups;
    std::int64_t x_sum2 = 0;
};

PooledRanks pooled_ranks(std::span<const double> x, std::span<const double> y) {
    struct Tagged {
        double value;
        bool from_x;
    };
    std::vector<Tagged> pool;
    pool.reserve(x.size() + y.size());
    for (double v : x) pool.push_back({v, true});
    for (double v : y) pool.push_back({v, false});
    std::stable_sort(pool.begin(), pool.end(),
                     [](const Tagged& a, const Tagged& b) { return a.value < b.value; });

    PooledRanks r;
    r.doubled_midranks.resize(pool.size());
    std::size_t i = 0;
    while (i < pool.size()) {
        std::size_t j = i;
        while (j < pool.size() && pool[j].value == pool[i].value) ++j;
        // positions i+1..j (1-based); doubled midrank = first + last
        const std::int64_t doubled = static_cast<std::int64_t>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) {
            r.doubled_midranks[k] = doubled;
            if (pool[k].from_x) r.x_sum2 += doubled;
        }
        r.tie_groups.push_back(j - i);
        i = j;
    }
    return r;
}

// Exact null distribution of the doubled x rank sum: dp[k][s] counts size-k
// subsets of the pool with doubled-rank total s.
double exact_two_sided_p(const PooledRanks& ranks, std::size_t n_x) {
    std::int64_t max_sum = 0;
    for (std::int64_t s : ranks.doubled_midranks) max_sum += s;

    std::vector<std::vector<std::uint64_t>> dp(
        n_x + 1, std::vector<std::uint64_t>(static_cast<std::size_t>(max_sum) + 1, 0));
    dp[0][0] = 1;
    for (std::int64_t score : ranks.doubled_midranks) {
        for (std::size_t k = std::min(n_x, ranks.doubled_midranks.size()); k >= 1; --k) {
            auto& row = dp[k];
            const auto& prev = dp[k - 1];
            for (std::int64_t s = max_sum - score; s >= 0; --s) {
                if (prev[static_cast<std::size_t>(s)])
                    row[static_cast<std::size_t>(s + score)] += prev[static_cast<std::size_t>(s)];
            }
        }
    }

    const auto& dist = dp[n_x];
    std::uint64_t total = 0, le = 0, ge = 0;
    for (std::int64_t s = 0; s <= max_sum; ++s) {
        const std::uint64_t c = dist[static_cast<std::size_t>(s)];
        total += c;
        if (s <= ranks.x_sum2) le += c;
        if (s >= ranks.x_sum2) ge += c;
    }
    const double tail = static_cast<double>(std::min(le, ge)) / static_cast<double>(total);
    return std::min(1.0, 2.0 * tail);
}

double normal_approx_two_sided_p(double u, std::size_t n, std::size_t m,
                                 const std::vector<std::size_t>& tie_groups) {
    const double nd = static_cast<double>(n), md = static_cast<double>(m);
    const double big_n = nd + md;
    double tie_term = 0;
    for (std::size_t t : tie_groups) {
        const double td = static_cast<double>(t);
        tie_term += td * td * td - td;
    }
    const double variance =
        nd * md / 12.0 * ((big_n + 1.0) - tie_term / (big_n * (big_n - 1.0)));
    if (variance <= 0) return 1.0;

    const double mean = nd * md / 2.0;
    const double shift = std::max(0.0, std::fabs(u - mean) - 0.5);  // continuity correction
    const double z = shift / std::sqrt(variance);
    return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

EffectMagnitude magnitude_of(double a12) {
    const double d = std::fabs(a12 - 0.5);
    if (d < 0.06) return EffectMagnitude::negligible;
    if (d <= 0.14) return EffectMagnitude::small;
    if (d <= 0.21) return EffectMagnitude::medium;
    return EffectMagnitude::large;
}

}  // namespace

MannWhitneyResult mann_whitney_u(std::span<const double> x, std::span<const double> y) {
    if (x.empty() || y.empty()) throw ValidationError("samples must be non-empty");

    MannWhitneyResult result;
    result.u = u_statistic(x, y);
    if (x.size() * y.size() <= 400) {
        result.method = PValueMethod::exact;
        result.p_value = mann_whitney_exact_p(x, y);
    } else {
        result.method = PValueMethod::normal_approx;
        result.p_value = mann_whitney_normal_p(x, y);
    }
    return result;
}

double mann_whitney_exact_p(std::span<const double> x, std::span<const double> y) {
    if (x.empty() || y.empty()) throw ValidationError("samples must be non-empty");
    return exact_two_sided_p(pooled_ranks(x, y), x.size());
}

double mann_whitney_normal_p(std::span<const double> x, std::span<const double> y) {
    if (x.empty() || y.empty()) throw ValidationError("samples must be non-empty");
    return normal_approx_two_sided_p(u_statistic(x, y), x.size(), y.size(),
                                     pooled_ranks(x, y).tie_groups);
}

A12Result vargha_delaney_a12(std::span<const double> x, std::span<const double> y) {
    if (x.empty() || y.empty()) throw ValidationError("samples must be non-empty");
    const double a12 =
        u_statistic(x, y) / (static_cast<double>(x.size()) * static_cast<double>(y.size()));
    return {a12, magnitude_of(a12)};
}

ComparisonResult compare_samples(std::span<const double> x, std::span<const double> y) {
    const MannWhitneyResult mw = mann_whitney_u(x, y);
    const A12Result a = vargha_delaney_a12(x, y);
    return {mw.u, mw.p_value, a.a12, a.magnitude, mw.method};
}

}  // namespace scengen
