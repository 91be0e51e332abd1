// Brute-force interaction coverage: computes the set of achievable t-literal
// tuples straight from the enumerated valid configurations, independently of
// the sampler's solver-based tuple filter.

#pragma once

#include <cstddef>
#include <vector>

#include "scengen/feature_model.hpp"
#include "scengen/twise_sampler.hpp"

namespace testsupport {

struct MaskTuple {
    std::vector<std::size_t> features;
    std::vector<bool> polarities;
};

// every combination of t features x polarity pattern that some valid
// configuration realizes
inline std::vector<MaskTuple> achievable_tuples(const scengen::FeatureModel& model, int t,
                                                scengen::PolarityMode mode) {
    using scengen::PolarityMode;
    const auto configs = scengen::enumerate_valid(model, std::size_t{1} << 22);
    std::vector<std::vector<bool>> masks;
    masks.reserve(configs.size());
    for (const auto& c : configs) masks.push_back(scengen::mask_from_configuration(model, c));

    const std::size_t n = model.size();
    std::vector<MaskTuple> out;
    std::vector<std::size_t> combo(static_cast<std::size_t>(t));
    // odometer over strictly increasing index combinations
    for (std::size_t i = 0; i < combo.size(); ++i) combo[i] = i;
    if (combo.size() > n) return out;
    while (true) {
        const std::size_t patterns =
            mode == PolarityMode::positive_only ? 1 : (std::size_t{1} << t);
        for (std::size_t bits = 0; bits < patterns; ++bits) {
            std::vector<bool> pol(combo.size());
            for (std::size_t j = 0; j < combo.size(); ++j)
                pol[j] = mode == PolarityMode::positive_only ? true : !((bits >> j) & 1);
            for (const auto& mask : masks) {
                bool hit = true;
                for (std::size_t j = 0; j < combo.size(); ++j)
                    if (mask[combo[j]] != pol[j]) { hit = false; break; }
                if (hit) {
                    out.push_back({combo, pol});
                    break;
                }
            }
        }
        // advance the combination
        std::size_t k = combo.size();
        while (k > 0 && combo[k - 1] == n - combo.size() + k - 1) --k;
        if (k == 0) break;
        ++combo[k - 1];
        for (std::size_t j = k; j < combo.size(); ++j) combo[j] = combo[j - 1] + 1;
    }
    return out;
}

inline bool suite_covers(const scengen::FeatureModel& model,
                         const std::vector<scengen::Configuration>& suite,
                         const MaskTuple& tuple) {
    for (const auto& cfg : suite) {
        const auto mask = scengen::mask_from_configuration(model, cfg);
        bool hit = true;
        for (std::size_t j = 0; j < tuple.features.size(); ++j)
            if (mask[tuple.features[j]] != tuple.polarities[j]) { hit = false; break; }
        if (hit) return true;
    }
    return false;
}

}  // namespace testsupport
