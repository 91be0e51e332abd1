#include "scengen/hybrid_model.hpp"

#include <set>

namespace scengen {

std::string_view to_string(AbstractionLevel level) {
    switch (level) {
        case AbstractionLevel::logical: return "logical";
        case AbstractionLevel::semi_concrete: return "semi_concrete";
        case AbstractionLevel::concrete: return "concrete";
    }
    return "?";
}

AbstractionLevel abstraction_level_from(std::string_view name) {
    if (name == "logical") return AbstractionLevel::logical;
    if (name == "semi_concrete") return AbstractionLevel::semi_concrete;
    if (name == "concrete") return AbstractionLevel::concrete;
    throw ValidationError("unknown abstraction level '" + std::string(name) +
                          "' (expected logical|semi_concrete|concrete)");
}

namespace {

// Rebuilds the tree in pre-order, appending expanded concrete children behind
// each parameter-carrying feature.
struct Expander {
    const FeatureModel& src;
    bool expand_continuous;
    std::vector<Feature> out;

    void copy(std::size_t i, std::size_t new_parent) {
        Feature f = src[i];
        f.parent = new_parent;
        f.children.clear();
        const std::size_t self = out.size();
        out.push_back(std::move(f));

        const Feature& orig = src[i];
        const bool expand =
            orig.parameter && (orig.parameter->type == ParameterType::discrete ||
                               (expand_continuous && orig.parameter->type == ParameterType::continuous));
        if (expand && !orig.children.empty())
            throw ValidationError("feature '" + orig.name +
                                  "': cannot expand a parameter on a feature with children");

        for (std::size_t c : orig.children) {
            out[self].children.push_back(out.size());
            copy(c, self);
        }
        if (!expand) return;

        const ParameterSpec& p = *orig.parameter;
        std::vector<std::string> names;
        if (p.type == ParameterType::discrete) {
            for (const auto& v : p.values) names.push_back(p.id + "_" + v);
        } else {
            if (p.sub_ranges.empty())
                throw ValidationError("feature '" + orig.name +
                                      "': continuous parameter lacks sub-ranges");
            for (std::size_t k = 0; k < p.sub_ranges.size(); ++k)
                names.push_back(p.id + "_sub" + std::to_string(k));
        }
        // a single expansion is a mandatory child, not a 1-ary alternative
        out[self].group = names.size() >= 2 ? GroupKind::alternative : GroupKind::and_group;
        for (auto& name : names) {
            Feature child;
            child.name = std::move(name);
            child.kind = FeatureKind::concrete;
            child.parent = self;
            out[self].children.push_back(out.size());
            out.push_back(std::move(child));
        }
    }
};

FeatureModel expand(const FeatureModel& logical, bool expand_continuous) {
    for (const Feature& f : logical.features())
        if (f.kind == FeatureKind::concrete)
            throw ValidationError("feature '" + f.name +
                                  "': model already has concrete features; derive from the "
                                  "logical model");
    Expander e{logical, expand_continuous, {}};
    e.copy(0, Feature::npos);
    std::vector<CrossTreeConstraint> constraints(logical.constraints().begin(),
                                                 logical.constraints().end());
    return FeatureModel::build(logical.name(), std::move(e.out), std::move(constraints));
}

}  // namespace

FeatureModel derive_semi_concrete(const FeatureModel& logical) { return expand(logical, false); }

FeatureModel derive_concrete(const FeatureModel& logical) { return expand(logical, true); }

FeatureModel derive(const FeatureModel& logical, AbstractionLevel level) {
    switch (level) {
        case AbstractionLevel::logical: return logical;
        case AbstractionLevel::semi_concrete: return derive_semi_concrete(logical);
        case AbstractionLevel::concrete: return derive_concrete(logical);
    }
    throw ValidationError("unknown abstraction level");
}

Configuration project(const FeatureModel& onto, const Configuration& cfg) {
    Configuration result;
    for (const auto& name : cfg.selected)
        if (onto.has_feature(name)) result.selected.insert(name);
    return result;
}

SemiConcreteScenario lift(const Configuration& cfg, const FeatureModel& model,
                          AbstractionLevel level) {
    if (!is_valid(model, cfg))
        throw ValidationError("configuration is not valid for model '" + model.name() + "'");

    SemiConcreteScenario scn;
    scn.configuration = cfg;

    std::set<std::string> seen_ids;
    for (std::size_t i = 0; i < model.size(); ++i) {
        const Feature& f = model[i];
        if (!cfg.contains(f.name)) continue;
        if (!f.parameter || f.parameter->type != ParameterType::continuous) continue;
        const ParameterSpec& p = *f.parameter;
        if (!seen_ids.insert(p.id).second)
            throw ValidationError("duplicate open parameter id '" + p.id + "'");
        scn.open_parameters.push_back({p.id, p.lo, p.hi, p.unit, p.sub_ranges});

        if (level != AbstractionLevel::concrete) continue;
        if (f.children.size() != p.sub_ranges.size())
            throw ValidationError("feature '" + f.name +
                                  "': configuration level is concrete but the parameter is "
                                  "not expanded into sub-range children");
        for (std::size_t k = 0; k < f.children.size(); ++k) {
            if (cfg.contains(model[f.children[k]].name)) {
                scn.sub_range_bindings[p.id] = k;
                break;
            }
        }
    }
    return scn;
}

}  // namespace scengen
