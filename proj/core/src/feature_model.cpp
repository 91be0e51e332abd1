#include "scengen/feature_model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "scengen/rng.hpp"

namespace scengen {

using nlohmann::json;

std::string_view to_string(FeatureKind k) {
    switch (k) {
        case FeatureKind::structure: return "structure";
        case FeatureKind::logical: return "logical";
        case FeatureKind::concrete: return "concrete";
    }
    return "?";
}

std::string_view to_string(GroupKind g) {
    switch (g) {
        case GroupKind::and_group: return "and";
        case GroupKind::or_group: return "or";
        case GroupKind::alternative: return "alternative";
    }
    return "?";
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ValidationError(msg); }

[[noreturn]] void fail_feature(const std::string& feature, const std::string& msg) {
    throw ValidationError("feature '" + feature + "': " + msg);
}

FeatureKind parse_kind(const std::string& s, const std::string& feature) {
    if (s == "structure") return FeatureKind::structure;
    if (s == "logical") return FeatureKind::logical;
    if (s == "concrete") return FeatureKind::concrete;
    fail_feature(feature, "unknown kind '" + s + "' (expected structure|logical|concrete)");
}

GroupKind parse_group(const std::string& s, const std::string& feature) {
    if (s == "and") return GroupKind::and_group;
    if (s == "or") return GroupKind::or_group;
    if (s == "alternative") return GroupKind::alternative;
    fail_feature(feature, "unknown group '" + s + "' (expected and|or|alternative)");
}

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                         const std::string& context) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (auto k : allowed)
            if (it.key() == k) { known = true; break; }
        if (!known) fail(context + ": unknown field '" + it.key() + "'");
    }
}

double require_number(const json& obj, const char* field, const std::string& context) {
    auto it = obj.find(field);
    if (it == obj.end()) fail(context + ": missing field '" + std::string(field) + "'");
    if (!it->is_number()) fail(context + ": field '" + std::string(field) + "' must be a number");
    return it->get<double>();
}

std::string require_string(const json& obj, const char* field, const std::string& context) {
    auto it = obj.find(field);
    if (it == obj.end()) fail(context + ": missing field '" + std::string(field) + "'");
    if (!it->is_string()) fail(context + ": field '" + std::string(field) + "' must be a string");
    return it->get<std::string>();
}

ParameterSpec parse_parameter(const json& p, const std::string& feature) {
    const std::string ctx = "feature '" + feature + "', parameter";
    if (!p.is_object()) fail(ctx + " must be an object");
    reject_unknown_keys(p, {"id", "type", "unit", "range", "sub_ranges", "values"}, ctx);

    ParameterSpec spec;
    spec.id = require_string(p, "id", ctx);
    const std::string type = require_string(p, "type", ctx);
    if (type == "continuous") {
        spec.type = ParameterType::continuous;
        spec.unit = require_string(p, "unit", ctx);
        auto range = p.find("range");
        if (range == p.end()) fail(ctx + ": missing field 'range'");
        if (!range->is_array() || range->size() != 2 || !(*range)[0].is_number() || !(*range)[1].is_number())
            fail(ctx + ": field 'range' must be [lo, hi]");
        spec.lo = (*range)[0].get<double>();
        spec.hi = (*range)[1].get<double>();
        if (p.contains("values")) fail(ctx + ": continuous parameters take no 'values'");
        if (auto subs = p.find("sub_ranges"); subs != p.end()) {
            if (!subs->is_array()) fail(ctx + ": field 'sub_ranges' must be an array");
            for (const auto& s : *subs) {
                if (!s.is_object()) fail(ctx + ": sub-range entries must be objects");
                reject_unknown_keys(s, {"lo", "hi", "expert_value"}, ctx + " sub-range");
                SubRange sr;
                sr.lo = require_number(s, "lo", ctx + " sub-range");
                sr.hi = require_number(s, "hi", ctx + " sub-range");
                sr.expert_value = require_number(s, "expert_value", ctx + " sub-range");
                spec.sub_ranges.push_back(sr);
            }
        }
    } else if (type == "discrete") {
        spec.type = ParameterType::discrete;
        if (auto unit = p.find("unit"); unit != p.end()) {
            if (!unit->is_string()) fail(ctx + ": field 'unit' must be a string");
            spec.unit = unit->get<std::string>();
        }
        if (p.contains("range") || p.contains("sub_ranges"))
            fail(ctx + ": discrete parameters take no 'range' or 'sub_ranges'");
        auto values = p.find("values");
        if (values == p.end()) fail(ctx + ": missing field 'values'");
        if (!values->is_array()) fail(ctx + ": field 'values' must be an array");
        for (const auto& v : *values) {
            if (!v.is_string()) fail(ctx + ": discrete values must be strings");
            spec.values.push_back(v.get<std::string>());
        }
    } else {
        fail(ctx + ": unknown type '" + type + "' (expected continuous|discrete)");
    }
    return spec;
}

void parse_feature_tree(const json& node, std::size_t parent, std::vector<Feature>& out) {
    if (!node.is_object()) fail("feature entries must be objects");
    std::string name;
    if (auto it = node.find("name"); it != node.end() && it->is_string()) name = it->get<std::string>();
    else fail("feature object missing string field 'name'");

    reject_unknown_keys(node, {"name", "kind", "optional", "group", "children", "parameter"},
                        "feature '" + name + "'");

    Feature f;
    f.name = name;
    f.parent = parent;
    f.kind = parse_kind(require_string(node, "kind", "feature '" + name + "'"), name);
    if (auto it = node.find("optional"); it != node.end()) {
        if (!it->is_boolean()) fail_feature(name, "field 'optional' must be a boolean");
        f.optional = it->get<bool>();
    }
    if (auto it = node.find("group"); it != node.end()) {
        if (!it->is_string()) fail_feature(name, "field 'group' must be a string");
        f.group = parse_group(it->get<std::string>(), name);
    }
    if (auto it = node.find("parameter"); it != node.end()) f.parameter = parse_parameter(*it, name);

    const std::size_t self = out.size();
    out.push_back(std::move(f));

    if (auto it = node.find("children"); it != node.end()) {
        if (!it->is_array()) fail_feature(name, "field 'children' must be an array");
        for (const auto& child : *it) {
            out[self].children.push_back(out.size());
            parse_feature_tree(child, self, out);
        }
    }
}

void validate_parameter(const ParameterSpec& spec, const std::string& feature) {
    if (spec.type == ParameterType::continuous) {
        if (!(spec.lo < spec.hi)) fail_feature(feature, "parameter range must satisfy lo < hi");
        if (!spec.sub_ranges.empty()) {
            const auto& subs = spec.sub_ranges;
            if (subs.front().lo != spec.lo || subs.back().hi != spec.hi)
                fail_feature(feature, "sub-ranges do not tile parameter range");
            for (std::size_t i = 0; i < subs.size(); ++i) {
                if (!(subs[i].lo < subs[i].hi))
                    fail_feature(feature, "sub-range lo must be less than hi");
                if (i > 0 && subs[i].lo != subs[i - 1].hi)
                    fail_feature(feature, "sub-ranges do not tile parameter range");
                if (subs[i].expert_value < subs[i].lo || subs[i].expert_value > subs[i].hi)
                    fail_feature(feature, "expert value outside its sub-range");
            }
        }
    } else {
        if (spec.values.empty()) fail_feature(feature, "discrete parameter needs at least one value");
        std::set<std::string> seen(spec.values.begin(), spec.values.end());
        if (seen.size() != spec.values.size())
            fail_feature(feature, "discrete values must be distinct");
    }
}

}  // namespace

FeatureModel FeatureModel::build(std::string model_name, std::vector<Feature> preorder_features,
                                 std::vector<CrossTreeConstraint> constraints) {
    if (preorder_features.empty()) fail("model must contain a root feature");
    if (!preorder_features.front().is_root()) fail("first feature must be the root");

    FeatureModel m;
    m.name_ = std::move(model_name);
    m.features_ = std::move(preorder_features);
    m.constraints_ = std::move(constraints);

    for (std::size_t i = 0; i < m.features_.size(); ++i) {
        const Feature& f = m.features_[i];
        if (i > 0 && (f.parent >= m.features_.size() || f.parent == i))
            fail_feature(f.name, "invalid parent link");
        if (!m.index_.emplace(f.name, i).second) fail_feature(f.name, "duplicate feature name");
        for (std::size_t c : f.children) {
            if (c >= m.features_.size() || m.features_[c].parent != i)
                fail_feature(f.name, "invalid child link");
        }
        if ((f.group == GroupKind::or_group || f.group == GroupKind::alternative) &&
            !f.children.empty() && f.children.size() < 2)
            fail_feature(f.name, std::string(to_string(f.group)) + " group requires at least 2 children");
        if (f.kind == FeatureKind::concrete && !f.children.empty())
            fail_feature(f.name, "concrete features must be leaves");
        if (f.parameter && f.kind != FeatureKind::logical)
            fail_feature(f.name, "only logical features may carry a parameter");
        if (f.parameter) validate_parameter(*f.parameter, f.name);
    }

    for (const auto& c : m.constraints_) {
        if (c.lhs == c.rhs) fail("constraint lhs and rhs must differ ('" + c.lhs + "')");
        if (!m.has_feature(c.lhs)) fail("constraint references unknown feature '" + c.lhs + "'");
        if (!m.has_feature(c.rhs)) fail("constraint references unknown feature '" + c.rhs + "'");
    }
    return m;
}

std::optional<std::size_t> FeatureModel::index_of(std::string_view feature_name) const {
    auto it = index_.find(std::string(feature_name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t FeatureModel::require_index(std::string_view feature_name) const {
    auto idx = index_of(feature_name);
    if (!idx) fail("unknown feature '" + std::string(feature_name) + "'");
    return *idx;
}

FeatureModel parse_model(const std::string& document_text) {
    json doc;
    try {
        doc = json::parse(document_text);
    } catch (const json::parse_error& e) {
        fail(std::string("document is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) fail("model document must be a JSON object");
    reject_unknown_keys(doc, {"name", "root", "constraints", "description"}, "model document");

    const std::string name = require_string(doc, "name", "model document");
    auto root = doc.find("root");
    if (root == doc.end()) fail("model document: missing field 'root'");

    std::vector<Feature> features;
    parse_feature_tree(*root, Feature::npos, features);

    std::vector<CrossTreeConstraint> constraints;
    if (auto it = doc.find("constraints"); it != doc.end()) {
        if (!it->is_array()) fail("model document: field 'constraints' must be an array");
        for (const auto& c : *it) {
            if (!c.is_object()) fail("constraint entries must be objects");
            reject_unknown_keys(c, {"kind", "lhs", "rhs"}, "constraint");
            CrossTreeConstraint ct;
            const std::string kind = require_string(c, "kind", "constraint");
            if (kind == "requires") ct.kind = CrossTreeConstraint::Kind::requires_;
            else if (kind == "excludes") ct.kind = CrossTreeConstraint::Kind::excludes;
            else fail("constraint: unknown kind '" + kind + "' (expected requires|excludes)");
            ct.lhs = require_string(c, "lhs", "constraint");
            ct.rhs = require_string(c, "rhs", "constraint");
            constraints.push_back(std::move(ct));
        }
    }
    return FeatureModel::build(name, std::move(features), std::move(constraints));
}

FeatureModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

namespace {

json parameter_to_json(const ParameterSpec& p) {
    json j;
    j["id"] = p.id;
    if (p.type == ParameterType::continuous) {
        j["type"] = "continuous";
        j["unit"] = p.unit;
        j["range"] = {p.lo, p.hi};
        if (!p.sub_ranges.empty()) {
            json subs = json::array();
            for (const auto& s : p.sub_ranges)
                subs.push_back({{"lo", s.lo}, {"hi", s.hi}, {"expert_value", s.expert_value}});
            j["sub_ranges"] = std::move(subs);
        }
    } else {
        j["type"] = "discrete";
        if (!p.unit.empty()) j["unit"] = p.unit;
        j["values"] = p.values;
    }
    return j;
}

json feature_to_json(const FeatureModel& m, std::size_t idx) {
    const Feature& f = m[idx];
    json j;
    j["name"] = f.name;
    j["kind"] = std::string(to_string(f.kind));
    if (f.optional) j["optional"] = true;
    if (!f.children.empty()) {
        if (f.group != GroupKind::and_group) j["group"] = std::string(to_string(f.group));
        json children = json::array();
        for (std::size_t c : f.children) children.push_back(feature_to_json(m, c));
        j["children"] = std::move(children);
    }
    if (f.parameter) j["parameter"] = parameter_to_json(*f.parameter);
    return j;
}

}  // namespace

std::string serialize(const FeatureModel& model) {
    json doc;
    doc["name"] = model.name();
    doc["root"] = feature_to_json(model, 0);
    json constraints = json::array();
    for (const auto& c : model.constraints()) {
        constraints.push_back(
            {{"kind", c.kind == CrossTreeConstraint::Kind::requires_ ? "requires" : "excludes"},
             {"lhs", c.lhs},
             {"rhs", c.rhs}});
    }
    doc["constraints"] = std::move(constraints);
    return doc.dump(2);
}

void save_model(const FeatureModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file '" + path + "'");
    out << serialize(model) << '\n';
}

std::string model_hash(const FeatureModel& model) {
    const std::uint64_t h = fnv1a64(serialize(model));
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

bool is_valid(const FeatureModel& model, const Configuration& cfg) {
    std::vector<bool> sel(model.size(), false);
    for (const auto& name : cfg.selected) sel[model.require_index(name)] = true;

    if (!sel[0]) return false;  // root must be selected
    for (std::size_t i = 1; i < model.size(); ++i)
        if (sel[i] && !sel[model[i].parent]) return false;

    for (std::size_t i = 0; i < model.size(); ++i) {
        const Feature& f = model[i];
        if (!sel[i] || f.children.empty()) continue;
        std::size_t selected_children = 0;
        for (std::size_t c : f.children) {
            if (sel[c]) ++selected_children;
            else if (f.group == GroupKind::and_group && !model[c].optional) return false;
        }
        if (f.group == GroupKind::alternative && selected_children != 1) return false;
        if (f.group == GroupKind::or_group && selected_children == 0) return false;
    }

    for (const auto& c : model.constraints()) {
        const bool l = sel[model.require_index(c.lhs)];
        const bool r = sel[model.require_index(c.rhs)];
        if (c.kind == CrossTreeConstraint::Kind::requires_ && l && !r) return false;
        if (c.kind == CrossTreeConstraint::Kind::excludes && l && r) return false;
    }
    return true;
}

// --- TreeSolver ---------------------------------------------------------------

TreeSolver::TreeSolver(const FeatureModel& model) : model_(&model) {
    watch_.resize(model.size());
    for (std::size_t ci = 0; ci < model.constraints().size(); ++ci) {
        const auto& c = model.constraints()[ci];
        watch_[model.require_index(c.lhs)].push_back(ci);
        watch_[model.require_index(c.rhs)].push_back(ci);
    }
}

// Fixpoint propagation of tree and constraint rules. Returns false on conflict.
bool TreeSolver::propagate(std::vector<Value>& a, std::vector<std::size_t>&) const {
    const FeatureModel& m = *model_;
    auto set = [&](std::size_t i, Value v, bool& changed, bool& conflict) {
        if (a[i] == v) return;
        if (a[i] != Value::unknown) { conflict = true; return; }
        a[i] = v;
        changed = true;
    };

    bool changed = true;
    bool conflict = false;
    if (a[0] == Value::deselected) return false;
    a[0] = Value::selected;

    while (changed && !conflict) {
        changed = false;
        for (std::size_t i = 0; i < m.size() && !conflict; ++i) {
            const Feature& f = m[i];
            if (i > 0) {
                if (a[i] == Value::selected) set(f.parent, Value::selected, changed, conflict);
                if (a[f.parent] == Value::deselected) set(i, Value::deselected, changed, conflict);
            }
            if (conflict || f.children.empty()) continue;

            std::size_t n_sel = 0, n_desel = 0;
            std::size_t last_open = Feature::npos;
            for (std::size_t c : f.children) {
                if (a[c] == Value::selected) ++n_sel;
                else if (a[c] == Value::deselected) ++n_desel;
                else last_open = c;
            }
            const std::size_t n = f.children.size();

            switch (f.group) {
                case GroupKind::and_group:
                    for (std::size_t c : f.children) {
                        if (m[c].optional) continue;
                        if (a[i] == Value::selected) set(c, Value::selected, changed, conflict);
                        if (a[c] == Value::deselected) set(i, Value::deselected, changed, conflict);
                        if (conflict) break;
                    }
                    break;
                case GroupKind::alternative:
                    if (n_sel > 1) { conflict = true; break; }
                    if (n_sel == 1) {
                        if (a[i] == Value::selected)
                            for (std::size_t c : f.children)
                                if (a[c] != Value::selected) set(c, Value::deselected, changed, conflict);
                    }
                    if (a[i] == Value::selected && n_sel == 0) {
                        if (n_desel == n) { conflict = true; break; }
                        if (n_desel == n - 1) set(last_open, Value::selected, changed, conflict);
                    }
                    if (n_desel == n) set(i, Value::deselected, changed, conflict);
                    break;
                case GroupKind::or_group:
                    if (a[i] == Value::selected && n_sel == 0) {
                        if (n_desel == n) { conflict = true; break; }
                        if (n_desel == n - 1) set(last_open, Value::selected, changed, conflict);
                    }
                    if (n_desel == n) set(i, Value::deselected, changed, conflict);
                    break;
            }
        }
        for (std::size_t ci = 0; ci < m.constraints().size() && !conflict; ++ci) {
            const auto& c = m.constraints()[ci];
            const std::size_t l = m.require_index(c.lhs);
            const std::size_t r = m.require_index(c.rhs);
            if (c.kind == CrossTreeConstraint::Kind::requires_) {
                if (a[l] == Value::selected) set(r, Value::selected, changed, conflict);
                if (a[r] == Value::deselected) set(l, Value::deselected, changed, conflict);
            } else {
                if (a[l] == Value::selected) set(r, Value::deselected, changed, conflict);
                if (a[r] == Value::selected) set(l, Value::deselected, changed, conflict);
            }
        }
    }
    return !conflict;
}

bool TreeSolver::search(std::vector<Value>& a) const {
    std::vector<std::size_t> dirty;
    if (!propagate(a, dirty)) return false;
    std::size_t branch = Feature::npos;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] == Value::unknown) { branch = i; break; }
    if (branch == Feature::npos) return true;

    // deterministic value order: deselected first
    for (Value v : {Value::deselected, Value::selected}) {
        std::vector<Value> copy = a;
        copy[branch] = v;
        if (search(copy)) {
            a = std::move(copy);
            return true;
        }
    }
    return false;
}

bool TreeSolver::satisfiable(std::span<const IndexLiteral> literals) const {
    return solve(literals).has_value();
}

std::optional<std::vector<bool>> TreeSolver::solve(std::span<const IndexLiteral> literals) const {
    std::vector<Value> a(model_->size(), Value::unknown);
    for (const auto& lit : literals) {
        if (lit.feature >= model_->size()) fail("unknown feature index in literal");
        const Value v = lit.positive ? Value::selected : Value::deselected;
        if (a[lit.feature] != Value::unknown && a[lit.feature] != v) return std::nullopt;
        a[lit.feature] = v;
    }
    if (!search(a)) return std::nullopt;
    std::vector<bool> mask(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) mask[i] = (a[i] == Value::selected);
    return mask;
}

void TreeSolver::for_each_solution(
    const std::function<bool(const std::vector<bool>&)>& visit) const {
    // Exhaustive variant of search(): branch deselected-first on the lowest
    // unknown index, so assignments surface in lexicographic mask order.
    struct Walker {
        const TreeSolver& solver;
        const std::function<bool(const std::vector<bool>&)>& visit;
        bool stopped = false;

        void walk(std::vector<Value> a) {
            if (stopped) return;
            std::vector<std::size_t> dirty;
            if (!solver.propagate(a, dirty)) return;
            std::size_t branch = Feature::npos;
            for (std::size_t i = 0; i < a.size(); ++i)
                if (a[i] == Value::unknown) { branch = i; break; }
            if (branch == Feature::npos) {
                std::vector<bool> mask(a.size());
                for (std::size_t i = 0; i < a.size(); ++i)
                    mask[i] = (a[i] == Value::selected);
                if (!visit(mask)) stopped = true;
                return;
            }
            for (Value v : {Value::deselected, Value::selected}) {
                std::vector<Value> copy = a;
                copy[branch] = v;
                walk(std::move(copy));
                if (stopped) return;
            }
        }
    };

    Walker w{*this, visit};
    w.walk(std::vector<Value>(model_->size(), Value::unknown));
}

bool satisfiable_with(const FeatureModel& model, std::span<const NamedLiteral> literals) {
    std::vector<IndexLiteral> lits;
    lits.reserve(literals.size());
    for (const auto& l : literals) lits.push_back({model.require_index(l.feature), l.positive});
    return TreeSolver(model).satisfiable(lits);
}

std::vector<Configuration> enumerate_valid(const FeatureModel& model, std::size_t cap) {
    if (model.size() > 30) fail("model too large for enumeration (more than 30 features)");

    std::vector<Configuration> out;
    bool overflow = false;
    TreeSolver(model).for_each_solution([&](const std::vector<bool>& mask) {
        if (out.size() >= cap) {
            overflow = true;
            return false;
        }
        out.push_back(configuration_from_mask(model, mask));
        return true;
    });
    if (overflow)
        fail("enumeration cap exceeded (more than " + std::to_string(cap) +
             " valid configurations)");
    return out;
}

Configuration configuration_from_mask(const FeatureModel& model, const std::vector<bool>& selected) {
    Configuration cfg;
    for (std::size_t i = 0; i < model.size(); ++i)
        if (selected[i]) cfg.selected.insert(model[i].name);
    return cfg;
}

std::vector<bool> mask_from_configuration(const FeatureModel& model, const Configuration& cfg) {
    std::vector<bool> mask(model.size(), false);
    for (const auto& name : cfg.selected) mask[model.require_index(name)] = true;
    return mask;
}

}  // namespace scengen
