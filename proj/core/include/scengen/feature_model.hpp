#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "scengen/errors.hpp"

namespace scengen {

enum class FeatureKind { structure, logical, concrete };
enum class GroupKind { and_group, or_group, alternative };
enum class ParameterType { continuous, discrete };

std::string_view to_string(FeatureKind k);
std::string_view to_string(GroupKind g);

struct SubRange {
    double lo = 0.0;
    double hi = 0.0;
    double expert_value = 0.0;

    bool operator==(const SubRange&) const = default;
};

struct ParameterSpec {
    std::string id;
    ParameterType type = ParameterType::continuous;
    std::string unit;                  // continuous (and optionally discrete)
    double lo = 0.0;                   // continuous: [lo, hi], lo < hi
    double hi = 0.0;
    std::vector<SubRange> sub_ranges;  // continuous only; ordered, tiling [lo, hi]
    std::vector<std::string> values;   // discrete only; non-empty, distinct
};

struct CrossTreeConstraint {
    enum class Kind { requires_, excludes };
    Kind kind = Kind::requires_;
    std::string lhs;
    std::string rhs;
};

// One node of the feature tree. Nodes live in a flat pre-order vector inside
// FeatureModel; parent/children refer to indices in that vector.
struct Feature {
    std::string name;
    FeatureKind kind = FeatureKind::structure;
    bool optional = false;
    GroupKind group = GroupKind::and_group;  // governs this feature's children
    std::optional<ParameterSpec> parameter;  // logical features only
    std::size_t parent = npos;
    std::vector<std::size_t> children;       // document order

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    bool is_root() const { return parent == npos; }
};

// A selection of feature names. Validity is judged by is_valid().
struct Configuration {
    std::set<std::string, std::less<>> selected;

    bool contains(std::string_view name) const { return selected.find(name) != selected.end(); }
    bool operator==(const Configuration&) const = default;
};

// Immutable after construction; safe for concurrent reads.
class FeatureModel {
public:
    FeatureModel() = default;

    // Validates every type invariant; throws ValidationError naming the
    // offending feature otherwise.
    static FeatureModel build(std::string model_name, std::vector<Feature> preorder_features,
                              std::vector<CrossTreeConstraint> constraints);

    const std::string& name() const { return name_; }
    std::size_t size() const { return features_.size(); }
    const Feature& operator[](std::size_t i) const { return features_[i]; }
    const Feature& root() const { return features_.front(); }
    std::span<const Feature> features() const { return features_; }
    std::span<const CrossTreeConstraint> constraints() const { return constraints_; }

    std::optional<std::size_t> index_of(std::string_view feature_name) const;
    // Throws ValidationError for unknown names.
    std::size_t require_index(std::string_view feature_name) const;
    bool has_feature(std::string_view feature_name) const { return index_of(feature_name).has_value(); }

private:
    std::string name_;
    std::vector<Feature> features_;  // pre-order, [0] is the root
    std::vector<CrossTreeConstraint> constraints_;
    std::unordered_map<std::string, std::size_t> index_;
};

// (feature index, polarity). positive == feature must be selected.
struct IndexLiteral {
    std::size_t feature = 0;
    bool positive = true;
    bool operator==(const IndexLiteral&) const = default;
};

struct NamedLiteral {
    std::string feature;
    bool positive = true;
};

// --- Operations -------------------------------------------------------------

// Parses the JSON model document described in the README. Throws
// ValidationError on schema violations, duplicate names, malformed
// sub-ranges and constraints referencing unknown features.
FeatureModel parse_model(const std::string& document_text);
FeatureModel load_model(const std::string& path);

// Canonical JSON serialization; parse_model(serialize(m)) reproduces m.
std::string serialize(const FeatureModel& model);
void save_model(const FeatureModel& model, const std::string& path);

// FNV-1a over the canonical serialization, hex-encoded. Used to stamp suites
// and experiment results with the model they came from.
std::string model_hash(const FeatureModel& model);

// True iff cfg satisfies the tree semantics (root selected, parents selected,
// and/or/alternative group rules, mandatory children) and every cross-tree
// constraint. Throws ValidationError if cfg names an unknown feature.
bool is_valid(const FeatureModel& model, const Configuration& cfg);

// Brute-force enumeration in deterministic lexicographic order (selection
// bitmask over pre-order features, deselected < selected). Oracle use only:
// throws if the model has more than 30 features or more than cap valid
// configurations exist.
std::vector<Configuration> enumerate_valid(const FeatureModel& model, std::size_t cap);

// True iff some valid configuration selects every positive literal and
// deselects every negative one. Constraint propagation + backtracking;
// agrees with enumerate_valid by construction (tested exhaustively).
bool satisfiable_with(const FeatureModel& model, std::span<const NamedLiteral> literals);

// Propagation/backtracking solver core, shared with the t-wise sampler.
// Deterministic: branches on the lowest unassigned feature index, trying
// "deselected" first.
class TreeSolver {
public:
    explicit TreeSolver(const FeatureModel& model);

    bool satisfiable(std::span<const IndexLiteral> literals) const;
    // Complete assignment extending the literals, or nullopt if unsatisfiable.
    std::optional<std::vector<bool>> solve(std::span<const IndexLiteral> literals) const;
    // Visits every satisfying assignment in lexicographic mask order
    // (deselected sorts before selected). Returning false stops the walk.
    void for_each_solution(const std::function<bool(const std::vector<bool>&)>& visit) const;

    const FeatureModel& model() const { return *model_; }

private:
    enum class Value : std::uint8_t { unknown, selected, deselected };
    bool propagate(std::vector<Value>& a, std::vector<std::size_t>& dirty) const;
    bool search(std::vector<Value>& a) const;

    const FeatureModel* model_;
    std::vector<std::vector<std::size_t>> watch_;  // feature -> constraint ids
};

Configuration configuration_from_mask(const FeatureModel& model, const std::vector<bool>& selected);
std::vector<bool> mask_from_configuration(const FeatureModel& model, const Configuration& cfg);

}  // namespace scengen
