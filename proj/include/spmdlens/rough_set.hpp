#pragma once

#include "spmdlens/clustering.hpp"
#include "spmdlens/internal.hpp"
#include "spmdlens/profile.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace spmdlens {

/// Bit i set means attribute i (0-based, rendered as "a{i+1}").
using AttributeSet = std::uint32_t;

constexpr std::size_t kMaxAttributes = 26;

struct DecisionEntry {
    std::uint32_t id = 0;
    std::vector<int> values;
    int decision = 0;

    bool operator==(const DecisionEntry&) const = default;
};

struct DecisionTable {
    std::vector<std::string> attribute_names;
    std::vector<DecisionEntry> entries;
    /// Optional display labels: value_labels[a][v] names value v of attribute a.
    std::vector<std::vector<std::string>> value_labels;
    std::vector<std::string> decision_labels;

    std::size_t attribute_count() const { return attribute_names.size(); }
    /// Throws ValidationError on arity mismatch, negative labels or too many attributes.
    void validate() const;
    bool operator==(const DecisionTable&) const = default;
};

/// The five root-cause attributes, in column order.
std::span<const MetricKind> cause_attributes();
/// Human-readable cause for attribute index 0..4, e.g. "L2 cache miss rate".
std::string_view cause_name(std::size_t attribute);

struct DiscernibilityCell {
    enum class Kind { Zero, Conflict, Attributes };
    Kind kind = Kind::Zero;
    AttributeSet attributes = 0;

    bool operator==(const DiscernibilityCell&) const = default;
};

/// Upper triangle of the pairwise matrix; at(i, j) and at(j, i) are the same cell.
class DiscernibilityMatrix {
public:
    DiscernibilityMatrix() = default;
    DiscernibilityMatrix(std::size_t size, std::size_t attribute_count);

    std::size_t size() const { return size_; }
    std::size_t attribute_count() const { return attribute_count_; }
    const DiscernibilityCell& at(std::size_t i, std::size_t j) const;
    DiscernibilityCell& at(std::size_t i, std::size_t j);

    bool operator==(const DiscernibilityMatrix&) const = default;

private:
    std::size_t offset(std::size_t i, std::size_t j) const;

    std::size_t size_ = 0;
    std::size_t attribute_count_ = 0;
    std::vector<DiscernibilityCell> cells_;
};

/// Cell i<j: Zero for equal decisions, Conflict for equal attribute rows with
/// different decisions, otherwise the set of attributes that differ.
DiscernibilityMatrix build_discernibility(const DecisionTable& table);

struct CoreResult {
    /// Tied alternatives, ascending by bit pattern.
    std::vector<AttributeSet> cores;
    /// Attributes of all singleton cells.
    AttributeSet singleton_core = 0;
    /// Cells disjoint from the singleton core after absorption.
    std::vector<AttributeSet> clauses;
    std::size_t conflicts = 0;

    AttributeSet core_union() const;
    bool operator==(const CoreResult&) const = default;
};

/// Singleton core, absorbed clause list, then DNF expansion; winners have the
/// fewest attributes and, among those, the most expansion terms containing
/// them. Throws AnalysisError when the matrix has no attribute cell.
CoreResult extract_core(const DiscernibilityMatrix& matrix);

/// One entry per process rank; attribute values are canonical cluster indices
/// of the attribute's vectors restricted to `regions`, the decision likewise
/// for CPU time. Throws AnalysisError for an empty region set or m < 2.
DecisionTable external_decision_table(const Profile& profile, std::span<const RegionId> regions,
                                      DensityParams params = {});

/// One entry per region; an attribute is 1 when its per-region average falls
/// in the High or VeryHigh severity category, and the decision is 1 for
/// critical code regions.
DecisionTable internal_decision_table(const Profile& profile, const InternalResult& internal);

enum class CauseMode { Internal, External };

struct RootCause {
    std::uint32_t entry_id = 0;
    std::vector<std::size_t> attributes;

    bool operator==(const RootCause&) const = default;
};

/// Positive entries and the core attributes that single them out. Internal:
/// decision 1 and attribute value 1. External: decision other than the most
/// common one and attribute value other than its column's most common value.
/// All tied cores contribute.
std::vector<RootCause> root_cause_report(const DecisionTable& table, const CoreResult& core, CauseMode mode);

/// "{a1,a3}"; "{}" for the empty set.
std::string format_attribute_set(AttributeSet set);
/// "a1a3" as in matrix cells.
std::string compact_attribute_set(AttributeSet set);

std::string render_table(const DecisionTable& table, std::string_view id_header = "ID");
std::string render_matrix(const DiscernibilityMatrix& matrix);

/// The four-entry weather table with categorical labels.
DecisionTable demo_table();

} // namespace spmdlens
