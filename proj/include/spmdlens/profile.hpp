#pragma once

#include "spmdlens/perf_vector.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace spmdlens {

/// Dense 1-based code region identifier.
struct RegionId {
    std::uint32_t value = 0;

    constexpr auto operator<=>(const RegionId&) const = default;
    constexpr std::size_t index() const { return value - 1; }
};

/// Raw per-(process, region) measurements.
struct RegionMetrics {
    double wall_time = 0.0;
    double cpu_time = 0.0;
    double cycles = 0.0;
    double instructions = 0.0;
    double l1_miss = 0.0;
    double l1_access = 0.0;
    double l2_miss = 0.0;
    double l2_access = 0.0;
    double disk_io_bytes = 0.0;
    double net_io_bytes = 0.0;

    bool operator==(const RegionMetrics&) const = default;
};

enum class MetricKind {
    CpuTime,
    WallTime,
    L1MissRate,
    L2MissRate,
    DiskIo,
    NetIo,
    Instructions,
    Cpi,
    Crnm,
};

std::string_view to_string(MetricKind kind);

struct CodeRegionNode {
    RegionId id;
    std::string name;
    int depth = 1;
    std::optional<RegionId> parent;
    std::vector<RegionId> children;
    /// Identifier the region carried in the source document.
    std::uint32_t source_id = 0;

    bool operator==(const CodeRegionNode&) const = default;
};

/// Region declaration as it appears in an input document, before remapping.
struct RegionDecl {
    std::uint32_t id = 0;
    std::string name;
    std::optional<std::uint32_t> parent;
    std::optional<int> depth;
};

/// Nested code regions under a synthetic whole-program root (depth 0).
class CodeRegionTree {
public:
    CodeRegionTree() = default;

    /// Validates the declarations and remaps ids to dense 1..n in ascending
    /// source-id order. Throws ValidationError on duplicates, orphans, cycles
    /// or a declared depth that disagrees with the parent chain.
    static CodeRegionTree build(std::vector<RegionDecl> decls);

    std::size_t size() const { return nodes_.size(); }
    const CodeRegionNode& node(RegionId id) const;
    std::span<const CodeRegionNode> nodes() const { return nodes_; }
    /// Children of the synthetic root, ascending.
    std::span<const RegionId> top_level() const { return top_level_; }
    bool is_leaf(RegionId id) const { return node(id).children.empty(); }
    bool contains(RegionId id) const { return id.value >= 1 && id.value <= nodes_.size(); }
    std::vector<RegionId> ids() const;

    bool operator==(const CodeRegionTree&) const = default;

private:
    std::vector<CodeRegionNode> nodes_;
    std::vector<RegionId> top_level_;
};

/// Per-process, per-region measurements of one program run. Immutable once
/// constructed; the constructor enforces all value invariants.
class Profile {
public:
    /// `cells` is row-major: cells[rank * n + region.index()].
    Profile(CodeRegionTree tree, std::vector<double> program_wall_time, std::vector<RegionMetrics> cells);

    const CodeRegionTree& tree() const { return tree_; }
    std::size_t process_count() const { return program_wall_time_.size(); }
    std::size_t region_count() const { return tree_.size(); }
    const RegionMetrics& cell(std::size_t rank, RegionId region) const;
    double program_wall_time(std::size_t rank) const;
    std::span<const double> program_wall_times() const { return program_wall_time_; }
    std::span<const RegionMetrics> cells() const { return cells_; }

    bool operator==(const Profile&) const = default;

private:
    CodeRegionTree tree_;
    std::vector<double> program_wall_time_;
    std::vector<RegionMetrics> cells_;
};

/// Parses and validates a profile document (JSON, schema version 1).
Profile ingest_profile(std::string_view document);
Profile load_profile(const std::string& path);

bool is_derived(MetricKind kind);

/// L1/L2 miss rate as miss / (miss + access) and CPI as cycles / instructions.
/// A zero denominator yields 0. Throws std::invalid_argument for kinds that
/// are not derived from a single cell (including Crnm, which needs the
/// program wall time).
double derived_metric(const RegionMetrics& metrics, MetricKind kind);

/// Value of any metric kind for one cell; `program_wall_time` is only
/// consulted for Crnm.
double metric_value(const RegionMetrics& metrics, MetricKind kind, double program_wall_time);

/// Vector of `kind` over all regions for process `rank`. Throws
/// std::out_of_range for an unknown rank.
PerfVector perf_vector(const Profile& profile, std::size_t rank, MetricKind kind);
std::vector<PerfVector> perf_vectors(const Profile& profile, MetricKind kind);

} // namespace spmdlens
