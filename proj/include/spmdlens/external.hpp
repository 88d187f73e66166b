#pragma once

#include "spmdlens/clustering.hpp"
#include "spmdlens/profile.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace spmdlens {

struct ExternalDetection {
    ClusteringOutcome outcome;
    Severity severity;
    bool bottlenecks_exist = false;

    bool operator==(const ExternalDetection&) const = default;
};

/// Clusters the per-process CPU-time vectors. Throws AnalysisError for a
/// single-process profile.
ExternalDetection detect_external(const Profile& profile, DensityParams params = {});

/// True iff the two canonical partitions differ.
bool clustering_changed(const ClusteringOutcome& reference, const ClusteringOutcome& candidate);

struct CcrEntry {
    /// A single region, or the depth-1 members of a composite region.
    std::vector<RegionId> members;
    /// Depth level L of an L-CCR.
    int level = 1;
    bool is_cccr = false;
    /// Index of the parent entry; empty for level 1.
    std::optional<std::size_t> parent;

    bool is_composite() const { return members.size() > 1; }
    bool operator==(const CcrEntry&) const = default;
};

struct SearchLimits {
    /// Composite sizes whose combination count exceeds this are not enumerated.
    std::size_t max_composites_per_size = 200000;
};

struct CcrTree {
    /// Depth-first order: every entry follows its parent.
    std::vector<CcrEntry> entries;
    /// Nonzero when the CCRs were found among composites of this many regions.
    std::size_t composite_size = 0;
    /// No CCR was found, even among composite regions.
    bool exhausted = false;
    /// Enumeration stopped early at a composite size over the limit.
    bool truncated = false;
    /// Some depth-1 region belongs to more than one composite CCR.
    bool overlap = false;

    std::vector<std::size_t> cccr_indices() const;
    bool operator==(const CcrTree&) const = default;
};

/// Top-down zero-out/restore search for critical code regions over CPU-time
/// vectors, with the composite-region fallback when no single depth-1 region
/// qualifies. The profile is not modified.
CcrTree search_external(const Profile& profile, DensityParams params = {}, SearchLimits limits = {});

} // namespace spmdlens
