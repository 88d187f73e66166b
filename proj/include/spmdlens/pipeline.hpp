#pragma once

#include "spmdlens/clustering.hpp"
#include "spmdlens/external.hpp"
#include "spmdlens/internal.hpp"
#include "spmdlens/profile.hpp"
#include "spmdlens/rough_set.hpp"

#include <optional>
#include <string>
#include <vector>

namespace spmdlens {

struct AnalysisConfig {
    DensityParams density;

    /// Throws ValidationError unless 0 < threshold_fraction < 1 and count_threshold >= 1.
    void validate() const;
    bool operator==(const AnalysisConfig&) const = default;
};

/// Root-cause stage: decision table, its core, and the causes per positive entry.
struct CauseAnalysis {
    DecisionTable table;
    std::optional<CoreResult> core;
    /// Why no core could be extracted.
    std::string notice;
    std::vector<RootCause> causes;

    bool operator==(const CauseAnalysis&) const = default;
};

struct ExternalStage {
    /// Set when the stage did not run (single-process profile).
    std::string skipped;
    std::optional<ExternalDetection> detection;
    std::optional<CcrTree> tree;
    /// Regions whose metrics feed the decision table.
    std::vector<RegionId> cause_regions;
    std::optional<CauseAnalysis> causes;

    bool operator==(const ExternalStage&) const = default;
};

struct InternalStage {
    InternalResult result;
    CauseAnalysis causes;

    bool operator==(const InternalStage&) const = default;
};

struct AnalysisResult {
    std::size_t processes = 0;
    std::size_t regions = 0;
    AnalysisConfig config;
    ExternalStage external;
    InternalStage internal;

    bool operator==(const AnalysisResult&) const = default;
};

AnalysisResult analyze(const Profile& profile, const AnalysisConfig& config = {});

/// Plain-text report; depends only on the result.
std::string render_report(const AnalysisResult& result);

/// Machine-readable result document and its inverse.
std::string result_to_json(const AnalysisResult& result);
AnalysisResult result_from_json(std::string_view document);

/// Decision tables and discernibility matrices of both stages.
std::string render_tables(const Profile& profile, const AnalysisConfig& config = {});

/// "region 11" or "region 3+5" for a composite.
std::string entry_label(const CcrEntry& entry);

} // namespace spmdlens
