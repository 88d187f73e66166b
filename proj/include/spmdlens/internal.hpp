#pragma once

#include "spmdlens/clustering.hpp"
#include "spmdlens/profile.hpp"

#include <vector>

namespace spmdlens {

struct CrnmRecord {
    RegionId region;
    std::vector<double> per_process;
    double average = 0.0;

    bool operator==(const CrnmRecord&) const = default;
};

/// Wall-time share of the program times CPI, per process and averaged over
/// all processes. Throws ValidationError if a program wall time is not positive.
std::vector<CrnmRecord> compute_crnm(const Profile& profile);

struct InternalResult {
    /// One record per region, in region order.
    std::vector<CrnmRecord> records;
    /// Indexed by RegionId::index().
    std::vector<SeverityCategory> categories;
    std::vector<RegionId> ccrs;
    std::vector<RegionId> cccrs;
    /// Fewer than five severity levels were populated.
    bool degenerate = false;

    SeverityCategory category(RegionId id) const { return categories.at(id.index()); }
    bool is_ccr(RegionId id) const;
    bool is_cccr(RegionId id) const;
    bool operator==(const InternalResult&) const = default;
};

InternalResult find_internal(const Profile& profile);

} // namespace spmdlens
