#include "spmdlens/internal.hpp"

#include "spmdlens/error.hpp"

#include <algorithm>
#include <string>

namespace spmdlens {

std::vector<CrnmRecord> compute_crnm(const Profile& profile)
{
    const std::size_t m = profile.process_count();
    for (std::size_t r = 0; r < m; ++r)
        if (!(profile.program_wall_time(r) > 0.0))
            throw ValidationError("program_wall_time of process " + std::to_string(r) + " must be positive");

    std::vector<CrnmRecord> out;
    out.reserve(profile.region_count());
    for (const auto& node : profile.tree().nodes()) {
        CrnmRecord rec;
        rec.region = node.id;
        double sum = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
            const double v = metric_value(profile.cell(r, node.id), MetricKind::Crnm, profile.program_wall_time(r));
            rec.per_process.push_back(v);
            sum += v;
        }
        rec.average = sum / static_cast<double>(m);
        out.push_back(std::move(rec));
    }
    return out;
}

bool InternalResult::is_ccr(RegionId id) const { return std::binary_search(ccrs.begin(), ccrs.end(), id); }

bool InternalResult::is_cccr(RegionId id) const { return std::binary_search(cccrs.begin(), cccrs.end(), id); }

InternalResult find_internal(const Profile& profile)
{
    InternalResult out;
    out.records = compute_crnm(profile);

    std::vector<double> averages;
    for (const auto& rec : out.records)
        averages.push_back(rec.average);
    out.categories = severity_classify(averages);
    out.degenerate = kmeans_scalar(averages, 5).centroids.size() < 5;

    auto is_ccr = [&](RegionId id) { return out.category(id) >= SeverityCategory::High; };
    for (const auto& node : profile.tree().nodes()) {
        if (!is_ccr(node.id))
            continue;
        out.ccrs.push_back(node.id);
        const bool dominates_children = std::all_of(node.children.begin(), node.children.end(), [&](RegionId c) {
            return out.category(c) < out.category(node.id);
        });
        // A leaf passes trivially.
        if (dominates_children)
            out.cccrs.push_back(node.id);
    }
    return out;
}

} // namespace spmdlens
