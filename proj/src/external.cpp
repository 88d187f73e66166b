#include "spmdlens/external.hpp"

#include "spmdlens/error.hpp"

#include <algorithm>
#include <map>

namespace spmdlens {

ExternalDetection detect_external(const Profile& profile, DensityParams params)
{
    if (profile.process_count() < 2)
        throw AnalysisError("external analysis needs at least two processes");
    const auto vectors = perf_vectors(profile, MetricKind::CpuTime);
    ExternalDetection out;
    out.outcome = density_cluster(vectors, params);
    out.severity = dissimilarity_severity(vectors);
    out.bottlenecks_exist = out.outcome.cluster_count() > 1;
    return out;
}

bool clustering_changed(const ClusteringOutcome& reference, const ClusteringOutcome& candidate)
{
    return !(reference == candidate);
}

std::vector<std::size_t> CcrTree::cccr_indices() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (entries[i].is_cccr)
            out.push_back(i);
    return out;
}

namespace {

// Per-process vectors over a layer of slots, each slot standing for one
// depth-1 region or one composite of depth-1 regions.
class SlotSearch {
public:
    SlotSearch(const Profile& profile, DensityParams params) : profile_(profile), params_(params) {}

    double cpu(std::size_t rank, RegionId id) const { return profile_.cell(rank, id).cpu_time; }

    std::vector<PerfVector> layer(const std::vector<std::vector<RegionId>>& slots) const
    {
        std::vector<PerfVector> out(profile_.process_count());
        for (std::size_t r = 0; r < out.size(); ++r) {
            out[r].owner = r;
            for (const auto& slot : slots) {
                double sum = 0.0;
                for (auto id : slot)
                    sum += cpu(r, id);
                out[r].values.push_back(sum);
            }
        }
        return out;
    }

    ClusteringOutcome cluster(const std::vector<PerfVector>& vectors) const
    {
        return density_cluster(vectors, params_);
    }

    bool zeroing_changes(std::vector<PerfVector> vectors, std::size_t slot, const ClusteringOutcome& reference) const
    {
        for (auto& v : vectors)
            v.values[slot] = 0.0;
        return clustering_changed(reference, cluster(vectors));
    }

    // Puts `region`'s own value into `slot` in place of its ancestor's and
    // checks whether the reference partition survives.
    bool substitution_keeps(std::vector<PerfVector> vectors, std::size_t slot, RegionId region,
                            const ClusteringOutcome& reference) const
    {
        for (auto& v : vectors)
            v.values[slot] = cpu(v.owner, region);
        return !clustering_changed(reference, cluster(vectors));
    }

    // Refines an entry whose slot is `slot` by testing `children`; returns
    // whether any child qualified.
    bool refine(const std::vector<PerfVector>& vectors, std::size_t slot, const std::vector<RegionId>& children,
                const ClusteringOutcome& reference, int level, std::size_t parent, CcrTree& tree) const
    {
        bool any = false;
        for (auto child : children) {
            if (!substitution_keeps(vectors, slot, child, reference))
                continue;
            any = true;
            const std::size_t index = tree.entries.size();
            tree.entries.push_back(CcrEntry{{child}, level, false, parent});
            const bool deeper = refine(vectors, slot, profile_.tree().node(child).children, reference, level + 1,
                                       index, tree);
            tree.entries[index].is_cccr = !deeper;
        }
        return any;
    }

private:
    const Profile& profile_;
    DensityParams params_;
};

std::vector<RegionId> sorted_children(const Profile& profile, const std::vector<RegionId>& members)
{
    std::vector<RegionId> out;
    for (auto id : members)
        for (auto c : profile.tree().node(id).children)
            out.push_back(c);
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap)
{
    double acc = 1.0;
    for (std::size_t i = 1; i <= k; ++i) {
        acc = acc * static_cast<double>(n - k + i) / static_cast<double>(i);
        if (acc > static_cast<double>(cap))
            return cap + 1;
    }
    return static_cast<std::size_t>(acc + 0.5);
}

} // namespace

CcrTree search_external(const Profile& profile, DensityParams params, SearchLimits limits)
{
    const SlotSearch search(profile, params);
    const auto top = profile.tree().top_level();
    const std::vector<RegionId> depth1(top.begin(), top.end());

    std::vector<std::vector<RegionId>> slots;
    for (auto id : depth1)
        slots.push_back({id});
    const auto vectors = search.layer(slots);
    const auto reference = search.cluster(vectors);

    CcrTree tree;
    for (std::size_t k = 0; k < depth1.size(); ++k) {
        const bool active = std::any_of(vectors.begin(), vectors.end(), [&](const PerfVector& v) { return v.values[k] > 0.0; });
        if (!active || !search.zeroing_changes(vectors, k, reference))
            continue;
        const std::size_t index = tree.entries.size();
        tree.entries.push_back(CcrEntry{{depth1[k]}, 1, false, std::nullopt});
        const bool deeper = search.refine(vectors, k, profile.tree().node(depth1[k]).children, reference, 2, index, tree);
        tree.entries[index].is_cccr = !deeper;
    }
    if (!tree.entries.empty())
        return tree;

    // Composite fallback: fuse s depth-1 regions into one slot, s = 2..r-1.
    const std::size_t r = depth1.size();
    for (std::size_t s = 2; s + 1 <= r; ++s) {
        if (binomial_capped(r, s, limits.max_composites_per_size) > limits.max_composites_per_size) {
            tree.truncated = true;
            return tree;
        }
        std::vector<bool> pick(r, false);
        std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(s), true);
        std::map<RegionId, int> membership;
        do {
            std::vector<RegionId> members;
            std::vector<std::vector<RegionId>> layer_slots;
            for (std::size_t i = 0; i < r; ++i)
                if (pick[i])
                    members.push_back(depth1[i]);
            layer_slots.push_back(members);
            for (std::size_t i = 0; i < r; ++i)
                if (!pick[i])
                    layer_slots.push_back({depth1[i]});

            const auto composite_vectors = search.layer(layer_slots);
            const auto composite_reference = search.cluster(composite_vectors);
            const bool active = std::any_of(composite_vectors.begin(), composite_vectors.end(),
                                            [](const PerfVector& v) { return v.values[0] > 0.0; });
            if (!active || !search.zeroing_changes(composite_vectors, 0, composite_reference))
                continue;
            for (auto id : members)
                if (++membership[id] > 1)
                    tree.overlap = true;
            const std::size_t index = tree.entries.size();
            tree.entries.push_back(CcrEntry{members, 1, false, std::nullopt});
            const bool deeper = search.refine(composite_vectors, 0, sorted_children(profile, members),
                                              composite_reference, 2, index, tree);
            tree.entries[index].is_cccr = !deeper;
        } while (std::prev_permutation(pick.begin(), pick.end()));

        if (!tree.entries.empty()) {
            tree.composite_size = s;
            return tree;
        }
    }
    tree.exhausted = true;
    return tree;
}

} // namespace spmdlens
