#include "doctest.h"

#include "builders.hpp"

#include "spmdlens/error.hpp"
#include "spmdlens/external.hpp"

using namespace spmdlens;

TEST_CASE("nested search descends while the partition survives")
{
    // Region 1 holds children 2 and 3; the imbalance sits in region 2.
    const auto p = build::cpu_profile({{1, {}}, {2, 1}, {3, 1}, {4, {}}},
                                      {{16, 10, 5, 50}, {16, 10, 5, 50}, {26, 20, 5, 50}, {26, 20, 5, 50}});
    const DensityParams params{0.1, 1};
    const auto det = detect_external(p, params);
    CHECK(det.bottlenecks_exist);
    CHECK(det.outcome.clusters() == std::vector<std::vector<std::size_t>>{{0, 1}, {2, 3}});

    const auto tree = search_external(p, params);
    const std::vector<CcrEntry> expected{{{RegionId{1}}, 1, false, std::nullopt}, {{RegionId{2}}, 2, true, 0}};
    CHECK(tree.entries == expected);
    CHECK(tree.cccr_indices() == std::vector<std::size_t>{1});
    CHECK_FALSE(tree.exhausted);
    CHECK(tree.composite_size == 0);
}

TEST_CASE("a leaf 1-CCR is its own CCCR")
{
    const auto p = build::cpu_profile({{1, {}}, {2, {}}}, {{10, 50}, {10, 50}, {20, 50}, {20, 50}});
    const auto tree = search_external(p, {0.1, 1});
    REQUIRE(tree.entries.size() == 1);
    CHECK(tree.entries[0].members == std::vector<RegionId>{RegionId{1}});
    CHECK(tree.entries[0].is_cccr);
}

TEST_CASE("composite fallback when no single region changes the clustering")
{
    // Six small regions differ by d between the groups; zeroing one leaves the
    // groups apart, zeroing a fused pair brings them together.
    const double d = 4.6;
    const std::vector<double> high{1 + d, 1 + d, 1 + d, 1 + d, 1 + d, 1 + d, 100};
    const std::vector<double> low{1, 1, 1, 1, 1, 1, 100};
    const auto p = build::cpu_profile({{1, {}}, {2, {}}, {3, {}}, {4, {}}, {5, {}}, {6, {}}, {7, {}}},
                                      {high, high, low, low});
    const auto tree = search_external(p, {0.1, 1});
    CHECK(tree.composite_size == 2);
    CHECK(tree.entries.size() == 15);
    for (const auto& e : tree.entries) {
        CHECK(e.is_composite());
        CHECK(e.members.back().value <= 6);
        CHECK(e.is_cccr);
    }
    CHECK(tree.overlap);
    CHECK_FALSE(tree.exhausted);
    CHECK(tree.entries.front().members == std::vector<RegionId>{RegionId{1}, RegionId{2}});
}

TEST_CASE("identical processes exhaust the search")
{
    const auto p = build::cpu_profile({{1, {}}, {2, {}}, {3, {}}}, {{1, 2, 3}, {1, 2, 3}, {1, 2, 3}});
    const auto det = detect_external(p);
    CHECK_FALSE(det.bottlenecks_exist);
    CHECK(det.severity.value == 0.0);
    const auto tree = search_external(p);
    CHECK(tree.entries.empty());
    CHECK(tree.exhausted);
    CHECK_FALSE(tree.truncated);

    const auto capped = search_external(p, {}, SearchLimits{1});
    CHECK(capped.truncated);
    CHECK_FALSE(capped.exhausted);
}

TEST_CASE("external detection needs two processes")
{
    const auto p = build::cpu_profile({{1, {}}}, {{1}});
    CHECK_THROWS_AS(detect_external(p), AnalysisError);
}

TEST_CASE("clustering change is partition inequality")
{
    const ClusteringOutcome a({{0, 1}, {2}});
    const ClusteringOutcome b({{1, 0}, {2}});
    const ClusteringOutcome c({{0}, {1}, {2}});
    CHECK_FALSE(clustering_changed(a, b));
    CHECK(clustering_changed(a, c));
}
