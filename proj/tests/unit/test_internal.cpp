#include "doctest.h"

#include "builders.hpp"

#include "spmdlens/error.hpp"
#include "spmdlens/internal.hpp"

using namespace spmdlens;

namespace {

RegionMetrics cpi_one_and_a_half()
{
    RegionMetrics m;
    m.cycles = 300;
    m.instructions = 200;
    return m;
}

} // namespace

TEST_CASE("CRNM is wall share times CPI, averaged over processes")
{
    const auto p = build::cpu_profile({{1, {}}, {2, 1}, {3, {}}}, {{8, 6, 1}, {4, 2, 4}}, cpi_one_and_a_half());
    const auto records = compute_crnm(p);
    REQUIRE(records.size() == 3);
    // Program wall: 1 + 10 + 1.25 and 1 + 5 + 5.
    const double r0 = 10.0 / 12.25 * 1.5;
    const double r1 = 5.0 / 11.0 * 1.5;
    CHECK(records[0].region == RegionId{1});
    CHECK(records[0].per_process[0] == doctest::Approx(r0));
    CHECK(records[0].per_process[1] == doctest::Approx(r1));
    CHECK(records[0].average == doctest::Approx((r0 + r1) / 2));
    CHECK(records[1].per_process[0] == doctest::Approx(7.5 / 12.25 * 1.5));
}

TEST_CASE("regions without instructions have zero CRNM")
{
    const auto p = build::cpu_profile({{1, {}}}, {{2}});
    CHECK(compute_crnm(p)[0].average == 0.0);
}

TEST_CASE("non-positive program wall time is rejected")
{
    auto tree = CodeRegionTree::build({RegionDecl{1, "a", std::nullopt, std::nullopt}});
    const Profile p(std::move(tree), {0.0}, {RegionMetrics{}});
    CHECK_THROWS_AS(compute_crnm(p), ValidationError);
}

TEST_CASE("a CCR whose child shares its category is not a CCCR")
{
    // Region 2 carries all of region 1's time; regions 3..6 spread out below.
    const auto p = build::cpu_profile({{1, {}}, {2, 1}, {3, {}}, {4, {}}, {5, {}}, {6, {}}},
                                      {{10, 10, 1, 2, 3, 4}}, cpi_one_and_a_half());
    const auto r = find_internal(p);
    using enum SeverityCategory;
    CHECK(r.categories == std::vector<SeverityCategory>{VeryHigh, VeryHigh, VeryLow, Low, Medium, High});
    CHECK(r.ccrs == std::vector<RegionId>{RegionId{1}, RegionId{2}, RegionId{6}});
    CHECK(r.cccrs == std::vector<RegionId>{RegionId{2}, RegionId{6}});
    CHECK(r.is_ccr(RegionId{1}));
    CHECK_FALSE(r.is_cccr(RegionId{1}));
    CHECK(r.is_cccr(RegionId{6}));
    CHECK_FALSE(r.degenerate);
}

TEST_CASE("a CCR with strictly lower children is a CCCR")
{
    const auto p = build::cpu_profile({{1, {}}, {2, 1}, {3, {}}}, {{8, 6, 1}}, cpi_one_and_a_half());
    const auto r = find_internal(p);
    using enum SeverityCategory;
    CHECK(r.categories == std::vector<SeverityCategory>{VeryHigh, Low, VeryLow});
    CHECK(r.cccrs == std::vector<RegionId>{RegionId{1}});
    CHECK(r.degenerate);
}
