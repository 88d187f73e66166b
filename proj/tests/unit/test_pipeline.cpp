#include "doctest.h"

#include "builders.hpp"

#include "spmdlens/error.hpp"
#include "spmdlens/fixtures.hpp"
#include "spmdlens/pipeline.hpp"

using namespace spmdlens;

namespace {

AnalysisConfig loose()
{
    AnalysisConfig c;
    c.density.count_threshold = 1;
    return c;
}

void check_round_trip(const AnalysisResult& result)
{
    const auto text = result_to_json(result);
    const auto back = result_from_json(text);
    CHECK(back == result);
    CHECK(result_to_json(back) == text);
    CHECK(render_report(back) == render_report(result));
}

} // namespace

TEST_CASE("ST analysis end to end")
{
    const auto r = analyze(fixtures::st_profile(), loose());
    REQUIRE(r.external.detection);
    CHECK(r.external.detection->outcome.cluster_count() == 5);
    CHECK(r.external.cause_regions == std::vector<RegionId>{RegionId{11}});
    REQUIRE(r.external.causes);
    REQUIRE(r.external.causes->core);
    CHECK(r.external.causes->core->cores == std::vector<AttributeSet>{16});
    CHECK(r.internal.result.cccrs == std::vector<RegionId>{RegionId{8}, RegionId{11}});
    REQUIRE(r.internal.causes.core);
    CHECK(r.internal.causes.core->cores == std::vector<AttributeSet>{2 | 4});
    check_round_trip(r);
}

TEST_CASE("default threshold leaves the ST processes unclustered")
{
    const auto r = analyze(fixtures::st_profile());
    CHECK(r.external.detection->outcome.cluster_count() == 8);
    check_round_trip(r);
}

TEST_CASE("identical processes skip the search")
{
    const auto r = analyze(fixtures::npar1way_profile());
    CHECK_FALSE(r.external.detection->bottlenecks_exist);
    CHECK_FALSE(r.external.tree);
    CHECK_FALSE(r.external.causes);
    const auto report = render_report(r);
    CHECK(report.find("there is 1 kind of processes\n") != std::string::npos);
    CHECK(report.find("dissimilarity severity") == std::string::npos);
    CHECK(report.find("region 12: network I/O quantity, executing instruction number\n") != std::string::npos);
    check_round_trip(r);
}

TEST_CASE("single-process profiles skip the external stage")
{
    const auto p = build::cpu_profile({{1, {}}, {2, {}}}, {{1, 2}});
    const auto r = analyze(p);
    CHECK(r.external.skipped == "single-process profile");
    CHECK(render_report(r).rfind("Performance similarity\nexternal analysis skipped: single-process profile\n", 0) == 0);
    // Every attribute column is uniform, so there is no core.
    CHECK_FALSE(r.internal.causes.core);
    CHECK(render_report(r).find("core: none (") != std::string::npos);
    check_round_trip(r);
}

TEST_CASE("composite CCRs render with their members")
{
    // Zeroing one of the three small regions leaves the groups 11.3 apart,
    // zeroing a fused pair brings them within 8 of each other.
    const std::vector<double> high{9, 9, 9, 100};
    const std::vector<double> low{1, 1, 1, 100};
    const auto p = build::cpu_profile({{1, {}}, {2, {}}, {3, {}}, {4, {}}}, {high, high, low, low});
    const auto r = analyze(p, loose());
    REQUIRE(r.external.tree);
    CHECK(entry_label(r.external.tree->entries.front()) == "region 1+2");
    check_round_trip(r);
}

TEST_CASE("configuration is validated")
{
    AnalysisConfig c;
    c.density.threshold_fraction = 1.0;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c.density.threshold_fraction = 0.1;
    c.density.count_threshold = 0;
    CHECK_THROWS_AS(analyze(fixtures::npar1way_profile(), c), ValidationError);
}

TEST_CASE("malformed result documents")
{
    CHECK_THROWS_AS(result_from_json("{"), ParseError);
    CHECK_THROWS_AS(result_from_json(R"({"version": 1})"), ParseError);
    CHECK_THROWS_AS(result_from_json(R"({"version": 2})"), ParseError);
}

TEST_CASE("tables output covers both stages")
{
    const auto text = render_tables(fixtures::st_profile(true), loose());
    CHECK(text.rfind("External decision table (regions 11)\n", 0) == 0);
    CHECK(text.find("\nInternal discernibility matrix\n") != std::string::npos);
}
