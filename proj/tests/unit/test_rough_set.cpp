#include "doctest.h"

#include "../support/oracles.hpp"

#include "spmdlens/error.hpp"
#include "spmdlens/rough_set.hpp"

using namespace spmdlens;

namespace {

DecisionTable table(const std::vector<std::vector<int>>& rows)
{
    DecisionTable t;
    for (std::size_t a = 0; a + 1 < rows.front().size(); ++a)
        t.attribute_names.push_back("a" + std::to_string(a + 1));
    for (std::size_t i = 0; i < rows.size(); ++i)
        t.entries.push_back(
            DecisionEntry{static_cast<std::uint32_t>(i), std::vector<int>(rows[i].begin(), rows[i].end() - 1), rows[i].back()});
    return t;
}

constexpr AttributeSet a1 = 1, a2 = 2, a3 = 4, a4 = 8;

} // namespace

TEST_CASE("matrix cells")
{
    const auto m = build_discernibility(table({{0, 0, 0}, {1, 0, 1}, {0, 0, 1}, {1, 1, 0}}));
    CHECK(m.size() == 4);
    CHECK(m.attribute_count() == 2);
    CHECK(m.at(0, 1) == DiscernibilityCell{DiscernibilityCell::Kind::Attributes, a1});
    CHECK(m.at(1, 0) == m.at(0, 1));
    CHECK(m.at(0, 2).kind == DiscernibilityCell::Kind::Conflict);
    CHECK(m.at(0, 3).kind == DiscernibilityCell::Kind::Zero);
    CHECK(m.at(2, 3).attributes == (a1 | a2));
    CHECK(m.at(1, 1).kind == DiscernibilityCell::Kind::Zero);
}

TEST_CASE("singleton cells form the core and absorb what they hit")
{
    const auto t = table({{0, 0, 0, 0, 0}, {1, 0, 0, 0, 1}, {1, 1, 0, 0, 1}, {0, 1, 1, 0, 1}, {0, 1, 1, 1, 1}});
    const auto core = extract_core(build_discernibility(t));
    CHECK(core.singleton_core == a1);
    CHECK(core.clauses == std::vector<AttributeSet>{a2 | a3});
    CHECK(core.cores == std::vector<AttributeSet>{a1 | a2, a1 | a3});
    CHECK(core.core_union() == (a1 | a2 | a3));
}

TEST_CASE("ties on size are broken by occurrence")
{
    // Clauses {a1,a2}, {a1,a3}, {a2,a3,a4}: four minimum hitting sets, and
    // {a1,a4} is covered by 3 of the 12 pick tuples against 5 for the rest.
    const auto t = table({{0, 0, 0, 0, 0}, {1, 1, 0, 0, 1}, {1, 0, 1, 0, 1}, {0, 1, 1, 1, 1}});
    const auto core = extract_core(build_discernibility(t));
    CHECK(core.singleton_core == 0);
    CHECK(core.cores == std::vector<AttributeSet>{a1 | a2, a1 | a3, a2 | a3});
    const std::vector<AttributeSet> clauses{a1 | a2, a1 | a3, a2 | a3 | a4};
    CHECK(oracle::covering_picks(clauses, a1 | a4) == 3);
    CHECK(oracle::covering_picks(clauses, a1 | a2) == 5);
    CHECK(oracle::covering_picks(clauses, a2 | a3) == 5);
    const auto brute = oracle::brute_core(t);
    CHECK(brute.minimum.size() == 4);
    CHECK(brute.winners == core.cores);
}

TEST_CASE("conflicts are counted and skipped")
{
    const auto t = table({{0, 1, 0}, {0, 1, 1}, {1, 1, 1}});
    const auto core = extract_core(build_discernibility(t));
    CHECK(core.conflicts == 1);
    CHECK(core.cores == std::vector<AttributeSet>{a1});
}

TEST_CASE("a matrix without attribute cells has no core")
{
    CHECK_THROWS_AS(extract_core(build_discernibility(table({{0, 0}, {1, 0}}))), AnalysisError);
    CHECK_THROWS_AS(extract_core(build_discernibility(table({{0, 0}, {0, 1}}))), AnalysisError);
}

TEST_CASE("table validation")
{
    auto t = table({{0, 0, 0}, {1, 0, 1}});
    CHECK_NOTHROW(t.validate());
    t.entries[1].values.pop_back();
    CHECK_THROWS_AS(t.validate(), ValidationError);
    auto negative = table({{0, -1, 0}});
    CHECK_THROWS_AS(negative.validate(), ValidationError);
    DecisionTable wide;
    wide.attribute_names.assign(kMaxAttributes + 1, "x");
    CHECK_THROWS_AS(wide.validate(), ValidationError);
}

TEST_CASE("internal causes are the positive entries' high core attributes")
{
    const auto t = table({{1, 0, 1, 0}, {0, 1, 0, 1}, {1, 1, 1, 1}, {0, 0, 0, 0}});
    const auto core = extract_core(build_discernibility(t));
    const auto causes = root_cause_report(t, core, CauseMode::Internal);
    REQUIRE(causes.size() == 2);
    CHECK(causes[0].entry_id == 1);
    CHECK(causes[1].entry_id == 2);
    for (const auto& c : causes)
        for (auto a : c.attributes)
            CHECK((core.core_union() >> a & 1));
}

TEST_CASE("external causes compare against the most common values")
{
    // Decisions 0,1,1,2,3,4,3,4: labels 1, 3 and 4 tie and the smallest, 1,
    // is the common behaviour. Column a5 likewise.
    const auto t = table({{0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 1, 1}, {0, 0, 0, 0, 1, 1}, {1, 0, 0, 0, 2, 2},
                          {0, 1, 0, 0, 3, 3}, {1, 1, 0, 1, 4, 4}, {1, 2, 0, 1, 3, 3}, {1, 2, 0, 0, 4, 4}});
    const auto core = extract_core(build_discernibility(t));
    CHECK(core.cores == std::vector<AttributeSet>{AttributeSet{16}});
    const auto causes = root_cause_report(t, core, CauseMode::External);
    std::vector<std::uint32_t> ids;
    for (const auto& c : causes) {
        ids.push_back(c.entry_id);
        CHECK(c.attributes == std::vector<std::size_t>{4});
    }
    CHECK(ids == std::vector<std::uint32_t>{0, 3, 4, 5, 6, 7});
}

TEST_CASE("cause attributes and names")
{
    REQUIRE(cause_attributes().size() == 5);
    CHECK(cause_attributes()[0] == MetricKind::L1MissRate);
    CHECK(cause_attributes()[4] == MetricKind::Instructions);
    CHECK(cause_name(1) == "L2 cache miss rate");
    CHECK(cause_name(2) == "disk I/O quantity");
    CHECK(cause_name(3) == "network I/O quantity");
}

TEST_CASE("attribute set formatting")
{
    CHECK(format_attribute_set(a1 | a3) == "{a1,a3}");
    CHECK(format_attribute_set(0) == "{}");
    CHECK(compact_attribute_set(a2 | a3 | a4) == "a2a3a4");
}

TEST_CASE("rendering the weather table")
{
    const auto t = demo_table();
    CHECK(render_table(t) == "ID  a1        a2    a3    a4     decision\n"
                             "0   sunny     hot   high  False  N\n"
                             "1   sunny     hot   high  True   N\n"
                             "2   overcast  hot   high  False  P\n"
                             "3   sunny     cool  low   False  P\n");
    CHECK(render_matrix(build_discernibility(t)) == "0  0  a1    a2a3\n"
                                                    "   0  a1a4  a2a3a4\n"
                                                    "      0     0\n"
                                                    "            0\n");
    const auto conflicted = build_discernibility(table({{0, 0}, {0, 1}}));
    CHECK(render_matrix(conflicted) == "0  -1\n   0\n");
}
