#include "doctest.h"

#include "spmdlens/error.hpp"
#include "spmdlens/synth.hpp"

#include <cmath>

using namespace spmdlens;

namespace {

SynthSpec two_region_spec()
{
    SynthSpec spec;
    spec.processes = 4;
    spec.clock_hz = 1e9;
    spec.serial_time = 0.5;
    spec.noise = 0.0;
    RegionBaseline outer{1, "outer", std::nullopt, {}};
    outer.own.wall_time = 2.0;
    outer.own.cpu_time = 1.0;
    outer.own.cpi = 2.0;
    outer.own.l1_miss_rate = 0.1;
    outer.own.l2_miss_rate = 0.5;
    RegionBaseline inner{2, "inner", 1, {}};
    inner.own.wall_time = 1.0;
    inner.own.cpu_time = 0.5;
    inner.own.disk_io_bytes = 100;
    spec.regions = {outer, inner};
    return spec;
}

} // namespace

TEST_CASE("SplitMix64 reference stream")
{
    SplitMix64 rng(1234567);
    CHECK(rng.next() == 6457827717110365317ULL);
    CHECK(rng.next() == 3203168211198807973ULL);
    CHECK(rng.next() == 9817491932198370423ULL);
    CHECK(rng.next() == 4593380528125082431ULL);
    CHECK(rng.next() == 16408922859458223821ULL);

    SplitMix64 a(1234567);
    CHECK(a.uniform() == std::ldexp(static_cast<double>(6457827717110365317ULL >> 11), -53));
}

TEST_CASE("counts follow from times, CPI and rates")
{
    const auto p = generate(two_region_spec(), 1);
    const auto& inner = p.cell(0, RegionId{2});
    CHECK(inner.cycles == 5e8);
    CHECK(inner.instructions == 5e8);
    CHECK(inner.l1_miss + inner.l1_access == 2e8);
    CHECK(inner.l2_miss + inner.l2_access == 2.5e7);
    CHECK(inner.disk_io_bytes == 100);

    // Inclusive: outer adds its own counts to inner's.
    const auto& outer = p.cell(0, RegionId{1});
    CHECK(outer.wall_time == 3.0);
    CHECK(outer.cpu_time == 1.5);
    CHECK(outer.cycles == 1e9 + 5e8);
    CHECK(outer.instructions == 5e8 + 5e8);
    CHECK(outer.l1_miss == 0.1 * 2e8);
    CHECK(outer.l2_miss == 0.5 * 2.5e7);
    CHECK(outer.disk_io_bytes == 100);
    CHECK(p.program_wall_time(3) == 3.5);
}

TEST_CASE("CPU time is clamped to wall time")
{
    auto spec = two_region_spec();
    spec.regions[1].own.cpu_time = 5.0;
    const auto p = generate(spec, 1);
    CHECK(p.cell(0, RegionId{2}).cpu_time == 1.0);
}

TEST_CASE("noise is deterministic per seed and bounded")
{
    auto spec = two_region_spec();
    spec.noise = 0.05;
    CHECK(generate(spec, 9) == generate(spec, 9));
    CHECK_FALSE(generate(spec, 9) == generate(spec, 10));
    const auto p = generate(spec, 9);
    for (std::size_t r = 0; r < 4; ++r) {
        const double w = p.cell(r, RegionId{2}).wall_time;
        CHECK(w >= 0.95);
        CHECK(w <= 1.05);
    }
}

TEST_CASE("load imbalance scales the upper half of the ranks by default")
{
    auto spec = two_region_spec();
    spec.injections.push_back(Injection{InjectionKind::LoadImbalance, 2, 3.0, std::nullopt, {}});
    const auto p = generate(spec, 1);
    CHECK(p.cell(1, RegionId{2}).cpu_time == 0.5);
    CHECK(p.cell(2, RegionId{2}).cpu_time == doctest::Approx(1.5));
    CHECK(p.cell(3, RegionId{2}).wall_time == doctest::Approx(3.0));
}

TEST_CASE("other injections hit every rank unless ranks are given")
{
    auto spec = two_region_spec();
    spec.injections.push_back(Injection{InjectionKind::HighDiskIo, 2, 3.0, 1e6, {}});
    spec.injections.push_back(Injection{InjectionKind::HighL2Miss, 1, 2.0, 0.9, {1}});
    const auto p = generate(spec, 1);
    for (std::size_t r = 0; r < 4; ++r)
        CHECK(p.cell(r, RegionId{2}).disk_io_bytes == 1e6);
    const auto rate = [&](std::size_t r) {
        const auto& c = p.cell(r, RegionId{1});
        const auto& i = p.cell(r, RegionId{2});
        return (c.l2_miss - i.l2_miss) / (c.l2_miss + c.l2_access - i.l2_miss - i.l2_access);
    };
    CHECK(rate(0) == doctest::Approx(0.5));
    CHECK(rate(1) == doctest::Approx(0.9));
}

TEST_CASE("spec validation")
{
    auto bad_parent = two_region_spec();
    bad_parent.regions[1].parent = 7;
    CHECK_THROWS_AS(bad_parent.validate(), ValidationError);

    auto bad_rate = two_region_spec();
    bad_rate.regions[0].own.l1_miss_rate = 1.5;
    CHECK_THROWS_AS(bad_rate.validate(), ValidationError);

    auto bad_rank = two_region_spec();
    bad_rank.injections.push_back(Injection{InjectionKind::HighNetIo, 1, 3.0, std::nullopt, {4}});
    CHECK_THROWS_AS(bad_rank.validate(), ValidationError);

    auto bad_value = two_region_spec();
    bad_value.injections.push_back(Injection{InjectionKind::LoadImbalance, 1, 3.0, 2.0, {}});
    CHECK_THROWS_AS(bad_value.validate(), ValidationError);

    auto duplicate = two_region_spec();
    duplicate.regions[1].id = 1;
    duplicate.regions[1].parent.reset();
    CHECK_THROWS_AS(duplicate.validate(), ValidationError);
}

TEST_CASE("spec documents fill in defaults")
{
    const auto spec = parse_synth_spec(R"({"processes": 2,
        "regions": [{"id": 3, "wall_time": 1, "cpu_time": 0.5}],
        "injections": [{"kind": "high_net_io", "region": 3}]})");
    CHECK(spec.processes == 2);
    CHECK(spec.clock_hz == 2e9);
    CHECK(spec.noise == 0.01);
    CHECK(spec.regions[0].name == "region 3");
    CHECK(spec.regions[0].own.cpi == 1.0);
    CHECK(spec.regions[0].own.l1_refs_per_instruction == 0.4);
    CHECK(spec.injections[0].factor == 3.0);
    CHECK_FALSE(spec.injections[0].value.has_value());
    CHECK(parse_synth_spec(emit_synth_spec(spec)) == spec);
}

TEST_CASE("spec document errors")
{
    CHECK_THROWS_AS(parse_synth_spec("{"), ParseError);
    CHECK_THROWS_AS(parse_synth_spec(R"({"regions": []})"), ParseError);
    CHECK_THROWS_AS(parse_synth_spec(R"({"processes": 1, "regions": [{"id": 1, "wall_time": 1}]})"), ParseError);
    CHECK_THROWS_AS(parse_synth_spec(R"({"processes": 1, "regions": [{"id": 1, "wall_time": 1, "cpu_time": 1}],
        "injections": [{"kind": "cosmic_rays", "region": 1}]})"),
                    ParseError);
    CHECK_THROWS_AS(parse_synth_spec(R"({"processes": 0, "regions": [{"id": 1, "wall_time": 1, "cpu_time": 1}]})"),
                    ValidationError);
}

TEST_CASE("injection kind names")
{
    for (auto kind : {InjectionKind::LoadImbalance, InjectionKind::HighL2Miss, InjectionKind::HighDiskIo,
                      InjectionKind::HighNetIo, InjectionKind::HighInstructionCount})
        CHECK(injection_kind_from_string(to_string(kind)) == kind);
    CHECK(to_string(InjectionKind::HighInstructionCount) == "high_instruction_count");
}

TEST_CASE("emitted fixtures read back equal")
{
    auto spec = two_region_spec();
    spec.noise = 0.02;
    spec.regions[0].id = 40;
    spec.regions[1].id = 7;
    spec.regions[1].parent = 40;
    const auto p = generate(spec, 5);
    const auto text = emit_fixture(p);
    CHECK(ingest_profile(text) == p);
    CHECK(p.tree().node(RegionId{1}).source_id == 7);
}
