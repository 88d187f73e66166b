#include "spmdlens/fixtures.hpp"

#include "spmdlens/clustering.hpp"

#include <array>
#include <cmath>

namespace spmdlens::fixtures {

namespace {

constexpr double kClockHz = 2e9;

struct OwnRow {
    std::uint32_t id;
    std::optional<std::uint32_t> parent;
    double wall, cpu, cpi, l1, l2, disk, net;
};

CellParams cell_of(const OwnRow& row)
{
    CellParams p;
    p.wall_time = row.wall;
    p.cpu_time = row.cpu;
    p.cpi = row.cpi;
    p.l1_miss_rate = row.l1;
    p.l2_miss_rate = row.l2;
    p.disk_io_bytes = row.disk;
    p.net_io_bytes = row.net;
    return p;
}

std::vector<RegionDecl> decls_of(std::span<const OwnRow> rows)
{
    std::vector<RegionDecl> decls;
    for (const auto& row : rows)
        decls.push_back(RegionDecl{row.id, "region_" + std::to_string(row.id), row.parent, std::nullopt});
    return decls;
}

// Region 11 is filled in per process.
constexpr std::array<OwnRow, 14> kStRows{{
    {1, std::nullopt, 0.72, 0.5, 1.19, 0.008, 0.052, 0, 0},
    {2, std::nullopt, 4.72, 4.2, 2.12, 0.079, 0.019, 0, 0},
    {3, 1, 2.7, 2.6, 1.39, 0.021, 0.03, 0, 0},
    {4, 1, 0.61, 0.45, 0.84, 0.027, 0.048, 0, 0},
    {5, std::nullopt, 18.72, 15, 1.17, 0.049, 0.083, 0, 0},
    {6, std::nullopt, 20.74, 13, 0.88, 0.083, 0.029, 0, 0},
    {7, 5, 1.9, 1.5, 1.37, 0.031, 0.005, 0, 0},
    {8, std::nullopt, 32.39, 14, 1.07, 0.019, 0.045, 1.06e11, 0},
    {9, std::nullopt, 1.8, 1.5, 1.03, 0.055, 0.057, 0, 0},
    {10, 9, 1.89, 1.3, 1.12, 0.086, 0.007, 0, 0},
    {11, 14, 0, 0, 0.82, 0, 0, 0, 0},
    {12, 14, 1.4, 1.0, 0.9, 0.004, 0.035, 0, 0},
    {13, std::nullopt, 0.87, 0.75, 0.75, 0.038, 0.026, 0, 0},
    {14, std::nullopt, 2.87, 1.8, 0.87, 0.055, 0.131, 0, 0},
}};

constexpr std::size_t kStProcesses = 8;
constexpr std::size_t kStHot = 10; // row of region 11
constexpr double kStBaseCpu = 50.0;
constexpr double kStWallOverCpu = 1.02;
constexpr std::array<double, kStProcesses> kStL1{0.04, 0.04, 0.04, 0.06, 0.04, 0.06, 0.06, 0.06};
constexpr std::array<double, kStProcesses> kStL2{0.15, 0.15, 0.15, 0.15, 0.19, 0.19, 0.23, 0.23};

// Process groups of the imbalanced region: group g runs base * ratio^g,
// members within a group differ by 0.3%.
const std::vector<std::vector<std::size_t>> kStGroups{{0}, {1, 2}, {3}, {4, 6}, {5, 7}};

Profile st_build(double ratio, bool network_variance)
{
    std::array<double, kStProcesses> hot_cpu{};
    for (std::size_t g = 0; g < kStGroups.size(); ++g)
        for (std::size_t j = 0; j < kStGroups[g].size(); ++j)
            hot_cpu[kStGroups[g][j]] = kStBaseCpu * std::pow(ratio, static_cast<double>(g)) * (1.0 + 0.003 * j);

    const std::size_t n = kStRows.size();
    std::vector<CellParams> cells;
    cells.reserve(kStProcesses * n);
    for (std::size_t r = 0; r < kStProcesses; ++r) {
        for (std::size_t i = 0; i < n; ++i) {
            CellParams p = cell_of(kStRows[i]);
            if (i == kStHot) {
                p.cpu_time = hot_cpu[r];
                p.wall_time = hot_cpu[r] * kStWallOverCpu;
                p.l1_miss_rate = kStL1[r];
                p.l2_miss_rate = kStL2[r];
                if (network_variance)
                    p.net_io_bytes = (r == 5 || r == 6) ? 1.3e6 : 0.9e6;
            }
            cells.push_back(p);
        }
    }
    const std::vector<double> serial(kStProcesses, 3.0);
    return assemble_profile(decls_of(kStRows), cells, kStProcesses, kClockHz, serial);
}

double st_severity(double ratio)
{
    const auto vectors = perf_vectors(st_build(ratio, false), MetricKind::CpuTime);
    return dissimilarity_severity(vectors).value;
}

// Own wall share of the program wall time and CPI per region.
struct NparRow {
    std::uint32_t id;
    std::optional<std::uint32_t> parent;
    double share, cpi, l1, l2, disk, net;
};

constexpr std::array<NparRow, 12> kNparRows{{
    {1, std::nullopt, 0.0020, 0.967, 0.08, 0.01, 0, 0},
    {2, std::nullopt, 0.0548, 0.885, 0.02, 0.12, 0, 0.08e9},
    {3, std::nullopt, 0.1835, 0.640, 0.01, 0.01, 0, 0},
    {4, std::nullopt, 0.0053, 0.900, 0.035, 0.03, 0, 0},
    {5, std::nullopt, 0.0275, 0.988, 0.02, 0.2, 0, 0.08e9},
    {6, std::nullopt, 0.1092, 0.571, 0.01, 0.01, 0, 0},
    {7, 1, 0.0050, 0.887, 0.08, 0.01, 0, 0},
    {8, 1, 0.0040, 0.920, 0.08, 0.01, 0, 0},
    {9, std::nullopt, 0.0027, 1.135, 0.06, 0.01, 1e9, 0},
    {10, std::nullopt, 0.0486, 1.021, 0.02, 0.06, 0, 0.14e9},
    {11, 4, 0.0248, 1.133, 0.035, 0.03, 0, 0},
    {12, std::nullopt, 0.3076, 0.776, 0.01, 0.01, 0, 0.70e9},
}};

constexpr double kNparProgramWall = 100.0;
constexpr double kNparCpuOverWall = 0.95;

constexpr std::array<OwnRow, 10> kInjectionRows{{
    {1, std::nullopt, 1.0, 0.9, 1.0, 0.02, 0.02, 0, 0},
    {2, 1, 22.0, 21.0, 1.0, 0.01, 0.01, 0, 0},
    {3, 1, 3.0, 2.8, 1.2, 0.06, 0.03, 0, 0},
    {4, std::nullopt, 22.0, 21.0, 1.0, 0.01, 0.01, 0, 0},
    {5, std::nullopt, 10.0, 9.5, 0.3, 0.01, 0.01, 0, 0},
    {6, std::nullopt, 12.0, 11.0, 1.5, 0.09, 0.12, 0, 0},
    {7, std::nullopt, 6.0, 5.5, 1.3, 0.04, 0.06, 0, 0},
    {8, std::nullopt, 4.0, 3.8, 1.1, 0.12, 0.18, 0, 0},
    {9, std::nullopt, 2.0, 1.9, 1.0, 0.03, 0.04, 0, 0},
    {10, std::nullopt, 1.0, 0.95, 0.9, 0.01, 0.01, 0, 0},
}};

} // namespace

Profile st_profile(bool network_variance)
{
    double lo = 1.0001;
    double hi = 3.0;
    while (hi - lo > 1e-15 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        (st_severity(mid) < kStSeverity ? lo : hi) = mid;
    }
    const double ratio = std::abs(st_severity(lo) - kStSeverity) <= std::abs(st_severity(hi) - kStSeverity) ? lo : hi;
    return st_build(ratio, network_variance);
}

Profile npar1way_profile()
{
    constexpr std::size_t processes = 8;
    std::vector<RegionDecl> decls;
    std::vector<CellParams> row;
    double top_level_wall = 0.0;
    for (const auto& r : kNparRows) {
        decls.push_back(RegionDecl{r.id, "region_" + std::to_string(r.id), r.parent, std::nullopt});
        CellParams p;
        p.wall_time = r.share * kNparProgramWall;
        p.cpu_time = p.wall_time * kNparCpuOverWall;
        p.cpi = r.cpi;
        p.l1_miss_rate = r.l1;
        p.l2_miss_rate = r.l2;
        p.disk_io_bytes = r.disk;
        p.net_io_bytes = r.net;
        row.push_back(p);
        top_level_wall += p.wall_time;
    }
    std::vector<CellParams> cells;
    for (std::size_t r = 0; r < processes; ++r)
        cells.insert(cells.end(), row.begin(), row.end());
    const std::vector<double> serial(processes, kNparProgramWall - top_level_wall);
    return assemble_profile(std::move(decls), cells, processes, kClockHz, serial);
}

SynthSpec injection_baseline()
{
    SynthSpec spec;
    spec.processes = 8;
    spec.clock_hz = kClockHz;
    spec.serial_time = 5.0;
    spec.noise = 0.01;
    for (const auto& row : kInjectionRows)
        spec.regions.push_back(RegionBaseline{row.id, "region_" + std::to_string(row.id), row.parent, cell_of(row)});
    return spec;
}

std::uint32_t injection_target(InjectionKind kind) { return kind == InjectionKind::LoadImbalance ? 2 : 4; }

std::size_t injection_attribute(InjectionKind kind)
{
    switch (kind) {
    case InjectionKind::HighL2Miss: return 1;
    case InjectionKind::HighDiskIo: return 2;
    case InjectionKind::HighNetIo: return 3;
    case InjectionKind::LoadImbalance:
    case InjectionKind::HighInstructionCount: return 4;
    }
    return 4;
}

SynthSpec injection_spec(InjectionKind kind)
{
    SynthSpec spec = injection_baseline();
    Injection inj;
    inj.kind = kind;
    inj.region = injection_target(kind);
    inj.factor = 3.0;
    switch (kind) {
    case InjectionKind::HighL2Miss: inj.value = 0.5; break;
    case InjectionKind::HighDiskIo: inj.value = 5e10; break;
    case InjectionKind::HighNetIo: inj.value = 2e9; break;
    default: break;
    }
    spec.injections.push_back(inj);
    return spec;
}

} // namespace spmdlens::fixtures
