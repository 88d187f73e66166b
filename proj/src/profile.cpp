#include "spmdlens/profile.hpp"

#include "spmdlens/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace spmdlens {

namespace {

using nlohmann::json;

constexpr double kIntegralTolerance = 1e-6;
constexpr double kCpuWallTolerance = 1e-9;

std::string region_label(RegionId id) { return "region " + std::to_string(id.value); }

// Converts a byte offset reported by the JSON parser into "line L, column C".
std::string position_of(std::string_view doc, std::size_t byte)
{
    byte = std::min(byte, doc.size());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < byte; ++i) {
        if (doc[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

const json& require(const json& obj, const char* key, const std::string& path)
{
    auto it = obj.find(key);
    if (it == obj.end())
        throw ParseError(path + ": missing field '" + key + "'");
    return *it;
}

double number_at(const json& value, const std::string& path)
{
    if (!value.is_number())
        throw ParseError(path + ": expected a number, got " + std::string(value.type_name()));
    const double v = value.get<double>();
    if (!std::isfinite(v))
        throw ParseError(path + ": non-finite number");
    return v;
}

std::int64_t integer_at(const json& value, const std::string& path)
{
    const double v = number_at(value, path);
    if (std::abs(v - std::round(v)) > kIntegralTolerance)
        throw ParseError(path + ": expected an integer, got " + value.dump());
    return static_cast<std::int64_t>(std::llround(v));
}

const json& array_at(const json& value, const std::string& path)
{
    if (!value.is_array())
        throw ParseError(path + ": expected an array, got " + std::string(value.type_name()));
    return value;
}

void check_count(double value, const char* field, std::size_t rank, RegionId region)
{
    if (value < 0.0)
        throw ValidationError("process " + std::to_string(rank) + ", " + region_label(region) + ": " + field
                              + " is negative");
    if (std::abs(value - std::round(value)) > kIntegralTolerance)
        throw ValidationError("process " + std::to_string(rank) + ", " + region_label(region) + ": " + field
                              + " is not integral");
}

void validate_cell(const RegionMetrics& m, std::size_t rank, RegionId region)
{
    const std::string where = "process " + std::to_string(rank) + ", " + region_label(region) + ": ";
    const std::pair<double, const char*> all[] = {
        {m.wall_time, "wall_time"},       {m.cpu_time, "cpu_time"},   {m.cycles, "cycles"},
        {m.instructions, "instructions"}, {m.l1_miss, "l1_miss"},     {m.l1_access, "l1_access"},
        {m.l2_miss, "l2_miss"},           {m.l2_access, "l2_access"}, {m.disk_io_bytes, "disk_io_bytes"},
        {m.net_io_bytes, "net_io_bytes"},
    };
    for (const auto& [value, name] : all)
        if (!std::isfinite(value))
            throw ValidationError(where + name + " is not finite");
    if (m.wall_time < 0.0)
        throw ValidationError(where + "wall_time is negative");
    if (m.cpu_time < 0.0)
        throw ValidationError(where + "cpu_time is negative");
    if (m.cpu_time > m.wall_time * (1.0 + kCpuWallTolerance))
        throw ValidationError(where + "cpu_time exceeds wall_time");
    check_count(m.cycles, "cycles", rank, region);
    check_count(m.instructions, "instructions", rank, region);
    check_count(m.l1_miss, "l1_miss", rank, region);
    check_count(m.l1_access, "l1_access", rank, region);
    check_count(m.l2_miss, "l2_miss", rank, region);
    check_count(m.l2_access, "l2_access", rank, region);
    check_count(m.disk_io_bytes, "disk_io_bytes", rank, region);
    check_count(m.net_io_bytes, "net_io_bytes", rank, region);
}

double ratio_or_zero(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

} // namespace

std::string_view to_string(MetricKind kind)
{
    switch (kind) {
    case MetricKind::CpuTime: return "cpu_time";
    case MetricKind::WallTime: return "wall_time";
    case MetricKind::L1MissRate: return "l1_miss_rate";
    case MetricKind::L2MissRate: return "l2_miss_rate";
    case MetricKind::DiskIo: return "disk_io";
    case MetricKind::NetIo: return "net_io";
    case MetricKind::Instructions: return "instructions";
    case MetricKind::Cpi: return "cpi";
    case MetricKind::Crnm: return "crnm";
    }
    return "unknown";
}

CodeRegionTree CodeRegionTree::build(std::vector<RegionDecl> decls)
{
    std::sort(decls.begin(), decls.end(), [](const RegionDecl& a, const RegionDecl& b) { return a.id < b.id; });

    std::map<std::uint32_t, RegionId> dense;
    for (std::size_t i = 0; i < decls.size(); ++i) {
        const auto& d = decls[i];
        if (d.id == 0)
            throw ValidationError("region ids must be positive");
        if (!dense.emplace(d.id, RegionId{static_cast<std::uint32_t>(i + 1)}).second)
            throw ValidationError("duplicate region id " + std::to_string(d.id));
    }

    CodeRegionTree tree;
    tree.nodes_.resize(decls.size());
    for (std::size_t i = 0; i < decls.size(); ++i) {
        const auto& d = decls[i];
        auto& node = tree.nodes_[i];
        node.id = RegionId{static_cast<std::uint32_t>(i + 1)};
        node.name = d.name;
        node.source_id = d.id;
        if (d.parent) {
            auto it = dense.find(*d.parent);
            if (it == dense.end())
                throw ValidationError("region " + std::to_string(d.id) + ": parent " + std::to_string(*d.parent)
                                      + " does not exist");
            if (it->second == node.id)
                throw ValidationError("region " + std::to_string(d.id) + " is its own parent");
            node.parent = it->second;
        }
    }

    // Depths by walking each parent chain; a chain longer than n is a cycle.
    for (auto& node : tree.nodes_) {
        int depth = 1;
        auto cur = node.parent;
        while (cur) {
            if (++depth > static_cast<int>(tree.nodes_.size()))
                throw ValidationError("region " + std::to_string(node.source_id) + " is part of a parent cycle");
            cur = tree.nodes_[cur->index()].parent;
        }
        node.depth = depth;
    }

    for (std::size_t i = 0; i < decls.size(); ++i) {
        const auto& node = tree.nodes_[i];
        if (decls[i].depth && *decls[i].depth != node.depth)
            throw ValidationError("region " + std::to_string(node.source_id) + ": declared depth "
                                  + std::to_string(*decls[i].depth) + " but parent chain gives depth "
                                  + std::to_string(node.depth));
        if (node.parent)
            tree.nodes_[node.parent->index()].children.push_back(node.id);
        else
            tree.top_level_.push_back(node.id);
    }
    return tree;
}

const CodeRegionNode& CodeRegionTree::node(RegionId id) const
{
    if (!contains(id))
        throw std::out_of_range("unknown region id " + std::to_string(id.value));
    return nodes_[id.index()];
}

std::vector<RegionId> CodeRegionTree::ids() const
{
    std::vector<RegionId> out;
    out.reserve(nodes_.size());
    for (const auto& n : nodes_)
        out.push_back(n.id);
    return out;
}

Profile::Profile(CodeRegionTree tree, std::vector<double> program_wall_time, std::vector<RegionMetrics> cells)
    : tree_(std::move(tree)), program_wall_time_(std::move(program_wall_time)), cells_(std::move(cells))
{
    const std::size_t m = program_wall_time_.size();
    const std::size_t n = tree_.size();
    if (m == 0)
        throw ValidationError("profile must contain at least one process");
    if (n == 0)
        throw ValidationError("profile must contain at least one code region");
    if (cells_.size() != m * n)
        throw ValidationError("metric table has " + std::to_string(cells_.size()) + " cells, expected "
                              + std::to_string(m * n));
    for (std::size_t r = 0; r < m; ++r) {
        if (!std::isfinite(program_wall_time_[r]) || program_wall_time_[r] < 0.0)
            throw ValidationError("program_wall_time of process " + std::to_string(r) + " is invalid");
        for (const auto& node : tree_.nodes())
            validate_cell(cells_[r * n + node.id.index()], r, node.id);
    }
}

const RegionMetrics& Profile::cell(std::size_t rank, RegionId region) const
{
    if (rank >= process_count())
        throw std::out_of_range("unknown process rank " + std::to_string(rank));
    if (!tree_.contains(region))
        throw std::out_of_range("unknown region id " + std::to_string(region.value));
    return cells_[rank * region_count() + region.index()];
}

double Profile::program_wall_time(std::size_t rank) const
{
    if (rank >= process_count())
        throw std::out_of_range("unknown process rank " + std::to_string(rank));
    return program_wall_time_[rank];
}

Profile ingest_profile(std::string_view document)
{
    json doc;
    try {
        doc = json::parse(document.begin(), document.end());
    } catch (const json::parse_error& e) {
        throw ParseError("malformed profile document at " + position_of(document, e.byte) + ": " + e.what());
    }
    if (!doc.is_object())
        throw ParseError("profile document must be a JSON object");

    const auto version = integer_at(require(doc, "version", "$"), "version");
    if (version != 1)
        throw ParseError("version: unsupported profile version " + std::to_string(version));

    std::vector<RegionDecl> decls;
    const auto& regions = array_at(require(doc, "regions", "$"), "regions");
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const std::string path = "regions[" + std::to_string(i) + "]";
        const auto& r = regions[i];
        if (!r.is_object())
            throw ParseError(path + ": expected an object");
        RegionDecl d;
        const auto id = integer_at(require(r, "id", path), path + ".id");
        if (id <= 0 || id > std::numeric_limits<std::uint32_t>::max())
            throw ValidationError(path + ".id: region ids must be positive, got " + std::to_string(id));
        d.id = static_cast<std::uint32_t>(id);
        const auto& name = require(r, "name", path);
        if (!name.is_string())
            throw ParseError(path + ".name: expected a string");
        d.name = name.get<std::string>();
        const auto& parent = require(r, "parent", path);
        if (!parent.is_null()) {
            const auto p = integer_at(parent, path + ".parent");
            if (p <= 0 || p > std::numeric_limits<std::uint32_t>::max())
                throw ValidationError(path + ".parent: region " + std::to_string(d.id) + " has invalid parent "
                                      + std::to_string(p));
            d.parent = static_cast<std::uint32_t>(p);
        }
        if (auto it = r.find("depth"); it != r.end())
            d.depth = static_cast<int>(integer_at(*it, path + ".depth"));
        decls.push_back(std::move(d));
    }
    auto tree = CodeRegionTree::build(std::move(decls));
    const std::size_t n = tree.size();

    const auto processes = integer_at(require(doc, "processes", "$"), "processes");
    if (processes < 1)
        throw ValidationError("processes: must be at least 1");
    const auto m = static_cast<std::size_t>(processes);

    const auto& pwt = array_at(require(doc, "program_wall_time", "$"), "program_wall_time");
    if (pwt.size() != m)
        throw ValidationError("program_wall_time: has " + std::to_string(pwt.size()) + " entries, expected "
                              + std::to_string(m));
    std::vector<double> program_wall_time;
    for (std::size_t r = 0; r < m; ++r)
        program_wall_time.push_back(number_at(pwt[r], "program_wall_time[" + std::to_string(r) + "]"));

    const auto& metrics = array_at(require(doc, "metrics", "$"), "metrics");
    if (metrics.size() != m)
        throw ValidationError("metrics: has " + std::to_string(metrics.size()) + " process rows, expected "
                              + std::to_string(m));
    std::vector<RegionMetrics> cells;
    cells.reserve(m * n);
    for (std::size_t r = 0; r < m; ++r) {
        const std::string row_path = "metrics[" + std::to_string(r) + "]";
        const auto& row = array_at(metrics[r], row_path);
        if (row.size() != n)
            throw ValidationError(row_path + ": has " + std::to_string(row.size()) + " region cells, expected "
                                  + std::to_string(n));
        for (std::size_t t = 0; t < n; ++t) {
            const std::string path = row_path + "[" + std::to_string(t) + "]";
            const auto& c = row[t];
            if (!c.is_object())
                throw ParseError(path + ": expected an object");
            auto field = [&](const char* key) { return number_at(require(c, key, path), path + "." + key); };
            RegionMetrics cell;
            cell.wall_time = field("wall_time");
            cell.cpu_time = field("cpu_time");
            cell.cycles = field("cycles");
            cell.instructions = field("instructions");
            cell.l1_miss = field("l1_miss");
            cell.l1_access = field("l1_access");
            cell.l2_miss = field("l2_miss");
            cell.l2_access = field("l2_access");
            cell.disk_io_bytes = field("disk_io_bytes");
            cell.net_io_bytes = field("net_io_bytes");
            cells.push_back(cell);
        }
    }
    return Profile(std::move(tree), std::move(program_wall_time), std::move(cells));
}

Profile load_profile(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::ios_base::failure("cannot open profile '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return ingest_profile(buf.str());
}

bool is_derived(MetricKind kind)
{
    return kind == MetricKind::L1MissRate || kind == MetricKind::L2MissRate || kind == MetricKind::Cpi
        || kind == MetricKind::Crnm;
}

double derived_metric(const RegionMetrics& m, MetricKind kind)
{
    switch (kind) {
    case MetricKind::L1MissRate: return ratio_or_zero(m.l1_miss, m.l1_miss + m.l1_access);
    case MetricKind::L2MissRate: return ratio_or_zero(m.l2_miss, m.l2_miss + m.l2_access);
    case MetricKind::Cpi: return ratio_or_zero(m.cycles, m.instructions);
    default: break;
    }
    throw std::invalid_argument("derived_metric: " + std::string(to_string(kind)) + " is not a per-cell derived metric");
}

double metric_value(const RegionMetrics& m, MetricKind kind, double program_wall_time)
{
    switch (kind) {
    case MetricKind::CpuTime: return m.cpu_time;
    case MetricKind::WallTime: return m.wall_time;
    case MetricKind::DiskIo: return m.disk_io_bytes;
    case MetricKind::NetIo: return m.net_io_bytes;
    case MetricKind::Instructions: return m.instructions;
    case MetricKind::Crnm:
        // Regions off the call path have no instructions and contribute 0.
        if (m.instructions == 0.0 || program_wall_time <= 0.0)
            return 0.0;
        return m.wall_time / program_wall_time * derived_metric(m, MetricKind::Cpi);
    default: return derived_metric(m, kind);
    }
}

PerfVector perf_vector(const Profile& profile, std::size_t rank, MetricKind kind)
{
    if (rank >= profile.process_count())
        throw std::out_of_range("unknown process rank " + std::to_string(rank));
    PerfVector v;
    v.owner = rank;
    v.values.reserve(profile.region_count());
    const double pwt = profile.program_wall_time(rank);
    for (const auto& node : profile.tree().nodes())
        v.values.push_back(metric_value(profile.cell(rank, node.id), kind, pwt));
    return v;
}

std::vector<PerfVector> perf_vectors(const Profile& profile, MetricKind kind)
{
    std::vector<PerfVector> out;
    out.reserve(profile.process_count());
    for (std::size_t r = 0; r < profile.process_count(); ++r)
        out.push_back(perf_vector(profile, r, kind));
    return out;
}

} // namespace spmdlens
