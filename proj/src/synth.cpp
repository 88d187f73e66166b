#include "spmdlens/synth.hpp"

#include "spmdlens/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace spmdlens {

std::uint64_t SplitMix64::next()
{
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

RegionMetrics own_metrics(const CellParams& p, double clock_hz)
{
    RegionMetrics m;
    m.wall_time = p.wall_time;
    m.cpu_time = std::min(p.cpu_time, p.wall_time);
    m.cycles = std::round(m.cpu_time * clock_hz);
    m.instructions = p.cpi > 0.0 ? std::round(m.cycles / p.cpi) : 0.0;
    const double l1_refs = std::round(p.l1_refs_per_instruction * m.instructions);
    m.l1_miss = std::round(std::clamp(p.l1_miss_rate, 0.0, 1.0) * l1_refs);
    m.l1_access = l1_refs - m.l1_miss;
    const double l2_refs = std::round(p.l2_refs_per_instruction * m.instructions);
    m.l2_miss = std::round(std::clamp(p.l2_miss_rate, 0.0, 1.0) * l2_refs);
    m.l2_access = l2_refs - m.l2_miss;
    m.disk_io_bytes = std::round(p.disk_io_bytes);
    m.net_io_bytes = std::round(p.net_io_bytes);
    return m;
}

void accumulate(RegionMetrics& into, const RegionMetrics& add)
{
    into.wall_time += add.wall_time;
    into.cpu_time += add.cpu_time;
    into.cycles += add.cycles;
    into.instructions += add.instructions;
    into.l1_miss += add.l1_miss;
    into.l1_access += add.l1_access;
    into.l2_miss += add.l2_miss;
    into.l2_access += add.l2_access;
    into.disk_io_bytes += add.disk_io_bytes;
    into.net_io_bytes += add.net_io_bytes;
}

const json& field(const json& obj, const char* key, const std::string& path)
{
    auto it = obj.find(key);
    if (it == obj.end())
        throw ParseError(path + ": missing field '" + key + "'");
    return *it;
}

double number(const json& v, const std::string& path)
{
    if (!v.is_number())
        throw ParseError(path + ": expected a number");
    return v.get<double>();
}

double number_or(const json& obj, const char* key, double fallback, const std::string& path)
{
    auto it = obj.find(key);
    return it == obj.end() ? fallback : number(*it, path + "." + key);
}

std::uint64_t whole(const json& v, const std::string& path)
{
    const double d = number(v, path);
    if (d < 0 || d != std::floor(d))
        throw ParseError(path + ": expected a non-negative integer");
    return static_cast<std::uint64_t>(d);
}

void check(bool ok, const std::string& message)
{
    if (!ok)
        throw ValidationError(message);
}

bool in_unit(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }
bool non_negative(double v) { return std::isfinite(v) && v >= 0.0; }

} // namespace

Profile assemble_profile(std::vector<RegionDecl> regions, std::span<const CellParams> exclusive,
                         std::size_t processes, double clock_hz, std::span<const double> serial_time)
{
    auto tree = CodeRegionTree::build(std::move(regions));
    const std::size_t n = tree.size();
    if (exclusive.size() != processes * n)
        throw ValidationError("expected " + std::to_string(processes * n) + " exclusive cells, got "
                              + std::to_string(exclusive.size()));
    if (serial_time.size() != processes)
        throw ValidationError("expected one serial time per process");

    // Deepest regions first so children are complete before their parents.
    std::vector<RegionId> order = tree.ids();
    std::stable_sort(order.begin(), order.end(),
                     [&](RegionId a, RegionId b) { return tree.node(a).depth > tree.node(b).depth; });

    std::vector<RegionMetrics> cells(processes * n);
    std::vector<double> program_wall(processes, 0.0);
    for (std::size_t r = 0; r < processes; ++r) {
        RegionMetrics* row = cells.data() + r * n;
        for (std::size_t i = 0; i < n; ++i)
            row[i] = own_metrics(exclusive[r * n + i], clock_hz);
        for (auto id : order)
            for (auto child : tree.node(id).children)
                accumulate(row[id.index()], row[child.index()]);
        double wall = serial_time[r];
        for (auto id : tree.top_level())
            wall += row[id.index()].wall_time;
        program_wall[r] = wall;
    }
    return Profile(std::move(tree), std::move(program_wall), std::move(cells));
}

std::string_view to_string(InjectionKind kind)
{
    switch (kind) {
    case InjectionKind::LoadImbalance: return "load_imbalance";
    case InjectionKind::HighL2Miss: return "high_l2_miss";
    case InjectionKind::HighDiskIo: return "high_disk_io";
    case InjectionKind::HighNetIo: return "high_net_io";
    case InjectionKind::HighInstructionCount: return "high_instruction_count";
    }
    return "unknown";
}

InjectionKind injection_kind_from_string(std::string_view name)
{
    for (auto kind : {InjectionKind::LoadImbalance, InjectionKind::HighL2Miss, InjectionKind::HighDiskIo,
                      InjectionKind::HighNetIo, InjectionKind::HighInstructionCount})
        if (to_string(kind) == name)
            return kind;
    throw ParseError("unknown injection kind '" + std::string(name) + "'");
}

void SynthSpec::validate() const
{
    check(processes >= 1, "processes must be at least 1");
    check(std::isfinite(clock_hz) && clock_hz > 0.0, "clock_hz must be positive");
    check(non_negative(serial_time), "serial_time must be non-negative");
    check(std::isfinite(noise) && noise >= 0.0 && noise < 1.0, "noise must lie in [0, 1)");
    check(!regions.empty(), "a spec needs at least one region");

    std::set<std::uint32_t> ids;
    for (const auto& r : regions) {
        const std::string where = "region " + std::to_string(r.id) + ": ";
        check(r.id > 0, "region ids must be positive");
        check(ids.insert(r.id).second, "duplicate region id " + std::to_string(r.id));
        const auto& p = r.own;
        check(non_negative(p.wall_time), where + "wall_time must be non-negative");
        check(non_negative(p.cpu_time), where + "cpu_time must be non-negative");
        check(std::isfinite(p.cpi) && p.cpi > 0.0, where + "cpi must be positive");
        check(in_unit(p.l1_miss_rate), where + "l1_miss_rate must lie in [0, 1]");
        check(in_unit(p.l2_miss_rate), where + "l2_miss_rate must lie in [0, 1]");
        check(non_negative(p.l1_refs_per_instruction), where + "l1_refs_per_instruction must be non-negative");
        check(non_negative(p.l2_refs_per_instruction), where + "l2_refs_per_instruction must be non-negative");
        check(non_negative(p.disk_io_bytes), where + "disk_io_bytes must be non-negative");
        check(non_negative(p.net_io_bytes), where + "net_io_bytes must be non-negative");
    }
    for (const auto& r : regions)
        check(!r.parent || ids.count(*r.parent), "region " + std::to_string(r.id) + ": parent "
                                                     + std::to_string(r.parent.value_or(0)) + " does not exist");

    for (const auto& inj : injections) {
        const std::string where = std::string(to_string(inj.kind)) + " injection on region "
            + std::to_string(inj.region) + ": ";
        check(ids.count(inj.region) > 0, where + "region does not exist");
        check(std::isfinite(inj.factor) && inj.factor > 0.0, where + "factor must be positive");
        for (auto rank : inj.ranks)
            check(rank < processes, where + "rank " + std::to_string(rank) + " is out of range");
        if (inj.value) {
            switch (inj.kind) {
            case InjectionKind::HighL2Miss: check(in_unit(*inj.value), where + "miss rate must lie in [0, 1]"); break;
            case InjectionKind::HighDiskIo:
            case InjectionKind::HighNetIo: check(non_negative(*inj.value), where + "bytes must be non-negative"); break;
            default: check(false, where + "this kind takes no value");
            }
        }
    }
}

SynthSpec parse_synth_spec(std::string_view document)
{
    json doc;
    try {
        doc = json::parse(document.begin(), document.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed synth spec: ") + e.what());
    }
    if (!doc.is_object())
        throw ParseError("synth spec must be a JSON object");

    SynthSpec spec;
    spec.processes = whole(field(doc, "processes", "$"), "processes");
    spec.clock_hz = number_or(doc, "clock_hz", spec.clock_hz, "$");
    spec.serial_time = number_or(doc, "serial_time", spec.serial_time, "$");
    spec.noise = number_or(doc, "noise", spec.noise, "$");

    const auto& regions = field(doc, "regions", "$");
    if (!regions.is_array())
        throw ParseError("regions: expected an array");
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const std::string path = "regions[" + std::to_string(i) + "]";
        const auto& r = regions[i];
        if (!r.is_object())
            throw ParseError(path + ": expected an object");
        RegionBaseline b;
        b.id = static_cast<std::uint32_t>(whole(field(r, "id", path), path + ".id"));
        if (auto it = r.find("name"); it != r.end()) {
            if (!it->is_string())
                throw ParseError(path + ".name: expected a string");
            b.name = it->get<std::string>();
        } else {
            b.name = "region " + std::to_string(b.id);
        }
        if (auto it = r.find("parent"); it != r.end() && !it->is_null())
            b.parent = static_cast<std::uint32_t>(whole(*it, path + ".parent"));
        auto& p = b.own;
        p.wall_time = number(field(r, "wall_time", path), path + ".wall_time");
        p.cpu_time = number(field(r, "cpu_time", path), path + ".cpu_time");
        p.cpi = number_or(r, "cpi", p.cpi, path);
        p.l1_miss_rate = number_or(r, "l1_miss_rate", p.l1_miss_rate, path);
        p.l2_miss_rate = number_or(r, "l2_miss_rate", p.l2_miss_rate, path);
        p.l1_refs_per_instruction = number_or(r, "l1_refs_per_instruction", p.l1_refs_per_instruction, path);
        p.l2_refs_per_instruction = number_or(r, "l2_refs_per_instruction", p.l2_refs_per_instruction, path);
        p.disk_io_bytes = number_or(r, "disk_io_bytes", p.disk_io_bytes, path);
        p.net_io_bytes = number_or(r, "net_io_bytes", p.net_io_bytes, path);
        spec.regions.push_back(std::move(b));
    }

    if (auto it = doc.find("injections"); it != doc.end()) {
        if (!it->is_array())
            throw ParseError("injections: expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const std::string path = "injections[" + std::to_string(i) + "]";
            const auto& j = (*it)[i];
            if (!j.is_object())
                throw ParseError(path + ": expected an object");
            Injection inj;
            const auto& kind = field(j, "kind", path);
            if (!kind.is_string())
                throw ParseError(path + ".kind: expected a string");
            inj.kind = injection_kind_from_string(kind.get<std::string>());
            inj.region = static_cast<std::uint32_t>(whole(field(j, "region", path), path + ".region"));
            inj.factor = number_or(j, "factor", inj.factor, path);
            if (auto v = j.find("value"); v != j.end() && !v->is_null())
                inj.value = number(*v, path + ".value");
            if (auto ranks = j.find("ranks"); ranks != j.end()) {
                if (!ranks->is_array())
                    throw ParseError(path + ".ranks: expected an array");
                for (std::size_t k = 0; k < ranks->size(); ++k)
                    inj.ranks.push_back(whole((*ranks)[k], path + ".ranks[" + std::to_string(k) + "]"));
            }
            spec.injections.push_back(std::move(inj));
        }
    }
    spec.validate();
    return spec;
}

std::string emit_synth_spec(const SynthSpec& spec)
{
    ordered_json doc;
    doc["processes"] = spec.processes;
    doc["clock_hz"] = spec.clock_hz;
    doc["serial_time"] = spec.serial_time;
    doc["noise"] = spec.noise;
    doc["regions"] = ordered_json::array();
    for (const auto& r : spec.regions) {
        ordered_json o;
        o["id"] = r.id;
        o["name"] = r.name;
        o["parent"] = r.parent ? ordered_json(*r.parent) : ordered_json(nullptr);
        o["wall_time"] = r.own.wall_time;
        o["cpu_time"] = r.own.cpu_time;
        o["cpi"] = r.own.cpi;
        o["l1_miss_rate"] = r.own.l1_miss_rate;
        o["l2_miss_rate"] = r.own.l2_miss_rate;
        o["l1_refs_per_instruction"] = r.own.l1_refs_per_instruction;
        o["l2_refs_per_instruction"] = r.own.l2_refs_per_instruction;
        o["disk_io_bytes"] = r.own.disk_io_bytes;
        o["net_io_bytes"] = r.own.net_io_bytes;
        doc["regions"].push_back(std::move(o));
    }
    doc["injections"] = ordered_json::array();
    for (const auto& inj : spec.injections) {
        ordered_json o;
        o["kind"] = to_string(inj.kind);
        o["region"] = inj.region;
        o["factor"] = inj.factor;
        if (inj.value)
            o["value"] = *inj.value;
        o["ranks"] = inj.ranks;
        doc["injections"].push_back(std::move(o));
    }
    return doc.dump(2) + "\n";
}

Profile generate(const SynthSpec& spec, std::uint64_t seed)
{
    spec.validate();
    std::vector<RegionBaseline> regions = spec.regions;
    std::sort(regions.begin(), regions.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    std::map<std::uint32_t, std::size_t> index;
    std::vector<RegionDecl> decls;
    for (std::size_t i = 0; i < regions.size(); ++i) {
        index[regions[i].id] = i;
        decls.push_back(RegionDecl{regions[i].id, regions[i].name, regions[i].parent, std::nullopt});
    }

    const std::size_t m = spec.processes;
    const std::size_t n = regions.size();
    std::vector<CellParams> cells(m * n);
    SplitMix64 rng(seed);
    auto jitter = [&] { return 1.0 + spec.noise * (2.0 * rng.uniform() - 1.0); };
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t i = 0; i < n; ++i) {
            CellParams p = regions[i].own;
            p.wall_time *= jitter();
            p.cpu_time *= jitter();
            p.cpi *= jitter();
            p.l1_miss_rate = std::min(1.0, p.l1_miss_rate * jitter());
            p.l2_miss_rate = std::min(1.0, p.l2_miss_rate * jitter());
            p.disk_io_bytes *= jitter();
            p.net_io_bytes *= jitter();
            cells[r * n + i] = p;
        }
    }

    for (const auto& inj : spec.injections) {
        std::vector<std::size_t> ranks = inj.ranks;
        if (ranks.empty()) {
            const std::size_t first = inj.kind == InjectionKind::LoadImbalance ? m / 2 : 0;
            for (std::size_t r = first; r < m; ++r)
                ranks.push_back(r);
        }
        const double f = inj.factor;
        for (auto r : ranks) {
            CellParams& p = cells[r * n + index.at(inj.region)];
            switch (inj.kind) {
            case InjectionKind::LoadImbalance:
            case InjectionKind::HighInstructionCount:
                p.cpu_time *= f;
                p.wall_time *= f;
                break;
            case InjectionKind::HighL2Miss:
                p.l2_miss_rate = inj.value ? *inj.value : std::min(p.l2_miss_rate * f, 0.95);
                p.cpu_time *= f;
                p.wall_time *= f;
                p.cpi *= f;
                break;
            case InjectionKind::HighDiskIo:
                p.disk_io_bytes = inj.value ? *inj.value : p.disk_io_bytes * f;
                p.wall_time *= f;
                break;
            case InjectionKind::HighNetIo:
                p.net_io_bytes = inj.value ? *inj.value : p.net_io_bytes * f;
                p.wall_time *= f;
                break;
            }
        }
    }

    const std::vector<double> serial(m, spec.serial_time);
    return assemble_profile(std::move(decls), cells, m, spec.clock_hz, serial);
}

std::string emit_fixture(const Profile& profile)
{
    const auto& tree = profile.tree();
    ordered_json doc;
    doc["version"] = 1;
    doc["regions"] = ordered_json::array();
    for (const auto& node : tree.nodes()) {
        ordered_json r;
        r["id"] = node.source_id;
        r["name"] = node.name;
        r["parent"] = node.parent ? ordered_json(tree.node(*node.parent).source_id) : ordered_json(nullptr);
        r["depth"] = node.depth;
        doc["regions"].push_back(std::move(r));
    }
    doc["processes"] = profile.process_count();
    doc["program_wall_time"] = std::vector<double>(profile.program_wall_times().begin(),
                                                   profile.program_wall_times().end());
    // Counts are validated integral on ingestion, so they are written as integers.
    auto count = [](double v) { return static_cast<std::uint64_t>(v); };
    doc["metrics"] = ordered_json::array();
    for (std::size_t rank = 0; rank < profile.process_count(); ++rank) {
        ordered_json row = ordered_json::array();
        for (const auto& node : tree.nodes()) {
            const auto& c = profile.cell(rank, node.id);
            ordered_json o;
            o["wall_time"] = c.wall_time;
            o["cpu_time"] = c.cpu_time;
            o["cycles"] = count(c.cycles);
            o["instructions"] = count(c.instructions);
            o["l1_miss"] = count(c.l1_miss);
            o["l1_access"] = count(c.l1_access);
            o["l2_miss"] = count(c.l2_miss);
            o["l2_access"] = count(c.l2_access);
            o["disk_io_bytes"] = count(c.disk_io_bytes);
            o["net_io_bytes"] = count(c.net_io_bytes);
            row.push_back(std::move(o));
        }
        doc["metrics"].push_back(std::move(row));
    }
    return doc.dump(2) + "\n";
}

} // namespace spmdlens
