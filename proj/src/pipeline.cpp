#include "spmdlens/pipeline.hpp"

#include "spmdlens/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>

namespace spmdlens {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string fixed(double value, int decimals)
{
    std::ostringstream out;
    out << std::fixed << std::setprecision(decimals) << value;
    return out.str();
}

template <typename T>
std::string join(const std::vector<T>& items, std::string_view sep)
{
    std::ostringstream out;
    for (std::size_t i = 0; i < items.size(); ++i)
        out << (i ? sep : "") << items[i];
    return out.str();
}

CauseAnalysis run_causes(DecisionTable table, CauseMode mode)
{
    CauseAnalysis out;
    out.table = std::move(table);
    try {
        out.core = extract_core(build_discernibility(out.table));
        out.causes = root_cause_report(out.table, *out.core, mode);
    } catch (const AnalysisError& e) {
        out.core.reset();
        out.notice = e.what();
    }
    return out;
}

std::string cores_text(const CoreResult& core)
{
    std::vector<std::string> parts;
    for (auto c : core.cores)
        parts.push_back(format_attribute_set(c));
    return join(parts, " or ");
}

void render_causes(std::ostream& out, const CauseAnalysis& causes, std::string_view entry_word)
{
    if (!causes.core) {
        out << "core: none (" << causes.notice << ")\n";
        return;
    }
    out << "core: " << cores_text(*causes.core) << '\n';
    if (causes.core->conflicts > 0)
        out << "note: " << causes.core->conflicts << " conflicting entry pairs ignored\n";
    for (const auto& c : causes.causes) {
        std::vector<std::string> names;
        for (auto a : c.attributes)
            names.emplace_back(cause_name(a));
        out << entry_word << ' ' << c.entry_id << ": " << (names.empty() ? "none" : join(names, ", ")) << '\n';
    }
}

std::string ccr_tag(const CcrEntry& e)
{
    return std::to_string(e.level) + "-CCR" + (e.is_cccr ? " & CCCR" : "");
}

void render_external(std::ostream& out, const ExternalStage& ext)
{
    out << "Performance similarity\n";
    if (!ext.skipped.empty()) {
        out << "external analysis skipped: " << ext.skipped << '\n';
        return;
    }
    const auto& det = *ext.detection;
    const auto count = det.outcome.cluster_count();
    if (count == 1)
        out << "there is 1 kind of processes\n";
    else
        out << "there are " << count << " kinds of processes\n";
    for (std::size_t i = 0; i < count; ++i)
        out << "kind " << i << ": " << join(det.outcome.clusters()[i], " ") << '\n';
    if (!det.bottlenecks_exist)
        return;

    out << "dissimilarity severity, S: " << fixed(det.severity.value, 6) << '\n';
    if (det.severity.zero_length_excluded > 0)
        out << "note: " << det.severity.zero_length_excluded << " all-zero performance vectors left out of S\n";

    const auto& tree = *ext.tree;
    std::vector<std::string> cccrs;
    for (auto i : tree.cccr_indices())
        cccrs.push_back(entry_label(tree.entries[i]));
    out << "CCCR: " << (cccrs.empty() ? "none" : join(cccrs, ", ")) << '\n';
    out << "CCR tree:\n";
    if (tree.entries.empty())
        out << (tree.truncated ? "none found before the composite enumeration limit\n"
                               : "none found, composite regions exhausted\n");
    for (auto leaf : tree.cccr_indices()) {
        std::vector<std::size_t> path{leaf};
        while (tree.entries[path.back()].parent)
            path.push_back(*tree.entries[path.back()].parent);
        std::reverse(path.begin(), path.end());
        std::vector<std::string> steps;
        for (auto i : path)
            steps.push_back(entry_label(tree.entries[i]) + " (" + ccr_tag(tree.entries[i]) + ")");
        out << join(steps, " ---> ") << '\n';
    }
    if (tree.composite_size > 0)
        out << "found among composites of " << tree.composite_size << " depth-1 regions\n";
    if (tree.overlap)
        out << "note: a depth-1 region belongs to more than one composite CCR\n";

    if (ext.causes) {
        std::vector<std::uint32_t> ids;
        for (auto id : ext.cause_regions)
            ids.push_back(id.value);
        out << "\nExternal root causes\n";
        out << "regions: " << join(ids, ", ") << '\n';
        render_causes(out, *ext.causes, "process");
    }
}

void render_internal(std::ostream& out, const InternalStage& in)
{
    const auto& r = in.result;
    out << "\nCode region severity\n";
    for (int c = 4; c >= 0; --c) {
        const auto category = static_cast<SeverityCategory>(c);
        std::vector<const CrnmRecord*> members;
        for (const auto& rec : r.records)
            if (r.category(rec.region) == category)
                members.push_back(&rec);
        std::stable_sort(members.begin(), members.end(), [](const CrnmRecord* a, const CrnmRecord* b) {
            return a->average != b->average ? a->average > b->average : a->region < b->region;
        });
        std::vector<std::uint32_t> ids;
        for (const auto* rec : members)
            ids.push_back(rec->region.value);
        out << to_string(category) << ':' << (ids.empty() ? "" : " " + join(ids, ", ")) << '\n';
    }
    if (r.degenerate)
        out << "note: fewer than five severity levels are populated\n";
    auto ids_of = [](const std::vector<RegionId>& v) {
        std::vector<std::uint32_t> ids;
        for (auto id : v)
            ids.push_back(id.value);
        return ids.empty() ? std::string("none") : join(ids, ", ");
    };
    out << "CCR: " << ids_of(r.ccrs) << '\n';
    out << "CCCR: " << ids_of(r.cccrs) << '\n';

    out << "\nCRNM\n";
    out << "region  average\n";
    for (const auto& rec : r.records)
        out << std::left << std::setw(8) << rec.region.value << fixed(rec.average, 4) << '\n';

    out << "\nInternal root causes\n";
    render_causes(out, in.causes, "region");
}

// --- result document -------------------------------------------------------

ordered_json set_json(AttributeSet s)
{
    ordered_json out = ordered_json::array();
    for (std::size_t a = 0; a < kMaxAttributes; ++a)
        if (s & (AttributeSet{1} << a))
            out.push_back("a" + std::to_string(a + 1));
    return out;
}

AttributeSet set_from(const json& j)
{
    AttributeSet out = 0;
    for (const auto& name : j) {
        const auto s = name.get<std::string>();
        if (s.size() < 2 || s[0] != 'a')
            throw ParseError("bad attribute name '" + s + "'");
        const auto index = std::stoul(s.substr(1));
        if (index < 1 || index > kMaxAttributes)
            throw ParseError("bad attribute name '" + s + "'");
        out |= AttributeSet{1} << (index - 1);
    }
    return out;
}

ordered_json table_json(const DecisionTable& t)
{
    ordered_json out;
    out["attributes"] = t.attribute_names;
    out["entries"] = ordered_json::array();
    for (const auto& e : t.entries)
        out["entries"].push_back(ordered_json{{"id", e.id}, {"values", e.values}, {"decision", e.decision}});
    return out;
}

DecisionTable table_from(const json& j)
{
    DecisionTable t;
    t.attribute_names = j.at("attributes").get<std::vector<std::string>>();
    for (const auto& e : j.at("entries"))
        t.entries.push_back(DecisionEntry{e.at("id").get<std::uint32_t>(), e.at("values").get<std::vector<int>>(),
                                          e.at("decision").get<int>()});
    return t;
}

ordered_json causes_json(const CauseAnalysis& c)
{
    ordered_json out;
    out["table"] = table_json(c.table);
    if (c.core) {
        ordered_json core;
        core["cores"] = ordered_json::array();
        for (auto s : c.core->cores)
            core["cores"].push_back(set_json(s));
        core["singleton_core"] = set_json(c.core->singleton_core);
        core["clauses"] = ordered_json::array();
        for (auto s : c.core->clauses)
            core["clauses"].push_back(set_json(s));
        core["conflicts"] = c.core->conflicts;
        out["core"] = core;
    } else {
        out["core"] = nullptr;
        out["notice"] = c.notice;
    }
    out["causes"] = ordered_json::array();
    for (const auto& rc : c.causes) {
        ordered_json names = ordered_json::array();
        for (auto a : rc.attributes)
            names.push_back("a" + std::to_string(a + 1));
        out["causes"].push_back(ordered_json{{"entry", rc.entry_id}, {"attributes", names}});
    }
    return out;
}

CauseAnalysis causes_from(const json& j)
{
    CauseAnalysis c;
    c.table = table_from(j.at("table"));
    if (!j.at("core").is_null()) {
        const auto& core = j.at("core");
        CoreResult r;
        for (const auto& s : core.at("cores"))
            r.cores.push_back(set_from(s));
        r.singleton_core = set_from(core.at("singleton_core"));
        for (const auto& s : core.at("clauses"))
            r.clauses.push_back(set_from(s));
        r.conflicts = core.at("conflicts").get<std::size_t>();
        c.core = r;
    } else {
        c.notice = j.at("notice").get<std::string>();
    }
    for (const auto& rc : j.at("causes")) {
        RootCause cause;
        cause.entry_id = rc.at("entry").get<std::uint32_t>();
        for (const auto& a : rc.at("attributes")) {
            const auto s = a.get<std::string>();
            cause.attributes.push_back(std::stoul(s.substr(1)) - 1);
        }
        c.causes.push_back(std::move(cause));
    }
    return c;
}

ordered_json ids_json(const std::vector<RegionId>& ids)
{
    ordered_json out = ordered_json::array();
    for (auto id : ids)
        out.push_back(id.value);
    return out;
}

std::vector<RegionId> ids_from(const json& j)
{
    std::vector<RegionId> out;
    for (const auto& v : j)
        out.push_back(RegionId{v.get<std::uint32_t>()});
    return out;
}

SeverityCategory category_from(const std::string& name)
{
    for (int c = 0; c <= 4; ++c)
        if (to_string(static_cast<SeverityCategory>(c)) == name)
            return static_cast<SeverityCategory>(c);
    throw ParseError("unknown severity category '" + name + "'");
}

} // namespace

void AnalysisConfig::validate() const
{
    if (!(density.threshold_fraction > 0.0 && density.threshold_fraction < 1.0))
        throw ValidationError("threshold fraction must lie strictly between 0 and 1");
    if (density.count_threshold < 1)
        throw ValidationError("count threshold must be at least 1");
}

std::string entry_label(const CcrEntry& entry)
{
    std::vector<std::uint32_t> ids;
    for (auto id : entry.members)
        ids.push_back(id.value);
    return "region " + join(ids, "+");
}

AnalysisResult analyze(const Profile& profile, const AnalysisConfig& config)
{
    config.validate();
    AnalysisResult out;
    out.processes = profile.process_count();
    out.regions = profile.region_count();
    out.config = config;

    auto& ext = out.external;
    if (profile.process_count() < 2) {
        ext.skipped = "single-process profile";
    } else {
        ext.detection = detect_external(profile, config.density);
        if (ext.detection->bottlenecks_exist) {
            ext.tree = search_external(profile, config.density);
            std::set<RegionId> regions;
            for (auto i : ext.tree->cccr_indices())
                for (auto id : ext.tree->entries[i].members)
                    regions.insert(id);
            ext.cause_regions.assign(regions.begin(), regions.end());
            if (!regions.empty())
                ext.causes = run_causes(external_decision_table(profile, ext.cause_regions, config.density),
                                        CauseMode::External);
        }
    }

    out.internal.result = find_internal(profile);
    out.internal.causes = run_causes(internal_decision_table(profile, out.internal.result), CauseMode::Internal);
    return out;
}

std::string render_report(const AnalysisResult& result)
{
    std::ostringstream out;
    render_external(out, result.external);
    render_internal(out, result.internal);
    return out.str();
}

std::string result_to_json(const AnalysisResult& r)
{
    ordered_json doc;
    doc["version"] = 1;
    doc["processes"] = r.processes;
    doc["regions"] = r.regions;
    doc["threshold_fraction"] = r.config.density.threshold_fraction;
    doc["count_threshold"] = r.config.density.count_threshold;

    ordered_json ext;
    if (!r.external.skipped.empty()) {
        ext["skipped"] = r.external.skipped;
    } else {
        const auto& det = *r.external.detection;
        ext["clusters"] = det.outcome.clusters();
        ext["severity"] = det.severity.value;
        ext["zero_length_excluded"] = det.severity.zero_length_excluded;
        ext["bottlenecks_exist"] = det.bottlenecks_exist;
        if (r.external.tree) {
            const auto& t = *r.external.tree;
            ordered_json tree;
            tree["entries"] = ordered_json::array();
            for (const auto& e : t.entries) {
                ordered_json o;
                o["members"] = ids_json(e.members);
                o["level"] = e.level;
                o["cccr"] = e.is_cccr;
                o["parent"] = e.parent ? ordered_json(*e.parent) : ordered_json(nullptr);
                tree["entries"].push_back(std::move(o));
            }
            tree["composite_size"] = t.composite_size;
            tree["exhausted"] = t.exhausted;
            tree["truncated"] = t.truncated;
            tree["overlap"] = t.overlap;
            ext["search"] = std::move(tree);
        } else {
            ext["search"] = nullptr;
        }
        ext["cause_regions"] = ids_json(r.external.cause_regions);
        ext["root_causes"] = r.external.causes ? causes_json(*r.external.causes) : ordered_json(nullptr);
    }
    doc["external"] = std::move(ext);

    const auto& in = r.internal.result;
    ordered_json internal;
    internal["records"] = ordered_json::array();
    for (const auto& rec : in.records)
        internal["records"].push_back(ordered_json{{"region", rec.region.value}, {"category", to_string(in.category(rec.region))},
                                                   {"average", rec.average}, {"per_process", rec.per_process}});
    internal["ccrs"] = ids_json(in.ccrs);
    internal["cccrs"] = ids_json(in.cccrs);
    internal["degenerate"] = in.degenerate;
    internal["root_causes"] = causes_json(r.internal.causes);
    doc["internal"] = std::move(internal);
    return doc.dump(2) + "\n";
}

AnalysisResult result_from_json(std::string_view document)
{
    json doc;
    try {
        doc = json::parse(document.begin(), document.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed result document: ") + e.what());
    }
    try {
        if (doc.at("version").get<int>() != 1)
            throw ParseError("unsupported result document version");
        AnalysisResult r;
        r.processes = doc.at("processes").get<std::size_t>();
        r.regions = doc.at("regions").get<std::size_t>();
        r.config.density.threshold_fraction = doc.at("threshold_fraction").get<double>();
        r.config.density.count_threshold = doc.at("count_threshold").get<int>();

        const auto& ext = doc.at("external");
        if (ext.contains("skipped")) {
            r.external.skipped = ext.at("skipped").get<std::string>();
        } else {
            ExternalDetection det;
            det.outcome = ClusteringOutcome(ext.at("clusters").get<std::vector<std::vector<std::size_t>>>());
            det.severity.value = ext.at("severity").get<double>();
            det.severity.zero_length_excluded = ext.at("zero_length_excluded").get<std::size_t>();
            det.bottlenecks_exist = ext.at("bottlenecks_exist").get<bool>();
            r.external.detection = det;
            if (!ext.at("search").is_null()) {
                const auto& s = ext.at("search");
                CcrTree t;
                for (const auto& e : s.at("entries")) {
                    CcrEntry entry;
                    entry.members = ids_from(e.at("members"));
                    entry.level = e.at("level").get<int>();
                    entry.is_cccr = e.at("cccr").get<bool>();
                    if (!e.at("parent").is_null())
                        entry.parent = e.at("parent").get<std::size_t>();
                    t.entries.push_back(std::move(entry));
                }
                t.composite_size = s.at("composite_size").get<std::size_t>();
                t.exhausted = s.at("exhausted").get<bool>();
                t.truncated = s.at("truncated").get<bool>();
                t.overlap = s.at("overlap").get<bool>();
                r.external.tree = std::move(t);
            }
            r.external.cause_regions = ids_from(ext.at("cause_regions"));
            if (!ext.at("root_causes").is_null())
                r.external.causes = causes_from(ext.at("root_causes"));
        }

        const auto& in = doc.at("internal");
        auto& res = r.internal.result;
        for (const auto& rec : in.at("records")) {
            CrnmRecord c;
            c.region = RegionId{rec.at("region").get<std::uint32_t>()};
            c.average = rec.at("average").get<double>();
            c.per_process = rec.at("per_process").get<std::vector<double>>();
            res.categories.push_back(category_from(rec.at("category").get<std::string>()));
            res.records.push_back(std::move(c));
        }
        res.ccrs = ids_from(in.at("ccrs"));
        res.cccrs = ids_from(in.at("cccrs"));
        res.degenerate = in.at("degenerate").get<bool>();
        r.internal.causes = causes_from(in.at("root_causes"));
        return r;
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid result document: ") + e.what());
    }
}

std::string render_tables(const Profile& profile, const AnalysisConfig& config)
{
    config.validate();
    std::ostringstream out;
    if (profile.process_count() >= 2) {
        const auto det = detect_external(profile, config.density);
        std::vector<RegionId> regions;
        if (det.bottlenecks_exist) {
            const auto tree = search_external(profile, config.density);
            std::set<RegionId> set;
            for (auto i : tree.cccr_indices())
                for (auto id : tree.entries[i].members)
                    set.insert(id);
            regions.assign(set.begin(), set.end());
        }
        if (regions.empty()) {
            out << "External decision table: no external CCCR\n";
        } else {
            std::vector<std::uint32_t> ids;
            for (auto id : regions)
                ids.push_back(id.value);
            const auto table = external_decision_table(profile, regions, config.density);
            out << "External decision table (regions " << join(ids, ", ") << ")\n"
                << render_table(table) << "\nExternal discernibility matrix\n"
                << render_matrix(build_discernibility(table));
        }
    } else {
        out << "External decision table: single-process profile\n";
    }
    const auto internal = find_internal(profile);
    const auto table = internal_decision_table(profile, internal);
    out << "\nInternal decision table\n"
        << render_table(table) << "\nInternal discernibility matrix\n"
        << render_matrix(build_discernibility(table));
    return out.str();
}

} // namespace spmdlens
