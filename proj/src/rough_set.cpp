#include "spmdlens/rough_set.hpp"

#include "spmdlens/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace spmdlens {

namespace {

constexpr std::array<MetricKind, 5> kCauseKinds = {
    MetricKind::L1MissRate, MetricKind::L2MissRate, MetricKind::DiskIo, MetricKind::NetIo, MetricKind::Instructions,
};

constexpr std::array<std::string_view, 5> kCauseNames = {
    "L1 cache miss rate", "L2 cache miss rate", "disk I/O quantity", "network I/O quantity",
    "executing instruction number",
};

std::vector<std::string> short_names(std::size_t count)
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < count; ++i)
        out.push_back("a" + std::to_string(i + 1));
    return out;
}

// Most frequent value; ties go to the smallest.
int majority(const std::vector<int>& values)
{
    std::map<int, std::size_t> counts;
    for (int v : values)
        ++counts[v];
    int best = 0;
    std::size_t best_count = 0;
    for (const auto& [v, c] : counts)
        if (c > best_count)
            best = v, best_count = c;
    return best;
}

std::string pad(const std::string& s, std::size_t width) { return s + std::string(width - s.size(), ' '); }

std::string render_grid(const std::vector<std::vector<std::string>>& rows)
{
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        widths.resize(std::max(widths.size(), row.size()), 0);
        for (std::size_t c = 0; c < row.size(); ++c)
            widths[c] = std::max(widths[c], row[c].size());
    }
    std::ostringstream out;
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c)
            line += c + 1 == row.size() ? row[c] : pad(row[c], widths[c] + 2);
        while (!line.empty() && line.back() == ' ')
            line.pop_back();
        out << line << '\n';
    }
    return out.str();
}

} // namespace

void DecisionTable::validate() const
{
    if (attribute_names.size() > kMaxAttributes)
        throw ValidationError("decision tables support at most " + std::to_string(kMaxAttributes) + " attributes");
    for (const auto& e : entries) {
        if (e.values.size() != attribute_names.size())
            throw ValidationError("entry " + std::to_string(e.id) + " has " + std::to_string(e.values.size())
                                  + " attribute values, expected " + std::to_string(attribute_names.size()));
        if (e.decision < 0 || std::any_of(e.values.begin(), e.values.end(), [](int v) { return v < 0; }))
            throw ValidationError("entry " + std::to_string(e.id) + " has a negative label");
    }
}

std::span<const MetricKind> cause_attributes() { return kCauseKinds; }

std::string_view cause_name(std::size_t attribute)
{
    if (attribute >= kCauseNames.size())
        throw std::out_of_range("no cause name for attribute " + std::to_string(attribute));
    return kCauseNames[attribute];
}

DiscernibilityMatrix::DiscernibilityMatrix(std::size_t size, std::size_t attribute_count)
    : size_(size), attribute_count_(attribute_count), cells_(size * (size + 1) / 2)
{
}

std::size_t DiscernibilityMatrix::offset(std::size_t i, std::size_t j) const
{
    if (i > j)
        std::swap(i, j);
    if (j >= size_)
        throw std::out_of_range("discernibility cell out of range");
    return i * size_ - i * (i - 1) / 2 + (j - i);
}

const DiscernibilityCell& DiscernibilityMatrix::at(std::size_t i, std::size_t j) const { return cells_[offset(i, j)]; }

DiscernibilityCell& DiscernibilityMatrix::at(std::size_t i, std::size_t j) { return cells_[offset(i, j)]; }

DiscernibilityMatrix build_discernibility(const DecisionTable& table)
{
    table.validate();
    const auto& e = table.entries;
    DiscernibilityMatrix matrix(e.size(), table.attribute_count());
    for (std::size_t i = 0; i < e.size(); ++i) {
        for (std::size_t j = i + 1; j < e.size(); ++j) {
            auto& cell = matrix.at(i, j);
            if (e[i].decision == e[j].decision)
                continue;
            AttributeSet diff = 0;
            for (std::size_t a = 0; a < table.attribute_count(); ++a)
                if (e[i].values[a] != e[j].values[a])
                    diff |= AttributeSet{1} << a;
            cell.kind = diff == 0 ? DiscernibilityCell::Kind::Conflict : DiscernibilityCell::Kind::Attributes;
            cell.attributes = diff;
        }
    }
    return matrix;
}

AttributeSet CoreResult::core_union() const
{
    AttributeSet out = 0;
    for (auto c : cores)
        out |= c;
    return out;
}

CoreResult extract_core(const DiscernibilityMatrix& matrix)
{
    CoreResult out;
    std::vector<AttributeSet> cells;
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        for (std::size_t j = i + 1; j < matrix.size(); ++j) {
            const auto& cell = matrix.at(i, j);
            if (cell.kind == DiscernibilityCell::Kind::Conflict)
                ++out.conflicts;
            else if (cell.kind == DiscernibilityCell::Kind::Attributes)
                cells.push_back(cell.attributes);
        }
    }
    if (cells.empty())
        throw AnalysisError(out.conflicts > 0
                                ? "inconsistent decision table: differing decisions have identical attributes"
                                : "decision table has a single decision; there is nothing to discern");

    for (auto c : cells)
        if (std::popcount(c) == 1)
            out.singleton_core |= c;

    // Clauses untouched by the singleton core, keeping only minimal ones.
    std::vector<AttributeSet> open;
    for (auto c : cells)
        if ((c & out.singleton_core) == 0)
            open.push_back(c);
    std::sort(open.begin(), open.end(), [](AttributeSet a, AttributeSet b) {
        return std::popcount(a) != std::popcount(b) ? std::popcount(a) < std::popcount(b) : a < b;
    });
    for (auto c : open) {
        const bool absorbed = std::any_of(out.clauses.begin(), out.clauses.end(),
                                          [c](AttributeSet kept) { return (kept & c) == kept; });
        if (!absorbed)
            out.clauses.push_back(c);
    }

    // Conjunctive to disjunctive form; each term counts the expansion
    // products that collapse onto it.
    std::map<AttributeSet, std::uint64_t> terms{{out.singleton_core, 1}};
    for (auto clause : out.clauses) {
        std::map<AttributeSet, std::uint64_t> next;
        for (const auto& [set, count] : terms)
            for (AttributeSet rest = clause; rest != 0; rest &= rest - 1)
                next[set | (rest & (~rest + 1))] += count;
        terms = std::move(next);
    }

    int best_size = std::numeric_limits<int>::max();
    for (const auto& [set, count] : terms)
        best_size = std::min(best_size, std::popcount(set));
    std::uint64_t best_occurrence = 0;
    std::vector<std::pair<AttributeSet, std::uint64_t>> candidates;
    for (const auto& [set, count] : terms) {
        if (std::popcount(set) != best_size)
            continue;
        std::uint64_t occurrence = 0;
        for (const auto& [other, other_count] : terms)
            if ((other & set) == set)
                occurrence += other_count;
        candidates.emplace_back(set, occurrence);
        best_occurrence = std::max(best_occurrence, occurrence);
    }
    for (const auto& [set, occurrence] : candidates)
        if (occurrence == best_occurrence)
            out.cores.push_back(set);
    return out;
}

DecisionTable external_decision_table(const Profile& profile, std::span<const RegionId> regions, DensityParams params)
{
    if (regions.empty())
        throw AnalysisError("external decision table needs at least one critical code region");
    if (profile.process_count() < 2)
        throw AnalysisError("external decision table needs at least two processes");
    const std::size_t m = profile.process_count();

    auto labels = [&](MetricKind kind) {
        std::vector<PerfVector> vectors(m);
        for (std::size_t r = 0; r < m; ++r) {
            vectors[r].owner = r;
            for (auto id : regions)
                vectors[r].values.push_back(metric_value(profile.cell(r, id), kind, profile.program_wall_time(r)));
        }
        std::vector<int> out(m, 0);
        // Identical behaviour everywhere is one class, zero vectors included.
        const bool uniform = std::all_of(vectors.begin(), vectors.end(),
                                         [&](const PerfVector& v) { return v.values == vectors.front().values; });
        if (uniform)
            return out;
        const auto outcome = density_cluster(vectors, params);
        for (std::size_t r = 0; r < m; ++r)
            out[r] = static_cast<int>(outcome.label_of(r));
        return out;
    };

    DecisionTable table;
    table.attribute_names = short_names(kCauseKinds.size());
    std::vector<std::vector<int>> columns;
    for (auto kind : kCauseKinds)
        columns.push_back(labels(kind));
    const auto decisions = labels(MetricKind::CpuTime);
    for (std::size_t r = 0; r < m; ++r) {
        DecisionEntry e;
        e.id = static_cast<std::uint32_t>(r);
        for (const auto& col : columns)
            e.values.push_back(col[r]);
        e.decision = decisions[r];
        table.entries.push_back(std::move(e));
    }
    return table;
}

DecisionTable internal_decision_table(const Profile& profile, const InternalResult& internal)
{
    const std::size_t m = profile.process_count();
    const auto nodes = profile.tree().nodes();

    std::vector<std::vector<int>> columns;
    for (auto kind : kCauseKinds) {
        std::vector<double> averages;
        for (const auto& node : nodes) {
            double sum = 0.0;
            for (std::size_t r = 0; r < m; ++r)
                sum += metric_value(profile.cell(r, node.id), kind, profile.program_wall_time(r));
            averages.push_back(sum / static_cast<double>(m));
        }
        std::vector<int> col(nodes.size(), 0);
        const bool uniform = std::all_of(averages.begin(), averages.end(),
                                         [&](double v) { return v == averages.front(); });
        if (!uniform) {
            const auto categories = severity_classify(averages);
            for (std::size_t i = 0; i < nodes.size(); ++i)
                col[i] = categories[i] > SeverityCategory::Medium ? 1 : 0;
        }
        columns.push_back(std::move(col));
    }

    DecisionTable table;
    table.attribute_names = short_names(kCauseKinds.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        DecisionEntry e;
        e.id = nodes[i].id.value;
        for (const auto& col : columns)
            e.values.push_back(col[i]);
        e.decision = internal.is_ccr(nodes[i].id) ? 1 : 0;
        table.entries.push_back(std::move(e));
    }
    return table;
}

std::vector<RootCause> root_cause_report(const DecisionTable& table, const CoreResult& core, CauseMode mode)
{
    table.validate();
    const AttributeSet attrs = core.core_union();
    if (attrs == 0)
        throw AnalysisError("root cause report needs a non-empty core");

    int positive = 1;
    std::vector<int> typical(table.attribute_count(), 0);
    if (mode == CauseMode::External) {
        std::vector<int> decisions;
        for (const auto& e : table.entries)
            decisions.push_back(e.decision);
        positive = majority(decisions);
        for (std::size_t a = 0; a < table.attribute_count(); ++a) {
            std::vector<int> col;
            for (const auto& e : table.entries)
                col.push_back(e.values[a]);
            typical[a] = majority(col);
        }
    }

    std::vector<RootCause> out;
    for (const auto& e : table.entries) {
        const bool is_positive = mode == CauseMode::Internal ? e.decision == positive : e.decision != positive;
        if (!is_positive)
            continue;
        RootCause cause;
        cause.entry_id = e.id;
        for (std::size_t a = 0; a < table.attribute_count(); ++a) {
            if (!(attrs & (AttributeSet{1} << a)))
                continue;
            const bool high = mode == CauseMode::Internal ? e.values[a] == 1 : e.values[a] != typical[a];
            if (high)
                cause.attributes.push_back(a);
        }
        out.push_back(std::move(cause));
    }
    return out;
}

std::string format_attribute_set(AttributeSet set)
{
    std::string out = "{";
    for (std::size_t a = 0; a < kMaxAttributes; ++a) {
        if (!(set & (AttributeSet{1} << a)))
            continue;
        if (out.size() > 1)
            out += ',';
        out += "a" + std::to_string(a + 1);
    }
    return out + "}";
}

std::string compact_attribute_set(AttributeSet set)
{
    std::string out;
    for (std::size_t a = 0; a < kMaxAttributes; ++a)
        if (set & (AttributeSet{1} << a))
            out += "a" + std::to_string(a + 1);
    return out;
}

std::string render_table(const DecisionTable& table, std::string_view id_header)
{
    table.validate();
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{std::string(id_header)};
    for (const auto& name : table.attribute_names)
        header.push_back(name);
    header.push_back(table.decision_labels.empty() ? "D" : "decision");
    rows.push_back(header);
    for (const auto& e : table.entries) {
        std::vector<std::string> row{std::to_string(e.id)};
        for (std::size_t a = 0; a < e.values.size(); ++a) {
            const int v = e.values[a];
            const bool labelled = a < table.value_labels.size()
                && static_cast<std::size_t>(v) < table.value_labels[a].size();
            row.push_back(labelled ? table.value_labels[a][static_cast<std::size_t>(v)] : std::to_string(v));
        }
        const bool labelled = static_cast<std::size_t>(e.decision) < table.decision_labels.size();
        row.push_back(labelled ? table.decision_labels[static_cast<std::size_t>(e.decision)]
                               : std::to_string(e.decision));
        rows.push_back(std::move(row));
    }
    return render_grid(rows);
}

std::string render_matrix(const DiscernibilityMatrix& matrix)
{
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        std::vector<std::string> row(i, "");
        for (std::size_t j = i; j < matrix.size(); ++j) {
            const auto& cell = matrix.at(i, j);
            switch (cell.kind) {
            case DiscernibilityCell::Kind::Zero: row.push_back("0"); break;
            case DiscernibilityCell::Kind::Conflict: row.push_back("-1"); break;
            case DiscernibilityCell::Kind::Attributes: row.push_back(compact_attribute_set(cell.attributes)); break;
            }
        }
        rows.push_back(std::move(row));
    }
    return render_grid(rows);
}

DecisionTable demo_table()
{
    DecisionTable t;
    t.attribute_names = short_names(4);
    t.value_labels = {{"sunny", "overcast"}, {"hot", "cool"}, {"high", "low"}, {"False", "True"}};
    t.decision_labels = {"N", "P"};
    t.entries = {
        {0, {0, 0, 0, 0}, 0},
        {1, {0, 0, 0, 1}, 0},
        {2, {1, 0, 0, 0}, 1},
        {3, {0, 1, 1, 0}, 1},
    };
    return t;
}

} // namespace spmdlens
