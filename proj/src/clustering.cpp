#include "spmdlens/clustering.hpp"

#include "spmdlens/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace spmdlens {

ClusteringOutcome::ClusteringOutcome(std::vector<std::vector<std::size_t>> clusters)
{
    std::size_t total = 0;
    for (auto& c : clusters) {
        if (c.empty())
            throw std::invalid_argument("clustering contains an empty cluster");
        std::sort(c.begin(), c.end());
        total += c.size();
    }
    std::sort(clusters.begin(), clusters.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    labels_.assign(total, std::numeric_limits<std::size_t>::max());
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        for (auto rank : clusters[i]) {
            if (rank >= total || labels_[rank] != std::numeric_limits<std::size_t>::max())
                throw std::invalid_argument("clusters do not partition ranks 0.." + std::to_string(total - 1));
            labels_[rank] = i;
        }
    }
    clusters_ = std::move(clusters);
}

double euclidean_distance(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("vector length mismatch: " + std::to_string(a.size()) + " vs "
                                    + std::to_string(b.size()));
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

double euclidean_distance(const PerfVector& a, const PerfVector& b) { return euclidean_distance(a.values, b.values); }

double vector_length(std::span<const double> a)
{
    double sum = 0.0;
    for (double v : a)
        sum += v * v;
    return std::sqrt(sum);
}

double vector_length(const PerfVector& a) { return vector_length(a.values); }

namespace {

// Input positions ordered by owner rank; rejects owners that are not 0..m-1.
std::vector<std::size_t> order_by_owner(std::span<const PerfVector> vectors)
{
    const std::size_t m = vectors.size();
    std::vector<std::size_t> by_owner(m, std::numeric_limits<std::size_t>::max());
    for (std::size_t i = 0; i < m; ++i) {
        const auto owner = vectors[i].owner;
        if (owner >= m || by_owner[owner] != std::numeric_limits<std::size_t>::max())
            throw std::invalid_argument("vector owners must be the ranks 0.." + std::to_string(m - 1));
        by_owner[owner] = i;
    }
    return by_owner;
}

void check_lengths(std::span<const PerfVector> vectors)
{
    for (const auto& v : vectors)
        if (v.values.size() != vectors.front().values.size())
            throw std::invalid_argument("vector length mismatch: " + std::to_string(v.values.size()) + " vs "
                                        + std::to_string(vectors.front().values.size()));
}

} // namespace

ClusteringOutcome density_cluster(std::span<const PerfVector> vectors, DensityParams params)
{
    if (vectors.empty())
        throw std::invalid_argument("density_cluster needs at least one vector");
    check_lengths(vectors);
    const auto order = order_by_owner(vectors);
    const std::size_t m = vectors.size();

    std::vector<bool> assigned(m, false);
    std::vector<std::vector<std::size_t>> clusters;
    for (std::size_t p : order) {
        if (assigned[p])
            continue;
        const double threshold = params.threshold_fraction * vector_length(vectors[p]);
        std::vector<std::size_t> in_range;
        for (std::size_t q = 0; q < m; ++q)
            if (euclidean_distance(vectors[p], vectors[q]) < threshold)
                in_range.push_back(q);
        if (static_cast<long long>(in_range.size()) <= params.count_threshold)
            continue;
        std::vector<std::size_t> cluster;
        for (std::size_t q : in_range) {
            if (!assigned[q]) {
                assigned[q] = true;
                cluster.push_back(vectors[q].owner);
            }
        }
        clusters.push_back(std::move(cluster));
    }
    for (std::size_t q = 0; q < m; ++q)
        if (!assigned[q])
            clusters.push_back({vectors[q].owner});
    return ClusteringOutcome(std::move(clusters));
}

Severity dissimilarity_severity(std::span<const PerfVector> vectors)
{
    if (vectors.size() < 2)
        throw AnalysisError("dissimilarity severity needs at least two processes");
    check_lengths(vectors);
    double max_distance = 0.0;
    for (std::size_t i = 0; i < vectors.size(); ++i)
        for (std::size_t j = i + 1; j < vectors.size(); ++j)
            max_distance = std::max(max_distance, euclidean_distance(vectors[i], vectors[j]));

    Severity out;
    double min_length = std::numeric_limits<double>::infinity();
    for (const auto& v : vectors) {
        const double len = vector_length(v);
        if (len > 0.0)
            min_length = std::min(min_length, len);
        else
            ++out.zero_length_excluded;
    }
    if (out.zero_length_excluded == vectors.size())
        throw AnalysisError("dissimilarity severity is undefined: every performance vector is zero");
    out.value = max_distance / min_length;
    return out;
}

namespace {

std::size_t nearest(double x, const std::vector<double>& centroids)
{
    std::size_t best = 0;
    for (std::size_t c = 1; c < centroids.size(); ++c)
        if (std::abs(x - centroids[c]) < std::abs(x - centroids[best]))
            best = c;
    return best;
}

struct Groups {
    std::vector<double> sum;
    std::vector<std::size_t> size;

    Groups(std::span<const double> values, const std::vector<std::size_t>& assignment, std::size_t k)
        : sum(k, 0.0), size(k, 0)
    {
        for (std::size_t i = 0; i < values.size(); ++i) {
            sum[assignment[i]] += values[i];
            ++size[assignment[i]];
        }
    }
    double mean(std::size_t c) const { return sum[c] / static_cast<double>(size[c]); }
};

// Lloyd iterations from the given centroids until no point changes cluster.
std::vector<std::size_t> lloyd(std::span<const double> values, std::vector<double>& centroids)
{
    const std::size_t k = centroids.size();
    std::vector<std::size_t> assignment(values.size(), k);
    for (int iter = 0; iter < 10000; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < values.size(); ++i) {
            const auto c = nearest(values[i], centroids);
            if (c != assignment[i]) {
                assignment[i] = c;
                changed = true;
            }
        }
        if (!changed)
            break;
        const Groups g(values, assignment, k);
        for (std::size_t c = 0; c < k; ++c)
            if (g.size[c] > 0)
                centroids[c] = g.mean(c);
    }
    return assignment;
}

// Moves single points between clusters while a move lowers the total
// within-cluster sum of squares.
void transfer_refine(std::span<const double> values, std::vector<std::size_t>& assignment, std::size_t k)
{
    constexpr double kRelTol = 1e-12;
    for (int pass = 0; pass < 10000; ++pass) {
        bool moved = false;
        for (std::size_t i = 0; i < values.size(); ++i) {
            Groups g(values, assignment, k);
            const std::size_t from = assignment[i];
            if (g.size[from] < 2)
                continue;
            const double x = values[i];
            const double nf = static_cast<double>(g.size[from]);
            const double removal = nf / (nf - 1.0) * (x - g.mean(from)) * (x - g.mean(from));
            std::size_t best = from;
            double best_cost = removal;
            for (std::size_t c = 0; c < k; ++c) {
                if (c == from || g.size[c] == 0)
                    continue;
                const double nc = static_cast<double>(g.size[c]);
                const double cost = nc / (nc + 1.0) * (x - g.mean(c)) * (x - g.mean(c));
                if (cost < best_cost - kRelTol * (std::abs(removal) + std::abs(cost)))
                    best = c, best_cost = cost;
            }
            if (best != from) {
                assignment[i] = best;
                moved = true;
            }
        }
        if (!moved)
            break;
    }
}

} // namespace

KMeansResult kmeans_scalar(std::span<const double> values, std::size_t k)
{
    if (values.empty())
        throw std::invalid_argument("kmeans_scalar needs at least one value");
    if (k < 1)
        throw std::invalid_argument("kmeans_scalar needs k >= 1");

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> distinct = sorted;
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    std::vector<std::size_t> assignment(values.size());
    std::vector<double> centroids;
    if (distinct.size() <= k) {
        centroids = distinct;
        for (std::size_t i = 0; i < values.size(); ++i)
            assignment[i] = static_cast<std::size_t>(
                std::lower_bound(distinct.begin(), distinct.end(), values[i]) - distinct.begin());
    } else {
        const std::size_t n = sorted.size();
        for (std::size_t j = 0; j < k; ++j) {
            const auto pos = static_cast<std::size_t>(std::floor((static_cast<double>(j) + 0.5) * n / k));
            centroids.push_back(sorted[std::min(pos, n - 1)]);
        }
        centroids.erase(std::unique(centroids.begin(), centroids.end()), centroids.end());
        assignment = lloyd(values, centroids);
        transfer_refine(values, assignment, centroids.size());
    }

    // Renumber populated clusters by ascending centroid.
    const std::size_t kk = centroids.size();
    const Groups g(values, assignment, kk);
    std::vector<std::size_t> populated;
    for (std::size_t c = 0; c < kk; ++c)
        if (g.size[c] > 0)
            populated.push_back(c);
    std::sort(populated.begin(), populated.end(),
              [&](std::size_t a, std::size_t b) { return g.mean(a) < g.mean(b); });
    std::vector<std::size_t> rename(kk, 0);
    KMeansResult out;
    for (std::size_t i = 0; i < populated.size(); ++i) {
        rename[populated[i]] = i;
        out.centroids.push_back(g.mean(populated[i]));
    }
    out.assignment.reserve(values.size());
    for (auto a : assignment)
        out.assignment.push_back(rename[a]);
    return out;
}

std::string_view to_string(SeverityCategory category)
{
    switch (category) {
    case SeverityCategory::VeryLow: return "very low";
    case SeverityCategory::Low: return "low";
    case SeverityCategory::Medium: return "medium";
    case SeverityCategory::High: return "high";
    case SeverityCategory::VeryHigh: return "very high";
    }
    return "unknown";
}

std::vector<SeverityCategory> severity_classify(std::span<const double> values)
{
    const auto km = kmeans_scalar(values, 5);
    const std::size_t top = km.centroids.size() - 1;
    std::vector<SeverityCategory> out;
    out.reserve(values.size());
    for (auto c : km.assignment)
        out.push_back(c == top ? SeverityCategory::VeryHigh : static_cast<SeverityCategory>(c));
    return out;
}

} // namespace spmdlens
