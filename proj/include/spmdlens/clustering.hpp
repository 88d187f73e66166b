#pragma once

#include "spmdlens/perf_vector.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace spmdlens {

struct DensityParams {
    /// Neighbourhood radius as a fraction of the seed vector's length.
    double threshold_fraction = 0.10;
    /// A seed forms a cluster when strictly more points than this are in range.
    int count_threshold = 2;

    bool operator==(const DensityParams&) const = default;
};

/// Partition of process ranks 0..m-1 in canonical form: members ascending,
/// clusters ordered by their smallest member. Isolated points are singletons.
class ClusteringOutcome {
public:
    ClusteringOutcome() = default;
    /// Canonicalizes `clusters`; throws std::invalid_argument unless they
    /// partition 0..m-1 exactly.
    explicit ClusteringOutcome(std::vector<std::vector<std::size_t>> clusters);

    const std::vector<std::vector<std::size_t>>& clusters() const { return clusters_; }
    std::size_t cluster_count() const { return clusters_.size(); }
    std::size_t process_count() const { return labels_.size(); }
    /// Canonical cluster index of `rank`.
    std::size_t label_of(std::size_t rank) const { return labels_.at(rank); }

    bool operator==(const ClusteringOutcome& other) const { return clusters_ == other.clusters_; }

private:
    std::vector<std::vector<std::size_t>> clusters_;
    std::vector<std::size_t> labels_;
};

/// Throws std::invalid_argument on a length mismatch.
double euclidean_distance(std::span<const double> a, std::span<const double> b);
double euclidean_distance(const PerfVector& a, const PerfVector& b);
double vector_length(std::span<const double> a);
double vector_length(const PerfVector& a);

/// Density-threshold clustering. Owners must be exactly 0..m-1 (in any input
/// order). Seeds are tried in ascending owner rank among unassigned points; a
/// point counts towards a seed p when its distance to p is strictly below
/// threshold_fraction * len(p), the seed included, and a successful seed
/// claims the unassigned points in range.
ClusteringOutcome density_cluster(std::span<const PerfVector> vectors, DensityParams params = {});

struct Severity {
    double value = 0.0;
    /// Vectors left out of the minimum length because they are all zero.
    std::size_t zero_length_excluded = 0;

    bool operator==(const Severity&) const = default;
};

/// Largest pairwise distance over the smallest nonzero vector length.
/// Throws AnalysisError for fewer than two vectors or when every vector is zero.
Severity dissimilarity_severity(std::span<const PerfVector> vectors);

struct KMeansResult {
    /// Cluster index per input value; clusters are numbered by ascending centroid.
    std::vector<std::size_t> assignment;
    std::vector<double> centroids;

    bool operator==(const KMeansResult&) const = default;
};

/// One-dimensional k-means with quantile seeding, Lloyd iterations and a
/// single-point transfer pass. Throws std::invalid_argument on empty input
/// or k < 1.
KMeansResult kmeans_scalar(std::span<const double> values, std::size_t k = 5);

enum class SeverityCategory { VeryLow = 0, Low = 1, Medium = 2, High = 3, VeryHigh = 4 };

/// "very low", "low", "medium", "high", "very high".
std::string_view to_string(SeverityCategory category);

/// Five-way k-means classification. With fewer than five populated clusters
/// the lower ones take categories from VeryLow upward and the cluster holding
/// the maximum is always VeryHigh.
std::vector<SeverityCategory> severity_classify(std::span<const double> values);

} // namespace spmdlens
