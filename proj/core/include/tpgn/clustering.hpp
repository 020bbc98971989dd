#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tpgn/model.hpp"
#include "tpgn/tensor.hpp"

namespace tpgn {

struct KMeansResult {
    std::vector<std::size_t> assignment;  ///< cluster of each point
    std::vector<Tensor> centroids;
    std::size_t iterations = 0;
};

/// Lloyd's k-means (Euclidean). Initial centres: one point chosen by the
/// seeded generator, then repeatedly the point farthest from all chosen
/// centres (lowest index on ties). Throws ContractViolation when k < 2 or
/// there are fewer distinct points than k.
KMeansResult kmeans(std::span<const Tensor> points, std::size_t k, std::uint64_t seed,
                    std::size_t max_iterations = 100);

struct ClusterReport {
    std::vector<std::string> tags;             ///< column labels of the contingency table
    std::vector<std::vector<std::size_t>> table;  ///< [cluster][tag] counts
    std::vector<std::size_t> assignment;
    std::vector<std::size_t> point_tags;
    double purity = 0.0;  ///< sum over clusters of the majority count, over all points
};

/// Purity of a contingency table: fraction of points that carry their
/// cluster's majority tag.
double purity(const std::vector<std::vector<std::size_t>>& table);

/// Clusters the unbinding vectors u_t of every decode step whose emitted
/// word has a tag (steps where `tag_of` returns nullopt, e.g. the end
/// token, are skipped) and cross-tabulates clusters against the tags.
ClusterReport cluster_unbinding_vectors(std::span<const DecodeTrace> traces, std::size_t k,
                                        const std::function<std::optional<std::string>(WordId)>& tag_of,
                                        std::uint64_t seed = 0);

/// Tab-separated contingency table with a header row and a purity line.
std::string format_cluster_report(const ClusterReport& report);

}  // namespace tpgn
