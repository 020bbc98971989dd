#include "tpgn/clustering.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "tpgn/errors.hpp"

namespace tpgn {

namespace {

double squared_distance(const Tensor& a, const Tensor& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

std::size_t distinct_count(std::span<const Tensor> points, std::size_t enough) {
    std::vector<const Tensor*> seen;
    for (const auto& p : points) {
        const bool dup = std::any_of(seen.begin(), seen.end(), [&](const Tensor* q) { return *q == p; });
        if (!dup) {
            seen.push_back(&p);
            if (seen.size() >= enough) break;
        }
    }
    return seen.size();
}

}  // namespace

KMeansResult kmeans(std::span<const Tensor> points, std::size_t k, std::uint64_t seed,
                    std::size_t max_iterations) {
    TPGN_REQUIRE(k >= 2, "k-means needs k >= 2");
    TPGN_REQUIRE(!points.empty(), "k-means needs at least one point");
    TPGN_REQUIRE(distinct_count(points, k) >= k,
                 "k-means: fewer distinct points than k = " + std::to_string(k));
    const std::size_t n = points.size();

    std::mt19937_64 rng(seed);
    std::vector<Tensor> centres;
    centres.push_back(points[rng() % n]);
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    while (centres.size() < k) {
        std::size_t far = 0;
        for (std::size_t i = 0; i < n; ++i) {
            nearest[i] = std::min(nearest[i], squared_distance(points[i], centres.back()));
            if (nearest[i] > nearest[far]) far = i;
        }
        centres.push_back(points[far]);
    }

    KMeansResult result;
    result.assignment.assign(n, 0);
    for (std::size_t it = 0; it < max_iterations; ++it) {
        bool changed = it == 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_d = squared_distance(points[i], centres[0]);
            for (std::size_t c = 1; c < k; ++c) {
                const double d = squared_distance(points[i], centres[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (result.assignment[i] != best) changed = true;
            result.assignment[i] = best;
        }
        result.iterations = it + 1;
        if (!changed) break;
        std::vector<Tensor> sums(k, Tensor::zeros_like(points[0]));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            auto& s = sums[result.assignment[i]];
            for (std::size_t j = 0; j < s.size(); ++j) s[j] += points[i][j];
            ++counts[result.assignment[i]];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;  // empty cluster keeps its previous centre
            for (std::size_t j = 0; j < sums[c].size(); ++j) sums[c][j] /= static_cast<double>(counts[c]);
            centres[c] = sums[c];
        }
    }
    result.centroids = std::move(centres);
    return result;
}

double purity(const std::vector<std::vector<std::size_t>>& table) {
    std::size_t majority = 0, total = 0;
    for (const auto& row : table) {
        if (row.empty()) continue;
        majority += *std::max_element(row.begin(), row.end());
        for (auto c : row) total += c;
    }
    return total == 0 ? 0.0 : static_cast<double>(majority) / static_cast<double>(total);
}

ClusterReport cluster_unbinding_vectors(std::span<const DecodeTrace> traces, std::size_t k,
                                        const std::function<std::optional<std::string>(WordId)>& tag_of,
                                        std::uint64_t seed) {
    TPGN_REQUIRE(!traces.empty(), "cluster_unbinding_vectors needs at least one trace");
    TPGN_REQUIRE(k >= 2, "cluster_unbinding_vectors needs k >= 2");
    std::vector<Tensor> points;
    std::vector<std::string> raw_tags;
    for (const auto& trace : traces) {
        for (const auto& step : trace.steps) {
            const auto tag = tag_of(step.word);
            if (!tag) continue;
            points.push_back(step.u);
            raw_tags.push_back(*tag);
        }
    }
    TPGN_REQUIRE(!points.empty(), "no tagged decode steps to cluster");

    ClusterReport report;
    std::map<std::string, std::size_t> tag_index;
    for (const auto& t : raw_tags) tag_index.emplace(t, 0);
    for (auto& [name, idx] : tag_index) {
        idx = report.tags.size();
        report.tags.push_back(name);
    }
    for (const auto& t : raw_tags) report.point_tags.push_back(tag_index.at(t));

    const auto km = kmeans(points, k, seed);
    report.assignment = km.assignment;
    report.table.assign(k, std::vector<std::size_t>(report.tags.size(), 0));
    for (std::size_t i = 0; i < points.size(); ++i) ++report.table[km.assignment[i]][report.point_tags[i]];
    report.purity = purity(report.table);
    return report;
}

std::string format_cluster_report(const ClusterReport& report) {
    std::ostringstream os;
    os << "cluster";
    for (const auto& t : report.tags) os << '\t' << t;
    os << "\tsize\n";
    for (std::size_t c = 0; c < report.table.size(); ++c) {
        os << c;
        std::size_t size = 0;
        for (auto n : report.table[c]) {
            os << '\t' << n;
            size += n;
        }
        os << '\t' << size << '\n';
    }
    os.precision(6);
    os << std::fixed << "purity\t" << report.purity << '\n';
    return os.str();
}

}  // namespace tpgn
