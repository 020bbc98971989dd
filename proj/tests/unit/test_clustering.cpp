#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tpgn/clustering.hpp"
#include "tpgn/errors.hpp"

using namespace tpgn;

TEST_CASE("well separated blobs are recovered") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> noise(0.0, 0.05);
    const std::vector<std::vector<double>> centres{{0, 0, 0}, {5, 0, 0}, {0, 5, 0}, {0, 0, 5}};
    std::vector<Tensor> points;
    std::vector<std::size_t> truth;
    for (std::size_t c = 0; c < centres.size(); ++c)
        for (int i = 0; i < 25; ++i) {
            Tensor p({3});
            for (std::size_t k = 0; k < 3; ++k) p[k] = centres[c][k] + noise(rng);
            points.push_back(p);
            truth.push_back(c);
        }
    for (std::uint64_t seed : {0u, 1u, 2u}) {
        const auto km = kmeans(points, 4, seed);
        std::vector<std::vector<std::size_t>> table(4, std::vector<std::size_t>(4, 0));
        for (std::size_t i = 0; i < points.size(); ++i) ++table[km.assignment[i]][truth[i]];
        CHECK(purity(table) == 1.0);
        CHECK(kmeans(points, 4, seed).assignment == km.assignment);
    }
}

TEST_CASE("k-means contract") {
    const std::vector<Tensor> same(5, Tensor::vector({1.0, 2.0}));
    CHECK_THROWS_AS(kmeans(same, 2, 0), ContractViolation);
    const std::vector<Tensor> two{Tensor::vector({0.0}), Tensor::vector({1.0})};
    CHECK_THROWS_AS(kmeans(two, 1, 0), ContractViolation);
    CHECK_NOTHROW(kmeans(two, 2, 0));
}

TEST_CASE("purity of contingency tables") {
    CHECK(purity({{3, 1}, {0, 4}}) == doctest::Approx(7.0 / 8.0));
    CHECK(purity({{2, 2}}) == doctest::Approx(0.5));
    CHECK(purity({}) == 0.0);
}

TEST_CASE("clustering decode traces skips untagged steps") {
    TpgnConfig c;
    c.d = 3;
    c.vocab = 8;
    c.feature_dim = 4;
    const TpgnParams p = oracle::random_params(c, 12, 1.0);
    std::vector<DecodeTrace> traces;
    std::mt19937_64 rng(12);
    for (int i = 0; i < 20; ++i)
        traces.push_back(generate_caption(p, c, oracle::random_tensor({4}, rng), Tensor({4})));
    auto tag = [&](WordId w) -> std::optional<std::string> {
        if (w == c.end_id) return std::nullopt;
        return w % 2 ? "odd" : "even";
    };
    const auto r = cluster_unbinding_vectors(traces, 2, tag, 3);
    std::size_t tagged = 0;
    for (const auto& t : traces)
        for (const auto& s : t.steps) tagged += s.word != c.end_id;
    CHECK(r.assignment.size() == tagged);
    CHECK(r.purity >= 0.5);
    CHECK(r.purity <= 1.0);
    const auto again = cluster_unbinding_vectors(traces, 2, tag, 3);
    CHECK(again.assignment == r.assignment);
    CHECK(format_cluster_report(r).find("purity\t") != std::string::npos);
}
