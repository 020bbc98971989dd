#include <cmath>
#include <random>

#include "doctest.h"
#include "tpgn/errors.hpp"
#include "tpgn/metrics.hpp"

using namespace tpgn;

TEST_CASE("parser examples") {
    const auto p = parse_caption_tuples("a red circle above a blue square");
    const SceneGraph want{{"circle"}, {"circle", "red"}, {"square"}, {"square", "blue"}, {"circle", "above", "square"}};
    CHECK(p.tuples == want);
    CHECK(p.diagnostics.empty());

    CHECK(parse_caption_tuples("").tuples.empty());
    const auto junk = parse_caption_tuples("zzz qqq");
    CHECK(junk.tuples.empty());
    CHECK(junk.diagnostics.size() == 2);

    CHECK(parse_caption_tuples("a cat sitting beside a dog").tuples ==
          SceneGraph{{"cat"}, {"dog"}, {"cat", "beside", "dog"}});
    CHECK(parse_caption_tuples("red above").tuples.empty());
    CHECK(parse_caption_tuples("The Cat!").tuples == SceneGraph{{"cat"}});
    CHECK(parse_caption_tuples("a circle above a square").tuples ==
          parse_caption_tuples("a circle above a square").tuples);
}

TEST_CASE("spice_lite hand examples") {
    const SceneGraph A{{"a"}}, B{{"b"}}, C{{"c"}}, D{{"d"}};
    auto join = [](std::initializer_list<SceneGraph> parts) {
        SceneGraph s;
        for (const auto& p : parts) s.insert(p.begin(), p.end());
        return s;
    };
    const auto s = spice_lite(join({A, B}), join({B, C, D}));
    CHECK(s.precision == doctest::Approx(0.5));
    CHECK(s.recall == doctest::Approx(1.0 / 3.0));
    CHECK(s.f1 == doctest::Approx(0.4));
    CHECK(spice_lite(join({A, B}), join({A, B})).f1 == 1.0);
    CHECK(spice_lite(join({A}), join({B})).f1 == 0.0);
    const auto empty = spice_lite(SceneGraph{}, join({A}));
    CHECK(empty.precision == 0.0);
    CHECK(empty.f1 == 0.0);
    CHECK_THROWS_AS(spice_lite(join({A}), SceneGraph{}), ContractViolation);
}

TEST_CASE("spice_lite agrees with set arithmetic on random sets") {
    std::mt19937_64 rng(2024);
    std::bernoulli_distribution coin(0.4);
    for (int trial = 0; trial < 500; ++trial) {
        SceneGraph cand, gold;
        for (int k = 0; k < 8; ++k) {
            const Tuple t{std::to_string(k)};
            if (coin(rng)) cand.insert(t);
            if (coin(rng)) gold.insert(t);
        }
        if (gold.empty()) gold.insert({"0"});
        std::size_t common = 0;
        for (const auto& t : cand) common += gold.count(t);
        const double p = cand.empty() ? 0.0 : double(common) / double(cand.size());
        const double r = double(common) / double(gold.size());
        const double f = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
        const auto s = spice_lite(cand, gold);
        CHECK(s.precision == doctest::Approx(p).epsilon(1e-15));
        CHECK(s.recall == doctest::Approx(r).epsilon(1e-15));
        CHECK(s.f1 == doctest::Approx(f).epsilon(1e-15));
        CHECK(s.f1 <= 2 * std::min(s.precision, s.recall) + 1e-15);
        CHECK(s.f1 >= 0.0);
        CHECK(s.f1 <= 1.0);
    }
}

TEST_CASE("bleu examples") {
    const std::vector<std::string> ref{"a red circle above a blue square"};
    for (int n = 1; n <= 4; ++n) CHECK(bleu_n("a red circle above a blue square", ref, n) == doctest::Approx(1.0));

    // clipping: "the" appears once in the reference, three times in the candidate
    const std::vector<std::string> cat{"the cat"};
    CHECK(bleu_n("the the the", cat, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    // shorter than the reference: brevity penalty exp(1 - r/c)
    const std::vector<std::string> long_ref{"the cat sat on the mat"};
    CHECK(bleu_n("the cat", long_ref, 1) == doctest::Approx(std::exp(1.0 - 6.0 / 2.0)).epsilon(1e-12));

    CHECK(bleu_n("zebra giraffe okapi", ref, 4) < 1e-6);
    CHECK(bleu_n("", ref, 2) == 0.0);
}

TEST_CASE("bleu of a candidate against references that include it") {
    std::mt19937_64 rng(3);
    const std::vector<std::string> words{"a", "the", "cat", "dog", "above", "red"};
    for (int trial = 0; trial < 100; ++trial) {
        auto sentence = [&](std::size_t len) {
            std::string s;
            for (std::size_t k = 0; k < len; ++k) s += (k ? " " : "") + words[rng() % words.size()];
            return s;
        };
        const std::string c = sentence(1 + rng() % 7);
        const std::vector<std::string> refs{sentence(1 + rng() % 7), c, sentence(1 + rng() % 7)};
        for (int n = 1; n <= 4; ++n) {
            const double b = bleu_n(c, refs, n);
            CHECK(b == doctest::Approx(1.0).epsilon(1e-12));
        }
        const std::vector<std::string> others{refs[0], refs[2]};
        for (int n = 1; n <= 4; ++n) {
            const double b = bleu_n(c, others, n);
            CHECK(b >= 0.0);
            CHECK(b <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("corpus bleu pools counts across segments") {
    CorpusBleu corpus(4);
    const std::vector<std::string> r1{"a red circle"}, r2{"a blue square above a cat"};
    corpus.add("a red circle", r1);
    corpus.add("a blue square above a cat", r2);
    CHECK(corpus.segments() == 2);
    for (int n = 1; n <= 4; ++n) CHECK(corpus.score(n) == doctest::Approx(1.0));

    CorpusBleu mixed(1);
    mixed.add("a red circle", r1);
    mixed.add("zebra", r2);
    // 3 of 4 candidate unigrams match; c = 4, r = 9
    CHECK(mixed.score(1) == doctest::Approx(std::exp(1.0 - 9.0 / 4.0) * 3.0 / 4.0).epsilon(1e-12));
}
