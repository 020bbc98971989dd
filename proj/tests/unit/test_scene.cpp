#include <algorithm>
#include <cmath>
#include <map>
#include <regex>
#include <set>

#include "doctest.h"
#include "tpgn/corpus.hpp"
#include "tpgn/errors.hpp"
#include "tpgn/metrics.hpp"

using namespace tpgn;

namespace {

std::size_t index_in(const std::vector<std::string>& list, const std::string& word) {
    return static_cast<std::size_t>(std::find(list.begin(), list.end(), word) - list.begin());
}

Scene red_circle_above_blue_square() {
    const Grammar& g = Grammar::standard();
    Scene s;
    s.objects.push_back({index_in(g.nouns(), "circle"), index_in(g.attributes(), "red"), 0.5, 0.3});
    s.objects.push_back({index_in(g.nouns(), "square"), index_in(g.attributes(), "blue"), 0.55, 0.7});
    s.relations.push_back({0, index_in(g.prepositions(), "above"), 1});
    return s;
}

struct SvgShape {
    std::string noun;
    double cx = 0.0, cy = 0.0;
};

std::vector<double> numbers_in(const std::string& text) {
    static const std::regex num(R"(-?\d+(\.\d+)?)");
    std::vector<double> out;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), num); it != std::sregex_iterator(); ++it)
        out.push_back(std::stod(it->str()));
    return out;
}

// Reads back the object shapes (class="object") with their centres.
std::vector<SvgShape> parse_svg(const std::string& svg) {
    static const std::regex elem(R"re(<(circle|rect|polygon) class="object"([^>]*)><title>([a-z]+)</title>)re");
    std::vector<SvgShape> out;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), elem); it != std::sregex_iterator(); ++it) {
        const std::string kind = (*it)[1], attrs = (*it)[2];
        auto attr = [&](const std::string& name) {
            const std::regex re(" " + name + R"re(="(-?[\d.]+)")re");
            std::smatch m;
            REQUIRE(std::regex_search(attrs, m, re));
            return std::stod(m[1]);
        };
        SvgShape s{(*it)[3], 0.0, 0.0};
        if (kind == "circle") {
            s.cx = attr("cx");
            s.cy = attr("cy");
        } else if (kind == "rect") {
            s.cx = attr("x") + attr("width") / 2;
            s.cy = attr("y") + attr("height") / 2;
        } else {
            std::smatch m;
            REQUIRE(std::regex_search(attrs, m, std::regex(R"re(points="([^"]*)")re")));
            const auto v = numbers_in(m[1]);
            REQUIRE(v.size() % 2 == 0);
            for (std::size_t k = 0; k < v.size(); k += 2) {
                s.cx += v[k];
                s.cy += v[k + 1];
            }
            s.cx /= static_cast<double>(v.size() / 2);
            s.cy /= static_cast<double>(v.size() / 2);
        }
        out.push_back(s);
    }
    return out;
}

}  // namespace

TEST_CASE("sampling is deterministic and valid") {
    for (std::uint64_t seed : {0u, 1u, 999u}) CHECK(sample_scene(seed) == sample_scene(seed));
    CHECK_FALSE(sample_scene(3, 0) == sample_scene(3, 1));
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
        const Scene s = sample_scene(seed);
        REQUIRE_NOTHROW(validate_scene(s));
    }
}

TEST_CASE("validation rejects inconsistent geometry") {
    Scene s = red_circle_above_blue_square();
    CHECK_NOTHROW(validate_scene(s));
    std::swap(s.objects[0].y, s.objects[1].y);
    CHECK_THROWS_AS(validate_scene(s), ContractViolation);
    s = red_circle_above_blue_square();
    s.objects[1].noun = s.objects[0].noun;
    CHECK_THROWS_AS(validate_scene(s), ContractViolation);
    s.objects.clear();
    s.relations.clear();
    CHECK_THROWS_AS(validate_scene(s), ContractViolation);
}

TEST_CASE("relation triples cover the seed space") {
    const Grammar& g = Grammar::standard();
    std::set<Tuple> triples;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const Scene s = sample_scene(seed);
        for (const auto& r : s.relations)
            triples.insert({g.nouns()[s.objects[r.subject].noun], g.prepositions()[r.preposition],
                            g.nouns()[s.objects[r.object].noun]});
    }
    CHECK(triples.size() >= 100);
}

TEST_CASE("feature layout of a one-object scene") {
    const Grammar& g = Grammar::standard();
    Scene s;
    s.objects.push_back({index_in(g.nouns(), "dog"), index_in(g.attributes(), "green"), 0.25, 0.75});
    const Tensor v = scene_features(s, 96);
    REQUIRE(v.size() == 96);
    std::vector<double> want(96, 0.0);
    want[1] = 1.0;             // noun block of slot 0: dog is noun 1
    want[15 + 2] = 1.0;        // attribute block of slot 0: green is attribute 2
    want[3 * 21 + 2 * 5] = 0.25;
    want[3 * 21 + 2 * 5 + 1] = 0.75;
    CHECK(v.storage() == want);
    CHECK_THROWS_AS(scene_features(s, kFeatureLayoutSize - 1), ContractViolation);
}

TEST_CASE("features are injective on samples and zero in absent relation slots") {
    std::map<std::vector<double>, std::uint64_t> seen;
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
        const Scene s = sample_scene(seed);
        const Tensor v = scene_features(s, 96);
        const auto [it, fresh] = seen.emplace(v.storage(), seed);
        if (!fresh) CHECK(sample_scene(it->second) == s);
        for (std::size_t r = s.relations.size(); r < 2; ++r)
            for (std::size_t k = 0; k < 5; ++k) CHECK(v[63 + r * 5 + k] == 0.0);
    }
    Scene a = red_circle_above_blue_square(), b = a;
    b.objects[1].noun = index_in(Grammar::standard().nouns(), "cat");
    CHECK_FALSE(scene_features(a, 96) == scene_features(b, 96));
}

TEST_CASE("captions and tuples of the worked example") {
    const Scene s = red_circle_above_blue_square();
    const auto caps = gold_captions(s);
    CHECK(caps.size() >= 2);
    CHECK(std::find(caps.begin(), caps.end(), "a red circle above a blue square") != caps.end());
    const SceneGraph want{{"circle"}, {"circle", "red"}, {"square"}, {"square", "blue"}, {"circle", "above", "square"}};
    CHECK(scene_tuples(s) == want);

    Scene lone;
    lone.objects.push_back({0, std::nullopt, 0.5, 0.5});
    CHECK(scene_tuples(lone).size() == 1);
}

TEST_CASE("gold captions parse back to the scene tuples") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const Scene s = sample_scene(seed);
        const SceneGraph gold = scene_tuples(s);
        std::size_t attributed = 0;
        for (const auto& o : s.objects) attributed += o.attribute.has_value();
        CHECK(gold.size() == s.objects.size() + attributed + s.relations.size());
        const auto caps = gold_captions(s);
        REQUIRE(caps.size() >= 2);
        for (const auto& c : caps) {
            const auto parsed = parse_caption_tuples(c);
            CHECK(parsed.tuples == gold);
            CHECK(parsed.diagnostics.empty());
        }
    }
}

TEST_CASE("captions fit the default length budget") {
    const Vocabulary vocab(Grammar::standard());
    for (std::uint64_t seed = 0; seed < 2000; ++seed)
        for (const auto& c : gold_captions(sample_scene(seed))) CHECK(vocab.encode(c).size() <= TpgnConfig{}.max_len);
}

TEST_CASE("svg rendering") {
    const Grammar& g = Grammar::standard();
    CHECK(render_svg(sample_scene(17)) == render_svg(sample_scene(17)));
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const Scene s = sample_scene(seed);
        const std::string svg = render_svg(s);
        CHECK(svg.starts_with("<svg "));
        const auto shapes = parse_svg(svg);
        REQUIRE(shapes.size() == s.objects.size());
        for (std::size_t i = 0; i < shapes.size(); ++i) {
            CHECK(shapes[i].noun == g.nouns()[s.objects[i].noun]);
            CHECK(std::abs(shapes[i].cx - 400 * s.objects[i].x) < 0.2);
            CHECK(std::abs(shapes[i].cy - 400 * s.objects[i].y) < 0.2);
        }
        for (const auto& r : s.relations) {
            const auto& a = shapes[r.subject];
            const auto& b = shapes[r.object];
            const std::string& prep = g.prepositions()[r.preposition];
            if (prep == "above" || prep == "on") CHECK(a.cy < b.cy);
            if (prep == "below") CHECK(a.cy > b.cy);
            if (prep == "beside") CHECK(std::abs(a.cx - b.cx) > std::abs(a.cy - b.cy));
        }
    }
}

TEST_CASE("corpus splits") {
    CHECK(kTrainSeeds.last <= kValSeeds.first);
    CHECK(kValSeeds.last <= kTestSeeds.first);
    CHECK(split_range("val").first == 2000);
    CHECK_THROWS_AS(split_range("dev"), ContractViolation);

    const auto split = generate_split("val", {2000, 2030}, 0, 96);
    REQUIRE(split.entries.size() == 30);
    CHECK(split.entries.front().scene.seed == 2000);
    const std::string text = split_to_json(split);
    CHECK(split_to_json(generate_split("val", {2000, 2030}, 0, 96)) == text);
    const auto back = split_from_json(text);
    CHECK(back.name == "val");
    CHECK(back.feature_dim == 96);
    REQUIRE(back.entries.size() == split.entries.size());
    for (std::size_t i = 0; i < back.entries.size(); ++i) {
        CHECK(back.entries[i].scene == split.entries[i].scene);
        CHECK(back.entries[i].captions == split.entries[i].captions);
        CHECK(back.entries[i].tuples == split.entries[i].tuples);
        CHECK(back.entries[i].features == split.entries[i].features);
    }
    CHECK_THROWS_AS(split_from_json("{\"format\": \"other\"}"), FormatError);
    CHECK_THROWS_AS(split_from_json("not json"), FormatError);

    const Vocabulary vocab(Grammar::standard());
    const auto ex = make_examples(split, vocab);
    CHECK(ex.size() == 2 * split.entries.size());
    for (const auto& e : ex) CHECK(e.target.back() == Vocabulary::kEnd);
}

TEST_CASE("vocabulary") {
    const Vocabulary vocab(Grammar::standard());
    CHECK(vocab.word(Vocabulary::kStart) == "<start>");
    CHECK(vocab.word(Vocabulary::kEnd) == "<end>");
    CHECK(vocab.id("zebra") == Vocabulary::kUnknown);
    const auto ids = vocab.encode("A Red circle.");
    CHECK(vocab.decode(ids) == "a red circle");
    CHECK(ids.back() == Vocabulary::kEnd);
}
