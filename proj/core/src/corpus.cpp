#include "tpgn/corpus.hpp"

#include <fstream>
#include <sstream>

#include "json_io.hpp"
#include "tpgn/errors.hpp"

namespace tpgn {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "tpgn-corpus/1";

std::size_t index_of(const std::vector<std::string>& list, const std::string& word, const char* what) {
    for (std::size_t i = 0; i < list.size(); ++i)
        if (list[i] == word) return i;
    throw FormatError(std::string("unknown ") + what + " '" + word + "'");
}

}  // namespace

namespace detail {

json scene_to_json(const Scene& scene) {
    const Grammar& g = Grammar::standard();
    json objects = json::array();
    for (const auto& o : scene.objects) {
        json jo{{"noun", g.nouns()[o.noun]}, {"x", o.x}, {"y", o.y}};
        jo["attribute"] = o.attribute ? json(g.attributes()[*o.attribute]) : json(nullptr);
        objects.push_back(std::move(jo));
    }
    json relations = json::array();
    for (const auto& r : scene.relations)
        relations.push_back(
            {{"subject", r.subject}, {"preposition", g.prepositions()[r.preposition]}, {"object", r.object}});
    return {{"seed", scene.seed}, {"objects", std::move(objects)}, {"relations", std::move(relations)}};
}

Scene scene_from_json(const json& js) {
    const Grammar& g = Grammar::standard();
    Scene scene;
    scene.seed = js.at("seed").get<std::uint64_t>();
    for (const auto& jo : js.at("objects")) {
        SceneObject o;
        o.noun = index_of(g.nouns(), jo.at("noun").get<std::string>(), "noun");
        if (!jo.at("attribute").is_null())
            o.attribute = index_of(g.attributes(), jo.at("attribute").get<std::string>(), "attribute");
        o.x = jo.at("x").get<double>();
        o.y = jo.at("y").get<double>();
        scene.objects.push_back(o);
    }
    for (const auto& jr : js.at("relations"))
        scene.relations.push_back({jr.at("subject").get<std::size_t>(),
                                   index_of(g.prepositions(), jr.at("preposition").get<std::string>(), "preposition"),
                                   jr.at("object").get<std::size_t>()});
    return scene;
}

json tuples_to_json(const SceneGraph& tuples) {
    json out = json::array();
    for (const auto& t : tuples) out.push_back(t);
    return out;
}

SceneGraph tuples_from_json(const json& js) {
    SceneGraph out;
    for (const auto& jt : js) out.insert(jt.get<Tuple>());
    return out;
}

}  // namespace detail

SeedRange split_range(const std::string& split) {
    if (split == "train") return kTrainSeeds;
    if (split == "val") return kValSeeds;
    if (split == "test") return kTestSeeds;
    throw ContractViolation("unknown split '" + split + "' (expected train, val or test)");
}

CorpusEntry make_entry(const Scene& scene, std::size_t feature_dim) {
    return CorpusEntry{scene, gold_captions(scene), scene_tuples(scene), scene_features(scene, feature_dim)};
}

CorpusSplit generate_split(const std::string& name, SeedRange seeds, std::uint64_t salt,
                           std::size_t feature_dim) {
    require_feature_dim(feature_dim);
    CorpusSplit split{name, seeds, salt, feature_dim, {}};
    split.entries.reserve(seeds.size());
    for (std::uint64_t s = seeds.first; s < seeds.last; ++s)
        split.entries.push_back(make_entry(sample_scene(s, salt), feature_dim));
    return split;
}

std::string split_to_json(const CorpusSplit& split) {
    json doc;
    doc["format"] = kFormat;
    doc["split"] = split.name;
    doc["seed_first"] = split.seeds.first;
    doc["seed_last"] = split.seeds.last;
    doc["salt"] = split.salt;
    doc["feature_dim"] = split.feature_dim;
    doc["vocabulary"] = Vocabulary(Grammar::standard()).words();
    json scenes = json::array();
    for (const auto& e : split.entries) {
        json js = detail::scene_to_json(e.scene);
        js["captions"] = e.captions;
        js["tuples"] = detail::tuples_to_json(e.tuples);
        js["features"] = e.features.storage();
        scenes.push_back(std::move(js));
    }
    doc["scenes"] = std::move(scenes);
    return doc.dump(1) + "\n";
}

CorpusSplit split_from_json(const std::string& text) {
    CorpusSplit split;
    try {
        const json doc = json::parse(text);
        if (doc.at("format") != kFormat) throw FormatError("not a tpgn corpus document");
        split.name = doc.at("split").get<std::string>();
        split.seeds = {doc.at("seed_first").get<std::uint64_t>(), doc.at("seed_last").get<std::uint64_t>()};
        split.salt = doc.at("salt").get<std::uint64_t>();
        split.feature_dim = doc.at("feature_dim").get<std::size_t>();
        for (const auto& js : doc.at("scenes")) {
            CorpusEntry e;
            e.scene = detail::scene_from_json(js);
            e.captions = js.at("captions").get<std::vector<std::string>>();
            e.tuples = detail::tuples_from_json(js.at("tuples"));
            e.features = Tensor::vector(js.at("features").get<std::vector<double>>());
            split.entries.push_back(std::move(e));
        }
    } catch (const json::exception& ex) {
        throw FormatError(std::string("malformed corpus JSON: ") + ex.what());
    }
    return split;
}

void save_split(const CorpusSplit& split, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write corpus file " + path.string());
    out << split_to_json(split);
}

CorpusSplit load_split(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot read corpus file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return split_from_json(ss.str());
}

std::vector<Example> make_examples(const CorpusSplit& split, const Vocabulary& vocab) {
    std::vector<Example> out;
    for (const auto& e : split.entries) {
        for (std::size_t c = 0; c < e.captions.size(); ++c)
            out.push_back(Example{split.name + "/" + std::to_string(e.scene.seed) + "#" + std::to_string(c),
                                  e.features, vocab.encode(e.captions[c])});
    }
    return out;
}

std::vector<Tensor> split_features(const CorpusSplit& split) {
    std::vector<Tensor> out;
    out.reserve(split.entries.size());
    for (const auto& e : split.entries) out.push_back(e.features);
    return out;
}

}  // namespace tpgn
