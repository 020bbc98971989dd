#include "tpgn/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "tpgn/errors.hpp"

namespace tpgn {

namespace {

constexpr std::size_t kNouns = 15;
constexpr std::size_t kAttributes = 6;
constexpr std::size_t kPrepositions = 5;
constexpr std::size_t kObjectBlock = kNouns + kAttributes;
constexpr std::size_t kRelationOffset = kMaxObjects * kObjectBlock;
constexpr std::size_t kPositionOffset = kRelationOffset + (kMaxObjects - 1) * kPrepositions;

constexpr double kCanvasLo = 0.08;
constexpr double kCanvasHi = 0.92;
constexpr double kMinSeparation = 0.1;

// Offsets (object minus subject) accepted for each preposition, in the
// order above, below, on, beside, near. dy > 0 means the object is lower
// on the canvas, i.e. the subject is above it.
struct Region {
    double dx_lo, dx_hi;  // bounds on |dx|
    double dy_lo, dy_hi;  // bounds on dy (signed) or |dy| when abs_dy
    bool abs_dy;
};

constexpr std::array<Region, kPrepositions> kRegions{{
    {0.0, 0.2, 0.3, 0.5, false},     // above
    {0.0, 0.2, -0.5, -0.3, false},   // below
    {0.0, 0.04, 0.10, 0.16, false},  // on: resting directly on top
    {0.3, 0.5, 0.0, 0.04, true},     // beside
    {0.12, 0.2, 0.12, 0.2, true},    // near: diagonal neighbour
}};

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

bool on_canvas(const SceneObject& o) {
    return o.x >= kCanvasLo && o.x <= kCanvasHi && o.y >= kCanvasLo && o.y <= kCanvasHi;
}

const std::array<const char*, kAttributes> kColours{"#d62728", "#1f77b4", "#2ca02c",
                                                    "#f5d000", "#111111", "#ffffff"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

}  // namespace

bool relation_holds(std::size_t preposition, const SceneObject& subject, const SceneObject& object) {
    TPGN_REQUIRE(preposition < kPrepositions, "preposition index out of range");
    const Region& r = kRegions[preposition];
    const double adx = std::abs(object.x - subject.x);
    const double dy = object.y - subject.y;
    const double ddy = r.abs_dy ? std::abs(dy) : dy;
    return adx >= r.dx_lo && adx <= r.dx_hi && ddy >= r.dy_lo && ddy <= r.dy_hi;
}

void validate_scene(const Scene& scene) {
    const auto n = scene.objects.size();
    TPGN_REQUIRE(n >= 1 && n <= kMaxObjects, "scene must have 1-3 objects");
    TPGN_REQUIRE(scene.relations.size() == n - 1, "scene must relate each consecutive object pair");
    for (std::size_t i = 0; i < n; ++i) {
        const auto& o = scene.objects[i];
        TPGN_REQUIRE(o.noun < kNouns, "noun index out of range");
        TPGN_REQUIRE(!o.attribute || *o.attribute < kAttributes, "attribute index out of range");
        TPGN_REQUIRE(on_canvas(o), "object outside canvas");
        for (std::size_t j = 0; j < i; ++j)
            TPGN_REQUIRE(scene.objects[j].noun != o.noun, "nouns in a scene must be distinct");
    }
    for (std::size_t r = 0; r < scene.relations.size(); ++r) {
        const auto& rel = scene.relations[r];
        TPGN_REQUIRE(rel.subject == r && rel.object == r + 1, "relations must chain consecutive objects");
        TPGN_REQUIRE(relation_holds(rel.preposition, scene.objects[rel.subject], scene.objects[rel.object]),
                     "relation '" + Grammar::standard().prepositions()[rel.preposition] +
                         "' inconsistent with object positions");
    }
}

Scene sample_scene(std::uint64_t seed, std::uint64_t salt) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(salt + 0x51ce)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
    auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };

    Scene scene;
    scene.seed = seed;
    const std::size_t n = 1 + pick(kMaxObjects);

    std::vector<std::size_t> nouns(kNouns);
    for (std::size_t i = 0; i < kNouns; ++i) nouns[i] = i;
    for (std::size_t i = 0; i < n; ++i) std::swap(nouns[i], nouns[i + pick(kNouns - i)]);

    for (std::size_t i = 0; i < n; ++i) {
        SceneObject o;
        o.noun = nouns[i];
        if (unit(rng) < 0.75) o.attribute = pick(kAttributes);
        scene.objects.push_back(o);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) scene.relations.push_back({i, pick(kPrepositions), i + 1});

    // place object 0 freely, then each next object inside its relation
    // region relative to the previous one, restarting on collisions
    for (;;) {
        auto& first = scene.objects[0];
        first.x = uniform(0.15, 0.85);
        first.y = uniform(0.15, 0.85);
        bool ok = true;
        for (std::size_t i = 1; i < n && ok; ++i) {
            const Region& r = kRegions[scene.relations[i - 1].preposition];
            const auto& subj = scene.objects[i - 1];
            auto& obj = scene.objects[i];
            const double dx = uniform(r.dx_lo, r.dx_hi) * (unit(rng) < 0.5 ? -1.0 : 1.0);
            double dy = uniform(r.dy_lo, r.dy_hi);
            if (r.abs_dy && unit(rng) < 0.5) dy = -dy;
            obj.x = subj.x + dx;
            obj.y = subj.y + dy;
            ok = on_canvas(obj) && relation_holds(scene.relations[i - 1].preposition, subj, obj);
            for (std::size_t j = 0; j < i && ok; ++j)
                ok = std::hypot(obj.x - scene.objects[j].x, obj.y - scene.objects[j].y) >= kMinSeparation;
        }
        if (ok) break;
    }
    return scene;
}

void require_feature_dim(std::size_t feature_dim) {
    TPGN_REQUIRE(feature_dim >= kFeatureLayoutSize,
                 "feature_dim " + std::to_string(feature_dim) + " too small for the scene encoding (needs " +
                     std::to_string(kFeatureLayoutSize) + ")");
}

Tensor scene_features(const Scene& scene, std::size_t feature_dim) {
    require_feature_dim(feature_dim);
    Tensor v({feature_dim});
    for (std::size_t s = 0; s < scene.objects.size(); ++s) {
        const auto& o = scene.objects[s];
        v[s * kObjectBlock + o.noun] = 1.0;
        if (o.attribute) v[s * kObjectBlock + kNouns + *o.attribute] = 1.0;
        v[kPositionOffset + 2 * s] = o.x;
        v[kPositionOffset + 2 * s + 1] = o.y;
    }
    for (std::size_t r = 0; r < scene.relations.size(); ++r)
        v[kRelationOffset + r * kPrepositions + scene.relations[r].preposition] = 1.0;
    return v;
}

std::vector<std::string> gold_captions(const Scene& scene) {
    const Grammar& g = Grammar::standard();
    auto noun_phrase = [&](const SceneObject& o, const std::string& det) {
        std::string np = det + " ";
        if (o.attribute) np += g.attributes()[*o.attribute] + " ";
        return np + g.nouns()[o.noun];
    };
    auto build = [&](const std::string& first_det, bool with_verb) {
        std::string text = noun_phrase(scene.objects[0], first_det);
        if (with_verb) text += " " + g.posture_of(scene.objects[0].noun);
        for (const auto& rel : scene.relations)
            text += " " + g.prepositions()[rel.preposition] + " " + noun_phrase(scene.objects[rel.object], "a");
        return text;
    };
    const bool verb_fits = scene.objects.size() < kMaxObjects;
    return {build("a", false), verb_fits ? build("a", true) : build("the", false)};
}

SceneGraph scene_tuples(const Scene& scene) {
    const Grammar& g = Grammar::standard();
    SceneGraph out;
    for (const auto& o : scene.objects) {
        out.insert({g.nouns()[o.noun]});
        if (o.attribute) out.insert({g.nouns()[o.noun], g.attributes()[*o.attribute]});
    }
    for (const auto& r : scene.relations)
        out.insert({g.nouns()[scene.objects[r.subject].noun], g.prepositions()[r.preposition],
                    g.nouns()[scene.objects[r.object].noun]});
    return out;
}

std::string render_svg(const Scene& scene) {
    const Grammar& g = Grammar::standard();
    constexpr double kSize = 400.0;
    constexpr double kRadius = 18.0;
    std::string svg =
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"400\" viewBox=\"0 0 400 400\">\n"
        "<rect class=\"background\" x=\"0\" y=\"0\" width=\"400\" height=\"400\" fill=\"#f4f1e8\"/>\n";
    for (const auto& o : scene.objects) {
        const double cx = o.x * kSize, cy = o.y * kSize;
        const std::string fill = o.attribute ? kColours[*o.attribute] : "#888888";
        const std::string& noun = g.nouns()[o.noun];
        const std::string common = " class=\"object\" fill=\"" + fill + "\" stroke=\"#333333\" stroke-width=\"2\"";
        const std::string title = "<title>" + noun + "</title>";
        if (noun == "circle") {
            svg += "<circle" + common + " cx=\"" + fmt(cx) + "\" cy=\"" + fmt(cy) + "\" r=\"" + fmt(kRadius) +
                   "\">" + title + "</circle>\n";
        } else if (noun == "square") {
            svg += "<rect" + common + " x=\"" + fmt(cx - kRadius) + "\" y=\"" + fmt(cy - kRadius) +
                   "\" width=\"" + fmt(2 * kRadius) + "\" height=\"" + fmt(2 * kRadius) + "\">" + title +
                   "</rect>\n";
        } else {
            // regular polygon (nouns 0-6) or star (nouns 7+) with a per-noun vertex count
            const std::size_t vertices = 3 + o.noun % 7;
            const bool star = o.noun >= 7;
            const std::size_t points = star ? 2 * vertices : vertices;
            std::string pts;
            for (std::size_t k = 0; k < points; ++k) {
                const double angle = -std::numbers::pi / 2 + 2 * std::numbers::pi * static_cast<double>(k) /
                                                                  static_cast<double>(points);
                const double rad = (star && k % 2 == 1) ? kRadius * 0.5 : kRadius;
                if (!pts.empty()) pts += ' ';
                pts += fmt(cx + rad * std::cos(angle)) + "," + fmt(cy + rad * std::sin(angle));
            }
            svg += "<polygon" + common + " points=\"" + pts + "\">" + title + "</polygon>\n";
        }
    }
    svg += "</svg>\n";
    return svg;
}

std::string tuple_string(const Tuple& t) {
    std::string out = "(";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out += ", ";
        out += t[i];
    }
    return out + ")";
}

}  // namespace tpgn
