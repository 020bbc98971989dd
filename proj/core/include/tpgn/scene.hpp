#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tpgn/grammar.hpp"
#include "tpgn/tensor.hpp"

namespace tpgn {

struct SceneObject {
    std::size_t noun = 0;
    std::optional<std::size_t> attribute;
    double x = 0.0;  ///< canvas coordinates in [0, 1], y grows downward
    double y = 0.0;

    friend bool operator==(const SceneObject&, const SceneObject&) = default;
};

/// subject `preposition` object, e.g. "cat above dog".
struct Relation {
    std::size_t subject = 0;
    std::size_t preposition = 0;
    std::size_t object = 0;

    friend bool operator==(const Relation&, const Relation&) = default;
};

/// A synthetic scene: 1-3 objects with distinct nouns, and one relation
/// between each consecutive pair of objects (object i relates to i+1).
struct Scene {
    std::uint64_t seed = 0;
    std::vector<SceneObject> objects;
    std::vector<Relation> relations;

    friend bool operator==(const Scene&, const Scene&) = default;
};

/// A proposition: (noun), (noun, attribute) or (noun, preposition, noun).
using Tuple = std::vector<std::string>;
using SceneGraph = std::set<Tuple>;

constexpr std::size_t kMaxObjects = 3;

/// Feature layout (all blocks contiguous, rest zero-padded):
///   for each object slot s < 3:   one-hot noun (15) then one-hot attribute (6)
///   for each relation slot r < 2: one-hot preposition (5)
///   for each object slot s < 3:   x, y
/// Absent objects and relations leave their blocks at zero.
constexpr std::size_t kFeatureLayoutSize = 3 * (15 + 6) + 2 * 5 + 3 * 2;

/// Geometric test for "subject `preposition` object" on canvas positions.
bool relation_holds(std::size_t preposition, const SceneObject& subject, const SceneObject& object);

/// Throws ContractViolation describing the first broken scene invariant.
void validate_scene(const Scene& scene);

/// Deterministic in (seed, salt). salt = 0 is the canonical world.
Scene sample_scene(std::uint64_t seed, std::uint64_t salt = 0);

/// Throws ContractViolation when feature_dim < kFeatureLayoutSize.
void require_feature_dim(std::size_t feature_dim);

Tensor scene_features(const Scene& scene, std::size_t feature_dim);

/// Gold captions; the first uses the indefinite article throughout, the
/// second inserts the subject's posture verb (scenes with fewer than three
/// objects) or uses "the" as the first determiner (three-object scenes,
/// where the verb would exceed the caption length budget).
std::vector<std::string> gold_captions(const Scene& scene);

SceneGraph scene_tuples(const Scene& scene);

/// Deterministic SVG drawing: one shape element per object, filled with the
/// object's colour (grey when it has no attribute) and titled with its noun.
std::string render_svg(const Scene& scene);

std::string tuple_string(const Tuple& t);

}  // namespace tpgn
