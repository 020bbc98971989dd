#pragma once

#include "json.hpp"
#include "tpgn/scene.hpp"

namespace tpgn::detail {

nlohmann::json scene_to_json(const Scene& scene);
/// Throws FormatError on unknown words; nlohmann exceptions on bad shape.
Scene scene_from_json(const nlohmann::json& js);

nlohmann::json tuples_to_json(const SceneGraph& tuples);
SceneGraph tuples_from_json(const nlohmann::json& js);

}  // namespace tpgn::detail
