#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tpgn/scene.hpp"
#include "tpgn/training.hpp"

namespace tpgn {

struct SeedRange {
    std::uint64_t first = 0;
    std::uint64_t last = 0;  ///< exclusive

    std::size_t size() const { return static_cast<std::size_t>(last - first); }
};

/// Canonical splits: disjoint scene-seed ranges.
inline constexpr SeedRange kTrainSeeds{0, 2000};
inline constexpr SeedRange kValSeeds{2000, 2200};
inline constexpr SeedRange kTestSeeds{2200, 2400};

SeedRange split_range(const std::string& split);

struct CorpusEntry {
    Scene scene;
    std::vector<std::string> captions;
    SceneGraph tuples;
    Tensor features;
};

struct CorpusSplit {
    std::string name;
    SeedRange seeds;
    std::uint64_t salt = 0;
    std::size_t feature_dim = 0;
    std::vector<CorpusEntry> entries;
};

CorpusEntry make_entry(const Scene& scene, std::size_t feature_dim);

CorpusSplit generate_split(const std::string& name, SeedRange seeds, std::uint64_t salt,
                           std::size_t feature_dim);

/// JSON document: {"format", "split", "seed_first", "seed_last", "salt",
/// "feature_dim", "vocabulary", "scenes": [{"seed", "objects", "relations",
/// "captions", "tuples", "features"}]}
std::string split_to_json(const CorpusSplit& split);
CorpusSplit split_from_json(const std::string& text);

void save_split(const CorpusSplit& split, const std::filesystem::path& path);
CorpusSplit load_split(const std::filesystem::path& path);

/// One training example per (scene, gold caption).
std::vector<Example> make_examples(const CorpusSplit& split, const Vocabulary& vocab);

std::vector<Tensor> split_features(const CorpusSplit& split);

}  // namespace tpgn
