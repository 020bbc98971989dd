#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace tpgn::cli {

/// Hex SHA-1 of "blob <size>\0<bytes>", the object id git assigns a file.
std::string git_blob_hash(const std::string& bytes);
std::string git_blob_hash_file(const std::filesystem::path& path);

struct RunManifest {
    std::string command;
    nlohmann::json config;
    std::uint64_t seed = 0;
    std::vector<std::filesystem::path> inputs;
    std::vector<std::filesystem::path> outputs;

    /// Hashes every input and output that exists and writes
    /// <dir>/<command>.manifest.json. Returns the manifest path.
    std::filesystem::path write(const std::filesystem::path& dir) const;
};

}  // namespace tpgn::cli
