#include "manifest.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <memory>
#include <stdexcept>

#include "tpgn/checkpoint.hpp"

namespace tpgn::cli {

std::string git_blob_hash(const std::string& bytes) {
    const std::string header = "blob " + std::to_string(bytes.size()) + '\0';
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha1(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), header.data(), header.size()) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
        throw std::runtime_error("SHA-1 digest failed");
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

std::string git_blob_hash_file(const std::filesystem::path& path) { return git_blob_hash(read_file(path)); }

std::filesystem::path RunManifest::write(const std::filesystem::path& dir) const {
    auto files = [](const std::vector<std::filesystem::path>& paths) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& p : paths) {
            nlohmann::json j{{"path", p.string()}};
            j["sha1"] = std::filesystem::is_regular_file(p) ? nlohmann::json(git_blob_hash_file(p)) : nlohmann::json();
            out.push_back(std::move(j));
        }
        return out;
    };
    nlohmann::json doc{{"command", command}, {"config", config}, {"seed", seed},
                       {"inputs", files(inputs)}, {"outputs", files(outputs)}};
    std::filesystem::create_directories(dir.empty() ? "." : dir);
    const auto path = (dir.empty() ? std::filesystem::path(".") : dir) / (command + ".manifest.json");
    write_file(path, doc.dump(2) + "\n");
    return path;
}

}  // namespace tpgn::cli
