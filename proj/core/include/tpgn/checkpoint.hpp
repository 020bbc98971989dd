#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tpgn/params.hpp"
#include "tpgn/training.hpp"

namespace tpgn {

/// Everything needed to run a trained generator: sizes, weights, the
/// corpus feature mean, and the word list. Pre-training checkpoints also
/// carry the sentence encoder.
struct Checkpoint {
    TpgnConfig config;
    std::uint64_t seed = 0;
    TpgnParams params;
    Tensor v_bar;
    std::vector<std::string> vocabulary;
    std::optional<SentenceEncoderParams> encoder;

    /// Short content hash (FNV-1a 64 over the binary encoding, hex).
    std::string id() const;
};

/// Binary layout: 8-byte magic "TPGNCKP1", little-endian u64 header length,
/// JSON header {config, seed, vocabulary, tensors: [{name, dims}]}, then the
/// raw little-endian doubles of each tensor in header order. Bit-exact.
std::string checkpoint_to_binary(const Checkpoint& ckpt);
Checkpoint checkpoint_from_binary(const std::string& bytes);

/// JSON document with the same header fields and per-tensor "data" arrays.
/// Doubles are written with round-trip precision.
std::string checkpoint_to_json(const Checkpoint& ckpt);
Checkpoint checkpoint_from_json(const std::string& text);

/// ".json" paths use the text form, anything else the binary form.
void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace tpgn
