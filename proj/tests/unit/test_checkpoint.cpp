#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "oracles.hpp"
#include "tpgn/checkpoint.hpp"
#include "tpgn/errors.hpp"

using namespace tpgn;

namespace {

Checkpoint sample_checkpoint(bool with_encoder) {
    Checkpoint ck;
    ck.config.d = 3;
    ck.config.vocab = 6;
    ck.config.feature_dim = 5;
    ck.seed = 99;
    ck.params = oracle::random_params(ck.config, 7);
    std::mt19937_64 rng(8);
    ck.v_bar = oracle::random_tensor({5}, rng);
    ck.vocabulary = {"<start>", "<end>", "<unk>", "a", "red", "cat"};
    if (with_encoder) ck.encoder = init_sentence_encoder(ck.config, 3);
    return ck;
}

double max_param_diff(const Checkpoint& a, const Checkpoint& b) {
    double m = max_abs_diff(a.v_bar, b.v_bar);
    for_each_weight([&](const std::string&, const Tensor& x, const Tensor& y) { m = std::max(m, max_abs_diff(x, y)); },
                    a.params, b.params);
    return m;
}

}  // namespace

TEST_CASE("binary checkpoints roundtrip bit-exactly") {
    for (bool enc : {false, true}) {
        const Checkpoint ck = sample_checkpoint(enc);
        const std::string bytes = checkpoint_to_binary(ck);
        const Checkpoint back = checkpoint_from_binary(bytes);
        CHECK(checkpoint_to_binary(back) == bytes);
        CHECK(back.config == ck.config);
        CHECK(back.seed == 99);
        CHECK(back.vocabulary == ck.vocabulary);
        CHECK(back.encoder.has_value() == enc);
        CHECK(back.id() == ck.id());
    }
    CHECK(sample_checkpoint(false).id() != sample_checkpoint(true).id());
}

TEST_CASE("json checkpoints roundtrip") {
    const Checkpoint ck = sample_checkpoint(true);
    const Checkpoint back = checkpoint_from_json(checkpoint_to_json(ck));
    CHECK(max_param_diff(ck, back) <= 1e-15);
    double enc_diff = 0.0;
    for_each_encoder_weight([&](const std::string&, const Tensor& x, const Tensor& y) {
        enc_diff = std::max(enc_diff, max_abs_diff(x, y));
    }, *ck.encoder, *back.encoder);
    CHECK(enc_diff <= 1e-15);
}

TEST_CASE("files pick their format from the extension") {
    const auto dir = std::filesystem::temp_directory_path() / "tpgn_ckpt_test";
    std::filesystem::create_directories(dir);
    const Checkpoint ck = sample_checkpoint(false);
    save_checkpoint(ck, dir / "m.bin");
    save_checkpoint(ck, dir / "m.json");
    CHECK(read_file(dir / "m.json").front() == '{');
    CHECK(checkpoint_to_binary(load_checkpoint(dir / "m.bin")) == checkpoint_to_binary(ck));
    CHECK(max_param_diff(load_checkpoint(dir / "m.json"), ck) <= 1e-15);
    CHECK_THROWS_AS(load_checkpoint(dir / "missing.bin"), FormatError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("corrupt checkpoints are rejected") {
    const std::string bytes = checkpoint_to_binary(sample_checkpoint(false));
    CHECK_THROWS_AS(checkpoint_from_binary(""), FormatError);
    CHECK_THROWS_AS(checkpoint_from_binary("XXXXXXXX" + bytes.substr(8)), FormatError);
    CHECK_THROWS_AS(checkpoint_from_binary(bytes.substr(0, bytes.size() - 8)), FormatError);
    CHECK_THROWS_AS(checkpoint_from_binary(bytes + "x"), FormatError);
    std::string bad_header = bytes;
    bad_header[20] = '#';
    CHECK_THROWS_AS(checkpoint_from_binary(bad_header), FormatError);
    CHECK_THROWS_AS(checkpoint_from_json("{}"), FormatError);
    CHECK_THROWS_AS(checkpoint_from_json("[1, 2"), FormatError);
}
