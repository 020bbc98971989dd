#include "tpgn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tpgn/errors.hpp"

namespace tpgn {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'T', 'P', 'G', 'N', 'C', 'K', 'P', '1'};
constexpr const char* kJsonFormat = "tpgn-checkpoint/1";

json config_to_json(const TpgnConfig& c) {
    return {{"d", c.d},           {"vocab", c.vocab},       {"feature_dim", c.feature_dim},
            {"max_len", c.max_len}, {"start_id", c.start_id}, {"end_id", c.end_id}};
}

TpgnConfig config_from_json(const json& j) {
    TpgnConfig c;
    c.d = j.at("d").get<std::size_t>();
    c.vocab = j.at("vocab").get<std::size_t>();
    c.feature_dim = j.at("feature_dim").get<std::size_t>();
    c.max_len = j.at("max_len").get<std::size_t>();
    c.start_id = j.at("start_id").get<WordId>();
    c.end_id = j.at("end_id").get<WordId>();
    c.validate();
    return c;
}

// (name, tensor*) in serialization order
template <class CK>
auto named_tensors(CK& ckpt) {
    using T = std::conditional_t<std::is_const_v<CK>, const Tensor, Tensor>;
    std::vector<std::pair<std::string, T*>> out;
    for_each_weight([&](const std::string& name, T& t) { out.emplace_back(name, &t); }, ckpt.params);
    out.emplace_back("v_bar", &ckpt.v_bar);
    if (ckpt.encoder)
        for_each_encoder_weight([&](const std::string& name, T& t) { out.emplace_back(name, &t); },
                                *ckpt.encoder);
    return out;
}

json header_of(const Checkpoint& ckpt) {
    json h;
    h["config"] = config_to_json(ckpt.config);
    h["seed"] = ckpt.seed;
    h["vocabulary"] = ckpt.vocabulary;
    h["has_encoder"] = ckpt.encoder.has_value();
    json tensors = json::array();
    for (const auto& [name, t] : named_tensors(ckpt)) tensors.push_back({{"name", name}, {"dims", t->shape()}});
    h["tensors"] = std::move(tensors);
    return h;
}

// Fills every slot of `ckpt` from `read(name, expected_shape)`.
template <class Reader>
void fill_tensors(Checkpoint& ckpt, const json& header, Reader&& read) {
    ckpt.config = config_from_json(header.at("config"));
    ckpt.seed = header.at("seed").get<std::uint64_t>();
    ckpt.vocabulary = header.at("vocabulary").get<std::vector<std::string>>();
    ckpt.params = zero_params(ckpt.config);
    ckpt.v_bar = Tensor({ckpt.config.feature_dim});
    if (header.at("has_encoder").get<bool>()) ckpt.encoder = init_sentence_encoder(ckpt.config, 0);
    const auto& listed = header.at("tensors");
    auto slots = named_tensors(ckpt);
    if (listed.size() != slots.size()) throw FormatError("checkpoint tensor count mismatch");
    for (std::size_t i = 0; i < slots.size(); ++i) {
        const auto& [name, t] = slots[i];
        if (listed[i].at("name").get<std::string>() != name)
            throw FormatError("checkpoint tensor order mismatch at '" + name + "'");
        if (listed[i].at("dims").get<Shape>() != t->shape())
            throw FormatError("checkpoint tensor '" + name + "' has unexpected dims");
        read(i, *t);
    }
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace

std::string Checkpoint::id() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(checkpoint_to_binary(*this))));
    return buf;
}

std::string checkpoint_to_binary(const Checkpoint& ckpt) {
    const std::string header = header_of(ckpt).dump();
    std::string out(kMagic, sizeof kMagic);
    const std::uint64_t len = header.size();
    out.append(reinterpret_cast<const char*>(&len), sizeof len);
    out += header;
    for (const auto& [name, t] : named_tensors(ckpt))
        out.append(reinterpret_cast<const char*>(t->data().data()), t->size() * sizeof(double));
    return out;
}

Checkpoint checkpoint_from_binary(const std::string& bytes) {
    if (bytes.size() < sizeof kMagic + 8 || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0)
        throw FormatError("not a binary tpgn checkpoint");
    std::uint64_t len = 0;
    std::memcpy(&len, bytes.data() + sizeof kMagic, sizeof len);
    std::size_t pos = sizeof kMagic + sizeof len;
    if (bytes.size() < pos + len) throw FormatError("truncated checkpoint header");
    Checkpoint ckpt;
    try {
        const json header = json::parse(bytes.substr(pos, len));
        pos += len;
        fill_tensors(ckpt, header, [&](std::size_t, Tensor& t) {
            const std::size_t n = t.size() * sizeof(double);
            if (bytes.size() < pos + n) throw FormatError("truncated checkpoint data");
            std::memcpy(t.data().data(), bytes.data() + pos, n);
            pos += n;
        });
    } catch (const json::exception& ex) {
        throw FormatError(std::string("malformed checkpoint header: ") + ex.what());
    }
    if (pos != bytes.size()) throw FormatError("trailing bytes after checkpoint data");
    return ckpt;
}

std::string checkpoint_to_json(const Checkpoint& ckpt) {
    json doc = header_of(ckpt);
    doc["format"] = kJsonFormat;
    json data = json::array();
    for (const auto& [name, t] : named_tensors(ckpt)) data.push_back(t->storage());
    doc["data"] = std::move(data);
    return doc.dump() + "\n";
}

Checkpoint checkpoint_from_json(const std::string& text) {
    Checkpoint ckpt;
    try {
        const json doc = json::parse(text);
        if (doc.value("format", "") != kJsonFormat) throw FormatError("not a tpgn JSON checkpoint");
        const auto& data = doc.at("data");
        fill_tensors(ckpt, doc, [&](std::size_t i, Tensor& t) {
            const auto values = data.at(i).get<std::vector<double>>();
            if (values.size() != t.size()) throw FormatError("checkpoint tensor data length mismatch");
            std::copy(values.begin(), values.end(), t.data().begin());
        });
    } catch (const json::exception& ex) {
        throw FormatError(std::string("malformed JSON checkpoint: ") + ex.what());
    }
    return ckpt;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write " + path.string());
    out << bytes;
    if (!out) throw FormatError("write failed for " + path.string());
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
    write_file(path, path.extension() == ".json" ? checkpoint_to_json(ckpt) : checkpoint_to_binary(ckpt));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    return path.extension() == ".json" ? checkpoint_from_json(bytes) : checkpoint_from_binary(bytes);
}

}  // namespace tpgn
