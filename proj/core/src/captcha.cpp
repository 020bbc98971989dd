#include "tpgn/captcha.hpp"

#include <chrono>
#include <cstdio>
#include <random>

#include "json_io.hpp"
#include "tpgn/corpus.hpp"
#include "tpgn/errors.hpp"
#include "tpgn/metrics.hpp"

namespace tpgn {

using nlohmann::json;

namespace {

constexpr const char* kPoolFormat = "tpgn-pool/1";

json config_to_json(const CaptchaConfig& c) {
    return {{"gamma1", c.gamma1},
            {"gamma2", c.gamma2},
            {"session_ttl", c.session_ttl},
            {"pool_min_size", c.pool_min_size},
            {"max_answer_chars", c.max_answer_chars}};
}

CaptchaConfig config_from_json(const json& j) {
    CaptchaConfig c;
    c.gamma1 = j.at("gamma1").get<double>();
    c.gamma2 = j.at("gamma2").get<double>();
    c.session_ttl = j.at("session_ttl").get<double>();
    c.pool_min_size = j.at("pool_min_size").get<std::size_t>();
    c.max_answer_chars = j.value("max_answer_chars", c.max_answer_chars);
    return c;
}

// Adapts the injected word source to the standard distributions.
struct WordSource {
    using result_type = std::uint64_t;
    const CaptchaService::Random& next;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()() { return next(); }
};

}  // namespace

void CaptchaConfig::validate() const {
    TPGN_REQUIRE(gamma1 >= 0.0 && gamma1 < gamma2 && gamma2 <= 1.0,
                 "captcha thresholds must satisfy 0 <= gamma1 < gamma2 <= 1");
    TPGN_REQUIRE(session_ttl > 0.0, "session_ttl must be positive");
    TPGN_REQUIRE(max_answer_chars > 0, "max_answer_chars must be positive");
}

std::string caption_scene(const Checkpoint& ckpt, const Scene& scene) {
    const Vocabulary vocab(Grammar::standard());
    const auto trace =
        generate_caption(ckpt.params, ckpt.config, scene_features(scene, ckpt.config.feature_dim), ckpt.v_bar);
    return vocab.decode(trace.caption(ckpt.config.end_id));
}

ChallengePool build_pool(const Captioner& captioner, std::span<const Scene> candidates,
                         const CaptchaConfig& config, const std::string& model_checkpoint) {
    config.validate();
    ChallengePool pool;
    pool.model_checkpoint = model_checkpoint;
    pool.config = config;
    pool.candidates_scored = candidates.size();
    for (const auto& scene : candidates) {
        PoolEntry e{scene, scene_tuples(scene), gold_captions(scene), captioner(scene), 0.0};
        e.model_score = spice_lite(e.model_caption, e.gold_tuples).f1;
        if (e.model_score < config.gamma1) pool.entries.push_back(std::move(e));
    }
    if (pool.entries.size() < config.pool_min_size)
        throw PoolTooSmall("challenge pool has " + std::to_string(pool.entries.size()) + " of " +
                           std::to_string(candidates.size()) + " candidates, below the minimum of " +
                           std::to_string(config.pool_min_size) +
                           "; widen the candidate seed range or raise gamma1");
    return pool;
}

ChallengePool build_pool(const Checkpoint& ckpt, std::span<const Scene> candidates,
                         const CaptchaConfig& config) {
    return build_pool([&](const Scene& s) { return caption_scene(ckpt, s); }, candidates, config, ckpt.id());
}

std::vector<std::size_t> audit_pool(const ChallengePool& pool, double gamma1) {
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < pool.entries.size(); ++i) {
        const auto& e = pool.entries[i];
        if (!(spice_lite(e.model_caption, scene_tuples(e.scene)).f1 < gamma1)) bad.push_back(i);
    }
    return bad;
}

std::string pool_to_json(const ChallengePool& pool) {
    json doc;
    doc["format"] = kPoolFormat;
    doc["model_checkpoint"] = pool.model_checkpoint;
    doc["config"] = config_to_json(pool.config);
    doc["candidates_scored"] = pool.candidates_scored;
    json entries = json::array();
    for (const auto& e : pool.entries)
        entries.push_back({{"scene", detail::scene_to_json(e.scene)},
                           {"gold_tuples", detail::tuples_to_json(e.gold_tuples)},
                           {"gold_captions", e.gold_captions},
                           {"model_caption", e.model_caption},
                           {"model_score", e.model_score}});
    doc["entries"] = std::move(entries);
    return doc.dump(1) + "\n";
}

ChallengePool pool_from_json(const std::string& text) {
    ChallengePool pool;
    try {
        const json doc = json::parse(text);
        if (doc.value("format", "") != kPoolFormat) throw FormatError("not a tpgn pool document");
        pool.model_checkpoint = doc.at("model_checkpoint").get<std::string>();
        pool.config = config_from_json(doc.at("config"));
        pool.candidates_scored = doc.at("candidates_scored").get<std::size_t>();
        for (const auto& je : doc.at("entries"))
            pool.entries.push_back({detail::scene_from_json(je.at("scene")),
                                    detail::tuples_from_json(je.at("gold_tuples")),
                                    je.at("gold_captions").get<std::vector<std::string>>(),
                                    je.at("model_caption").get<std::string>(), je.at("model_score").get<double>()});
    } catch (const json::exception& ex) {
        throw FormatError(std::string("malformed pool JSON: ") + ex.what());
    }
    return pool;
}

void save_pool(const ChallengePool& pool, const std::filesystem::path& path) {
    write_file(path, pool_to_json(pool));
}

ChallengePool load_pool(const std::filesystem::path& path) { return pool_from_json(read_file(path)); }

const char* decision_name(Decision d) { return d == Decision::human ? "human" : "computer"; }

Verdict judge(double score, double gamma2) {
    return {score, score > gamma2 ? Decision::human : Decision::computer, gamma2};
}

Verdict grade_text(std::string_view answer, const SceneGraph& gold, double gamma2) {
    return judge(spice_lite(answer, gold).f1, gamma2);
}

double CaptchaService::system_clock() {
    using namespace std::chrono;
    return duration<double>(system_clock::now().time_since_epoch()).count();
}

CaptchaService::Random CaptchaService::system_random() {
    auto device = std::make_shared<std::random_device>();
    return [device] { return (static_cast<std::uint64_t>((*device)()) << 32) ^ (*device)(); };
}

CaptchaService::CaptchaService(ChallengePool pool, CaptchaConfig config, Clock clock, Random random)
    : pool_(std::move(pool)), config_(config), clock_(std::move(clock)), random_(std::move(random)) {
    config_.validate();
    TPGN_REQUIRE(static_cast<bool>(clock_) && static_cast<bool>(random_), "captcha service needs a clock and rng");
}

std::string CaptchaService::fresh_nonce() {
    for (;;) {
        char buf[33];
        std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(random_()),
                      static_cast<unsigned long long>(random_()));
        if (used_nonces_.insert(buf).second) return buf;
    }
}

Challenge CaptchaService::issue_challenge() {
    if (pool_.entries.empty()) throw CaptchaError(CaptchaError::Kind::pool_empty, "challenge pool is empty");
    std::lock_guard lock(mutex_);
    WordSource source{random_};
    std::uniform_int_distribution<std::size_t> pick(0, pool_.entries.size() - 1);
    Challenge c;
    c.entry = pick(source);
    c.session_id = fresh_nonce();
    c.issued_at = clock_();
    c.expires_at = c.issued_at + config_.session_ttl;
    c.svg = render_svg(pool_.entries[c.entry].scene);
    sessions_.emplace(c.session_id, Session{c.entry, c.issued_at, State::open});
    return c;
}

Verdict CaptchaService::grade_answer(const std::string& session_id, std::string_view answer) {
    if (answer.size() > config_.max_answer_chars)
        throw CaptchaError(CaptchaError::Kind::bad_request,
                           "answer longer than " + std::to_string(config_.max_answer_chars) + " characters");
    std::size_t entry = 0;
    {
        std::lock_guard lock(mutex_);
        const auto it = sessions_.find(session_id);
        if (it == sessions_.end()) throw CaptchaError(CaptchaError::Kind::not_found, "unknown session");
        Session& s = it->second;
        if (s.state == State::graded) throw CaptchaError(CaptchaError::Kind::replay, "session already graded");
        if (s.state == State::expired || clock_() >= s.issued_at + config_.session_ttl) {
            s.state = State::expired;
            throw CaptchaError(CaptchaError::Kind::expired, "session expired");
        }
        s.state = State::graded;
        entry = s.entry;
    }
    return grade_text(answer, pool_.entries[entry].gold_tuples, config_.gamma2);
}

std::size_t CaptchaService::sessions_issued() const {
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

}  // namespace tpgn
