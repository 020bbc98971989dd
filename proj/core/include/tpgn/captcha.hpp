#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tpgn/checkpoint.hpp"
#include "tpgn/scene.hpp"

namespace tpgn {

struct CaptchaConfig {
    double gamma1 = 0.04;  ///< pool admission: model score < gamma1
    double gamma2 = 0.3;   ///< human verdict: answer score > gamma2
    double session_ttl = 120.0;  ///< seconds
    std::size_t pool_min_size = 1;
    std::size_t max_answer_chars = 500;

    void validate() const;
};

struct PoolEntry {
    Scene scene;
    SceneGraph gold_tuples;
    std::vector<std::string> gold_captions;
    std::string model_caption;
    double model_score = 0.0;
};

struct ChallengePool {
    std::vector<PoolEntry> entries;
    std::string model_checkpoint;  ///< checkpoint id the pool was built with
    CaptchaConfig config;          ///< config at build time
    std::size_t candidates_scored = 0;
};

class PoolTooSmall : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Captioner = std::function<std::string(const Scene&)>;

/// Scores every candidate's model caption against its gold tuples and
/// admits those strictly below gamma1, in candidate order. Throws
/// PoolTooSmall when fewer than pool_min_size are admitted.
ChallengePool build_pool(const Captioner& captioner, std::span<const Scene> candidates,
                         const CaptchaConfig& config, const std::string& model_checkpoint);

/// Uses the checkpoint's generator (greedy decode of the scene features).
ChallengePool build_pool(const Checkpoint& ckpt, std::span<const Scene> candidates,
                         const CaptchaConfig& config);

/// Greedy caption of a scene under a checkpoint.
std::string caption_scene(const Checkpoint& ckpt, const Scene& scene);

/// Re-scores every entry; returns the indices whose stored caption does not
/// score strictly below gamma1.
std::vector<std::size_t> audit_pool(const ChallengePool& pool, double gamma1);

std::string pool_to_json(const ChallengePool& pool);
ChallengePool pool_from_json(const std::string& text);
void save_pool(const ChallengePool& pool, const std::filesystem::path& path);
ChallengePool load_pool(const std::filesystem::path& path);

enum class Decision { human, computer };
const char* decision_name(Decision d);

struct Verdict {
    double score = 0.0;
    Decision decision = Decision::computer;
    double threshold = 0.0;
};

/// human iff score > gamma2.
Verdict judge(double score, double gamma2);
Verdict grade_text(std::string_view answer, const SceneGraph& gold, double gamma2);

struct Challenge {
    std::string session_id;
    std::size_t entry = 0;
    std::string svg;
    double issued_at = 0.0;
    double expires_at = 0.0;
};

class CaptchaError : public std::runtime_error {
public:
    enum class Kind { not_found, expired, replay, pool_empty, bad_request };
    CaptchaError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Live challenge/answer protocol over an immutable pool. Thread-safe.
class CaptchaService {
public:
    using Clock = std::function<double()>;          ///< seconds
    using Random = std::function<std::uint64_t()>;  ///< uniform 64-bit words

    static double system_clock();
    /// Backed by std::random_device.
    static Random system_random();

    CaptchaService(ChallengePool pool, CaptchaConfig config, Clock clock = system_clock,
                   Random random = system_random());

    /// Uniform pool entry, fresh 128-bit session id. Throws CaptchaError
    /// pool_empty when the pool has no entries.
    Challenge issue_challenge();

    /// A session is gradable once, strictly before its expiry time. Throws
    /// CaptchaError not_found / expired / replay / bad_request.
    Verdict grade_answer(const std::string& session_id, std::string_view answer);

    const ChallengePool& pool() const { return pool_; }
    const CaptchaConfig& config() const { return config_; }
    std::size_t sessions_issued() const;

private:
    enum class State { open, graded, expired };
    struct Session {
        std::size_t entry = 0;
        double issued_at = 0.0;
        State state = State::open;
    };

    std::string fresh_nonce();  // caller holds mutex_

    const ChallengePool pool_;
    const CaptchaConfig config_;
    Clock clock_;
    Random random_;
    mutable std::mutex mutex_;
    std::unordered_map<std::string, Session> sessions_;
    std::unordered_set<std::string> used_nonces_;
};

}  // namespace tpgn
