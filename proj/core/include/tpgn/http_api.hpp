#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "tpgn/captcha.hpp"

namespace tpgn {

/// JSON HTTP front end for a CaptchaService:
///   GET  /api/challenge -> {session_id, svg, expires_at}
///   POST /api/answer {session_id, caption} -> {decision, score, threshold}
///   GET  /api/health -> {pool_size, model_checkpoint}
/// Errors carry {"error": kind, "message": text} with 400 (bad request),
/// 404 (unknown session), 409 (replay), 410 (expired) or 503 (empty pool).
class HttpApi {
public:
    /// `static_dir`, when given, is served under "/".
    explicit HttpApi(CaptchaService& service, std::optional<std::filesystem::path> static_dir = std::nullopt);
    ~HttpApi();
    HttpApi(const HttpApi&) = delete;
    HttpApi& operator=(const HttpApi&) = delete;

    /// Binds without serving; port 0 picks a free port. Returns the port or -1.
    int bind(const std::string& host, int port);
    /// Serves until stop(); blocks.
    bool serve();
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

int http_status(CaptchaError::Kind kind);
const char* error_name(CaptchaError::Kind kind);

}  // namespace tpgn
