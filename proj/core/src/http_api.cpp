#include "tpgn/http_api.hpp"

#include "httplib.h"
#include "json.hpp"
#include "tpgn/errors.hpp"

namespace tpgn {

using nlohmann::json;

int http_status(CaptchaError::Kind kind) {
    switch (kind) {
        case CaptchaError::Kind::not_found: return 404;
        case CaptchaError::Kind::replay: return 409;
        case CaptchaError::Kind::expired: return 410;
        case CaptchaError::Kind::pool_empty: return 503;
        case CaptchaError::Kind::bad_request: return 400;
    }
    return 500;
}

const char* error_name(CaptchaError::Kind kind) {
    switch (kind) {
        case CaptchaError::Kind::not_found: return "not_found";
        case CaptchaError::Kind::replay: return "replay";
        case CaptchaError::Kind::expired: return "expired";
        case CaptchaError::Kind::pool_empty: return "pool_empty";
        case CaptchaError::Kind::bad_request: return "bad_request";
    }
    return "internal";
}

namespace {

void reply(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, const CaptchaError& err) {
    reply(res, http_status(err.kind()), {{"error", error_name(err.kind())}, {"message", err.what()}});
}

}  // namespace

struct HttpApi::Impl {
    CaptchaService& service;
    httplib::Server server;

    explicit Impl(CaptchaService& s) : service(s) {}
};

HttpApi::HttpApi(CaptchaService& service, std::optional<std::filesystem::path> static_dir)
    : impl_(std::make_unique<Impl>(service)) {
    auto& srv = impl_->server;
    CaptchaService& svc = impl_->service;

    srv.Get("/api/health", [&svc](const httplib::Request&, httplib::Response& res) {
        reply(res, 200, {{"pool_size", svc.pool().entries.size()}, {"model_checkpoint", svc.pool().model_checkpoint}});
    });

    srv.Get("/api/challenge", [&svc](const httplib::Request&, httplib::Response& res) {
        try {
            const auto c = svc.issue_challenge();
            reply(res, 200, {{"session_id", c.session_id}, {"svg", c.svg}, {"expires_at", c.expires_at}});
        } catch (const CaptchaError& err) {
            reply_error(res, err);
        }
    });

    srv.Post("/api/answer", [&svc](const httplib::Request& req, httplib::Response& res) {
        std::string session_id, caption;
        try {
            const json body = json::parse(req.body);
            session_id = body.at("session_id").get<std::string>();
            caption = body.at("caption").get<std::string>();
        } catch (const json::exception&) {
            reply_error(res, CaptchaError(CaptchaError::Kind::bad_request,
                                          "expected a JSON body with string fields session_id and caption"));
            return;
        }
        try {
            const auto v = svc.grade_answer(session_id, caption);
            reply(res, 200, {{"decision", decision_name(v.decision)}, {"score", v.score}, {"threshold", v.threshold}});
        } catch (const CaptchaError& err) {
            reply_error(res, err);
        }
    });

    if (static_dir) {
        TPGN_REQUIRE(srv.set_mount_point("/", static_dir->string()),
                     "static directory not found: " + static_dir->string());
    }
}

HttpApi::~HttpApi() { stop(); }

int HttpApi::bind(const std::string& host, int port) {
    auto& srv = impl_->server;
    if (port == 0) return srv.bind_to_any_port(host);
    return srv.bind_to_port(host, port) ? port : -1;
}

bool HttpApi::serve() { return impl_->server.listen_after_bind(); }

void HttpApi::stop() {
    if (impl_) impl_->server.stop();
}

void HttpApi::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace tpgn
