#include "hera/http_backend.hpp"

#include "hera/errors.hpp"

#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <thread>

namespace hera {

using nlohmann::json;

struct HttpBackend::Impl {
    HttpBackendConfig config;
    httplib::Client client;
    std::string bearer;

    explicit Impl(HttpBackendConfig cfg)
        : config(std::move(cfg)), client(config.base_url) {
        client.set_connection_timeout(config.timeout_s, 0);
        client.set_read_timeout(config.timeout_s, 0);
        if (const char* key = std::getenv(config.api_key_env.c_str())) {
            bearer = key;
        }
    }
};

HttpBackend::HttpBackend(HttpBackendConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

HttpBackend::~HttpBackend() = default;

std::string HttpBackend::name() const {
    return "http:" + impl_->config.model;
}

namespace {

bool retryable_status(int status) {
    return status == 429 || status >= 500;
}

}  // namespace

CompletionResult HttpBackend::complete(const PromptRequest& request) {
    const HttpBackendConfig& cfg = impl_->config;
    json body = {
        {"model", cfg.model},
        {"messages", json::array({{{"role", "user"}, {"content", request.rendered_prompt}}})},
        {"max_tokens", request.max_output_tokens},
        {"temperature", request.temperature},
    };
    httplib::Headers headers;
    if (!impl_->bearer.empty()) {
        headers.emplace("Authorization", "Bearer " + impl_->bearer);
    }
    const std::string payload = body.dump();

    std::string last_error;
    for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(
                std::chrono::milliseconds(static_cast<long>(cfg.backoff_ms) << (attempt - 1)));
        }
        auto res = impl_->client.Post(cfg.path, headers, payload, "application/json");
        if (!res) {
            last_error = "connection error (" + httplib::to_string(res.error()) + ")";
            continue;
        }
        if (retryable_status(res->status)) {
            last_error = "status " + std::to_string(res->status);
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            throw BackendRejected("backend rejected request: status " +
                                  std::to_string(res->status) + " " + res->body);
        }
        json reply = json::parse(res->body, nullptr, false);
        if (reply.is_discarded() || !reply.contains("choices") || reply["choices"].empty()) {
            throw BackendRejected("malformed completion response: " + res->body);
        }
        CompletionResult result;
        const json& choice = reply["choices"][0];
        if (choice.contains("message") && choice["message"].contains("content")) {
            result.text = choice["message"]["content"].get<std::string>();
        }
        if (reply.contains("usage")) {
            result.prompt_tokens = reply["usage"].value("prompt_tokens", 0);
            result.output_tokens = reply["usage"].value("completion_tokens", 0);
        }
        result.backend_name = name();
        return result;
    }
    throw BackendUnreachable("backend unreachable after " +
                             std::to_string(cfg.max_attempts) + " attempts: " + last_error);
}

}  // namespace hera
