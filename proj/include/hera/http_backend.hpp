#pragma once

#include "hera/backend.hpp"

#include <memory>
#include <string>

namespace hera {

struct HttpBackendConfig {
    std::string base_url = "http://127.0.0.1:8080";
    std::string path = "/v1/chat/completions";
    std::string model = "default";
    std::string api_key_env = "HERA_API_KEY";
    int max_attempts = 3;
    int backoff_ms = 1000;  // 1s, 2s, 4s
    int timeout_s = 120;
};

/// Chat-style completion client. Sends the rendered prompt as a single user
/// message; reads the first choice's message content. Transient failures
/// (connection errors, 429, 5xx) are retried with exponential backoff up to
/// max_attempts; other non-2xx statuses raise BackendRejected.
class HttpBackend final : public Backend {
public:
    explicit HttpBackend(HttpBackendConfig config);
    ~HttpBackend() override;

    CompletionResult complete(const PromptRequest& request) override;
    std::string name() const override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace hera
