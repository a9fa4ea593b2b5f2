#pragma once

#include <string>

#include "aspectsum/llm_gateway.hpp"

namespace aspectsum {

struct HttpBackendConfig {
    /// Full URL of a chat-completion endpoint, e.g.
    /// https://api.example.com/v1/chat/completions
    std::string endpoint;
    std::string model;
    std::string api_key;
    double temperature = 0.0;
};

/// Chat-completion backend speaking the common
/// {"model", "messages": [{"role", "content"}]} -> {"choices": [{"message": {"content"}}]}
/// request/response shape. 401/403 map to Auth, 429 to RateLimited, 5xx and
/// connection errors to Transport, read timeouts to Timeout.
class HttpBackend : public LlmBackend {
public:
    explicit HttpBackend(HttpBackendConfig config);

    /// Reads the credential from LLM_API_KEY; throws ConfigError if unset.
    static HttpBackendConfig config_from_environment(std::string endpoint, std::string model);

    std::string complete(const BackendRequest& request) override;
    std::string id() const override { return "http:" + config_.model; }

private:
    HttpBackendConfig config_;
    std::string scheme_host_port_;
    std::string path_;
};

}  // namespace aspectsum
