#include "aspectsum/http_backend.hpp"

#include <chrono>
#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

namespace aspectsum {

using nlohmann::json;

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
    const auto& url = config_.endpoint;
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("LLM endpoint must be an absolute URL: " + url);
    auto scheme = url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https") throw ConfigError("unsupported LLM endpoint scheme: " + scheme);
    auto path_start = url.find('/', scheme_end + 3);
    scheme_host_port_ = url.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
    if (config_.model.empty()) throw ConfigError("LLM model name is empty");
}

HttpBackendConfig HttpBackend::config_from_environment(std::string endpoint, std::string model) {
    const char* key = std::getenv("LLM_API_KEY");
    if (!key || !*key) throw ConfigError("LLM_API_KEY is not set");
    return {std::move(endpoint), std::move(model), key};
}

std::string HttpBackend::complete(const BackendRequest& request) {
    httplib::Client client(scheme_host_port_);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(request.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(request.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());

    json body{{"model", config_.model},
              {"temperature", config_.temperature},
              {"messages", json::array({{{"role", "user"}, {"content", std::string(request.prompt)}}})}};
    httplib::Headers headers{{"Authorization", "Bearer " + config_.api_key}};

    const auto started = std::chrono::steady_clock::now();
    auto res = client.Post(path_, headers, body.dump(), "application/json");
    if (!res) {
        const auto elapsed = std::chrono::steady_clock::now() - started;
        const auto err = res.error();
        if (err == httplib::Error::ConnectionTimeout || (err == httplib::Error::Read && elapsed >= request.timeout))
            throw BackendError(BackendFailure::Timeout, "request timed out: " + httplib::to_string(err));
        throw BackendError(BackendFailure::Transport, "transport error: " + httplib::to_string(err));
    }
    if (res->status == 401 || res->status == 403)
        throw BackendError(BackendFailure::Auth, "endpoint rejected credentials (HTTP " + std::to_string(res->status) + ")");
    if (res->status == 429) throw BackendError(BackendFailure::RateLimited, "rate limited (HTTP 429)");
    if (res->status >= 500) throw BackendError(BackendFailure::Transport, "server error HTTP " + std::to_string(res->status));
    if (res->status != 200)
        throw BackendError(BackendFailure::Transport, "unexpected HTTP " + std::to_string(res->status));

    json doc = json::parse(res->body, nullptr, false);
    if (doc.is_discarded()) throw BackendError(BackendFailure::Transport, "response body is not JSON");
    try {
        return doc.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        throw BackendError(BackendFailure::Transport, std::string("unexpected response shape: ") + e.what());
    }
}

}  // namespace aspectsum
