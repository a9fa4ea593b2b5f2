#include <gtest/gtest.h>

#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "aspectsum/errors.hpp"
#include "aspectsum/http_backend.hpp"

using namespace aspectsum;
using nlohmann::json;

namespace {

class FakeProvider {
public:
    FakeProvider() {
        server_.Post("/v1/chat", [this](const httplib::Request& req, httplib::Response& res) {
            last_auth_ = req.get_header_value("Authorization");
            auto body = json::parse(req.body);
            const auto prompt = body["messages"][0]["content"].get<std::string>();
            if (prompt == "auth") {
                res.status = 401;
            } else if (prompt == "limit") {
                res.status = 429;
            } else if (prompt == "boom") {
                res.status = 503;
            } else if (prompt == "slow") {
                std::this_thread::sleep_for(std::chrono::milliseconds(600));
                res.set_content(R"({"choices":[{"message":{"content":"late"}}]})", "application/json");
            } else if (prompt == "shape") {
                res.set_content(R"({"data":1})", "application/json");
            } else {
                res.set_content(json{{"choices", {{{"message", {{"content", "echo:" + prompt}}}}}}}.dump(),
                                "application/json");
            }
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FakeProvider() {
        server_.stop();
        thread_.join();
    }
    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat"; }
    const std::string& last_auth() const { return last_auth_; }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
    std::string last_auth_;
};

BackendFailure failure_of(HttpBackend& b, const char* prompt, Millis timeout = Millis(5000)) {
    try {
        b.complete({TemplateId::Summarization, prompt, timeout});
    } catch (const BackendError& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected BackendError for " << prompt;
    return BackendFailure::Transport;
}

}  // namespace

TEST(HttpBackend, SendsBearerAndReadsContent) {
    FakeProvider provider;
    HttpBackend b({provider.url(), "test-model", "secret", 0.0});
    EXPECT_EQ(b.complete({TemplateId::Summarization, "hello", Millis(5000)}), "echo:hello");
    EXPECT_EQ(provider.last_auth(), "Bearer secret");
    EXPECT_EQ(b.id(), "http:test-model");
}

TEST(HttpBackend, MapsStatusCodes) {
    FakeProvider provider;
    HttpBackend b({provider.url(), "m", "k", 0.0});
    EXPECT_EQ(failure_of(b, "auth"), BackendFailure::Auth);
    EXPECT_EQ(failure_of(b, "limit"), BackendFailure::RateLimited);
    EXPECT_EQ(failure_of(b, "boom"), BackendFailure::Transport);
    EXPECT_EQ(failure_of(b, "shape"), BackendFailure::Transport);
    EXPECT_EQ(failure_of(b, "slow", Millis(200)), BackendFailure::Timeout);
}

TEST(HttpBackend, UnreachableHostIsTransportOrTimeout) {
    HttpBackend b({"http://127.0.0.1:1/v1/chat", "m", "k", 0.0});
    auto kind = failure_of(b, "x", Millis(500));
    EXPECT_TRUE(kind == BackendFailure::Transport || kind == BackendFailure::Timeout);
}

TEST(HttpBackend, ConfigValidation) {
    EXPECT_THROW(HttpBackend({"ftp://x/y", "m", "k", 0.0}), ConfigError);
    EXPECT_THROW(HttpBackend({"no-scheme", "m", "k", 0.0}), ConfigError);
    EXPECT_THROW(HttpBackend({"http://x/y", "", "k", 0.0}), ConfigError);
}

TEST(HttpBackend, CredentialFromEnvironment) {
    ::unsetenv("LLM_API_KEY");
    EXPECT_THROW(HttpBackend::config_from_environment("http://x/y", "m"), ConfigError);
    ::setenv("LLM_API_KEY", "from-env", 1);
    EXPECT_EQ(HttpBackend::config_from_environment("http://x/y", "m").api_key, "from-env");
    ::unsetenv("LLM_API_KEY");
}
