#pragma once

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>

#include <json.hpp>

#include "aspectsum/orchestrator.hpp"

namespace httplib {
class Server;
}

namespace aspectsum {

inline constexpr std::size_t kReviewPageSize = 20;

struct ApiResponse {
    int status = 200;
    nlohmann::json body;
};

struct ApiOptions {
    std::string cors_origin = "*";
    /// Run the pipeline in the background when an ingest triggers.
    bool auto_run = true;
};

/// Runs pipeline jobs for triggered products on one background thread. A
/// product queued twice before its run starts runs once.
class PipelineScheduler {
public:
    explicit PipelineScheduler(Orchestrator& orchestrator);
    ~PipelineScheduler();

    PipelineScheduler(const PipelineScheduler&) = delete;
    PipelineScheduler& operator=(const PipelineScheduler&) = delete;

    void schedule(const std::string& product_id);
    /// Blocks until the queue is empty and no job is running.
    void drain();
    std::optional<std::string> last_error(const std::string& product_id) const;
    std::size_t runs_completed() const;

private:
    void loop(std::stop_token stop);

    Orchestrator& orchestrator_;
    mutable std::mutex mutex_;
    std::condition_variable_any wake_;
    std::condition_variable idle_;
    std::deque<std::string> queue_;
    std::set<std::string> queued_;
    bool busy_ = false;
    std::size_t runs_ = 0;
    std::map<std::string, std::string> errors_;
    std::jthread worker_;
};

/// JSON endpoints over an Orchestrator. Handlers are plain member functions so
/// they can be exercised without a socket; bind() mounts them on a server.
class ApiService {
public:
    ApiService(Orchestrator& orchestrator, ApiOptions options = {}, Clock clock = now_utc);
    ~ApiService();

    /// POST /products/{id}/reviews
    ApiResponse post_review(const std::string& product_id, const std::string& body);
    /// GET /products/{id}/summary
    ApiResponse get_summary(const std::string& product_id) const;
    /// GET /products/{id}/aspects
    ApiResponse get_aspects(const std::string& product_id) const;
    /// GET /products/{id}/reviews?aspect=&sentiment=&page=
    ApiResponse get_reviews(const std::string& product_id, const std::optional<std::string>& aspect,
                            const std::optional<std::string>& sentiment, const std::optional<std::string>& page) const;

    void bind(httplib::Server& server);
    /// Blocks serving until stop() is called. Throws Error if the bind fails.
    void serve(const std::string& host, int port);
    /// Binds to an ephemeral port and serves on a background thread; returns the port.
    int start_background(const std::string& host = "127.0.0.1");
    void stop();

    PipelineScheduler& scheduler() { return scheduler_; }

private:
    Orchestrator& orchestrator_;
    ApiOptions options_;
    Clock clock_;
    PipelineScheduler scheduler_;
    std::unique_ptr<httplib::Server> server_;
    std::thread server_thread_;
};

}  // namespace aspectsum
