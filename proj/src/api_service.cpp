#include "aspectsum/api_service.hpp"

#include <algorithm>
#include <charconv>

#include <httplib.h>

#include "aspectsum/json_codec.hpp"
#include "aspectsum/selection.hpp"
#include "aspectsum/text.hpp"

namespace aspectsum {

using nlohmann::json;

namespace {

ApiResponse error(int status, std::string_view code, const std::string& message) {
    return {status, json{{"code", code}, {"message", message}}};
}

}  // namespace

PipelineScheduler::PipelineScheduler(Orchestrator& orchestrator)
    : orchestrator_(orchestrator), worker_([this](std::stop_token st) { loop(st); }) {}

PipelineScheduler::~PipelineScheduler() {
    worker_.request_stop();
    wake_.notify_all();
}

void PipelineScheduler::schedule(const std::string& product_id) {
    {
        std::lock_guard lock(mutex_);
        if (!queued_.insert(product_id).second) return;
        queue_.push_back(product_id);
    }
    wake_.notify_one();
}

void PipelineScheduler::drain() {
    std::unique_lock lock(mutex_);
    idle_.wait(lock, [&] { return queue_.empty() && !busy_; });
}

std::optional<std::string> PipelineScheduler::last_error(const std::string& product_id) const {
    std::lock_guard lock(mutex_);
    auto it = errors_.find(product_id);
    if (it == errors_.end()) return std::nullopt;
    return it->second;
}

std::size_t PipelineScheduler::runs_completed() const {
    std::lock_guard lock(mutex_);
    return runs_;
}

void PipelineScheduler::loop(std::stop_token stop) {
    std::unique_lock lock(mutex_);
    while (true) {
        wake_.wait(lock, stop, [&] { return !queue_.empty(); });
        if (stop.stop_requested()) return;
        auto product = std::move(queue_.front());
        queue_.pop_front();
        queued_.erase(product);
        busy_ = true;
        lock.unlock();
        std::optional<std::string> failure;
        try {
            orchestrator_.run_pipeline(product);
        } catch (const std::exception& e) {
            failure = e.what();
        }
        lock.lock();
        if (failure)
            errors_[product] = *failure;
        else
            errors_.erase(product);
        ++runs_;
        busy_ = false;
        if (queue_.empty()) idle_.notify_all();
    }
}

ApiService::ApiService(Orchestrator& orchestrator, ApiOptions options, Clock clock)
    : orchestrator_(orchestrator), options_(std::move(options)), clock_(std::move(clock)), scheduler_(orchestrator) {}

ApiService::~ApiService() { stop(); }

ApiResponse ApiService::post_review(const std::string& product_id, const std::string& body) {
    Review review;
    try {
        auto j = json::parse(body);
        if (!j.is_object()) return error(400, "INVALID_BODY", "body must be a JSON object");
        if (!j.contains("product_id")) j["product_id"] = product_id;
        const bool has_time = j.contains("created_at");
        review = j.get<Review>();
        if (!has_time) review.created_at = clock_();
    } catch (const json::exception& e) {
        return error(400, "INVALID_BODY", e.what());
    } catch (const ValidationError& e) {
        return error(400, "INVALID_BODY", e.what());
    }
    if (review.product_id != product_id)
        return error(400, "INVALID_BODY", "product_id in body does not match the path");

    IngestResult result;
    try {
        result = orchestrator_.ingest(review);
    } catch (const DuplicateReviewError& e) {
        return error(409, "DUPLICATE_REVIEW", e.what());
    } catch (const ValidationError& e) {
        return error(400, "INVALID_BODY", e.what());
    }
    if (result.decision.triggered() && options_.auto_run) scheduler_.schedule(product_id);
    return {202, json{{"accepted", true},
                      {"review_id", review.review_id},
                      {"review_count", result.state.current_review_count},
                      {"trigger", to_string(result.decision.kind)},
                      {"reason", result.decision.reason}}};
}

ApiResponse ApiService::get_summary(const std::string& product_id) const {
    auto summary = orchestrator_.store().get_summary(product_id);
    if (!summary) return error(404, "NOT_FOUND", "no summary for product '" + product_id + "'");
    return {200, json(*summary)};
}

ApiResponse ApiService::get_aspects(const std::string& product_id) const {
    auto profile = orchestrator_.profile(product_id);
    if (!profile || profile->review_count == 0)
        return error(404, "NOT_FOUND", "no aspect profile for product '" + product_id + "'");
    return {200, json{{"product_id", product_id},
                      {"review_count", profile->review_count},
                      {"aspects", top_aspects(*profile, orchestrator_.config().top_k)}}};
}

ApiResponse ApiService::get_reviews(const std::string& product_id, const std::optional<std::string>& aspect,
                                    const std::optional<std::string>& sentiment,
                                    const std::optional<std::string>& page) const {
    std::optional<Sentiment> want_sentiment;
    if (sentiment && !sentiment->empty()) {
        want_sentiment = parse_sentiment(*sentiment);
        if (!want_sentiment) return error(400, "INVALID_QUERY", "unknown sentiment '" + *sentiment + "'");
    }
    std::size_t page_no = 1;
    if (page && !page->empty()) {
        auto [ptr, ec] = std::from_chars(page->data(), page->data() + page->size(), page_no);
        if (ec != std::errc{} || ptr != page->data() + page->size() || page_no == 0)
            return error(400, "INVALID_QUERY", "page must be a positive integer");
    }
    std::optional<std::string> want_aspect;
    if (aspect && !aspect->empty()) want_aspect = normalize_aspect(*aspect);

    auto reviews = orchestrator_.store().get_reviews(product_id);
    if (reviews.empty()) return error(404, "NOT_FOUND", "unknown product '" + product_id + "'");

    std::map<std::string, std::vector<AspectMention>> mentions;
    for (auto& e : orchestrator_.consolidated_extractions(product_id)) mentions[e.review_id] = std::move(e.mentions);

    const bool filtered = want_aspect || want_sentiment;
    std::vector<const Review*> hits;
    for (const auto& r : reviews) {
        if (filtered) {
            auto it = mentions.find(r.review_id);
            if (it == mentions.end()) continue;
            bool match = std::any_of(it->second.begin(), it->second.end(), [&](const AspectMention& m) {
                return (!want_aspect || m.aspect == *want_aspect) && (!want_sentiment || m.sentiment == *want_sentiment);
            });
            if (!match) continue;
        }
        hits.push_back(&r);
    }
    std::sort(hits.begin(), hits.end(), [](const Review* a, const Review* b) {
        if (a->created_at != b->created_at) return a->created_at > b->created_at;
        return a->review_id < b->review_id;
    });

    json rows = json::array();
    const std::size_t begin = (page_no - 1) * kReviewPageSize;
    for (std::size_t i = begin; i < hits.size() && i < begin + kReviewPageSize; ++i) {
        json row = *hits[i];
        auto it = mentions.find(hits[i]->review_id);
        row["mentions"] = it == mentions.end() ? json::array() : json(it->second);
        rows.push_back(std::move(row));
    }
    json filter = json::object();
    if (want_aspect) filter["aspect"] = *want_aspect;
    if (want_sentiment) filter["sentiment"] = to_string(*want_sentiment);
    return {200, json{{"product_id", product_id},
                      {"filter", filter},
                      {"page", page_no},
                      {"page_size", kReviewPageSize},
                      {"total", hits.size()},
                      {"reviews", rows}}};
}

void ApiService::bind(httplib::Server& server) {
    auto reply = [this](httplib::Response& res, const ApiResponse& r) {
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json");
    };
    auto param = [](const httplib::Request& req, const char* name) -> std::optional<std::string> {
        if (!req.has_param(name)) return std::nullopt;
        return req.get_param_value(name);
    };
    server.set_default_headers({{"Access-Control-Allow-Origin", options_.cors_origin}});
    server.Options(R"(/products/([^/]+)/.*)", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });
    server.Post(R"(/products/([^/]+)/reviews)", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, post_review(req.matches[1], req.body));
    });
    server.Get(R"(/products/([^/]+)/summary)", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, get_summary(req.matches[1]));
    });
    server.Get(R"(/products/([^/]+)/aspects)", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, get_aspects(req.matches[1]));
    });
    server.Get(R"(/products/([^/]+)/reviews)",
               [this, reply, param](const httplib::Request& req, httplib::Response& res) {
                   reply(res, get_reviews(req.matches[1], param(req, "aspect"), param(req, "sentiment"),
                                          param(req, "page")));
               });
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (!res.body.empty()) return;
        res.set_content(json{{"code", res.status == 404 ? "NOT_FOUND" : "HTTP_ERROR"},
                             {"message", httplib::status_message(res.status)}}
                            .dump(),
                        "application/json");
    });
    server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string message = "internal error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            message = e.what();
        } catch (...) {
        }
        res.status = 500;
        res.set_content(json{{"code", "INTERNAL"}, {"message", message}}.dump(), "application/json");
    });
}

void ApiService::serve(const std::string& host, int port) {
    server_ = std::make_unique<httplib::Server>();
    bind(*server_);
    if (!server_->bind_to_port(host, port))
        throw Error("cannot listen on " + host + ":" + std::to_string(port));
    server_->listen_after_bind();
}

int ApiService::start_background(const std::string& host) {
    server_ = std::make_unique<httplib::Server>();
    bind(*server_);
    const int port = server_->bind_to_any_port(host);
    if (port <= 0) throw Error("cannot listen on " + host);
    server_thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return port;
}

void ApiService::stop() {
    if (server_) server_->stop();
    if (server_thread_.joinable()) server_thread_.join();
}

}  // namespace aspectsum
