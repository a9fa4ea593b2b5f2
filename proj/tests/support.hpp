#pragma once

#include <atomic>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <string>

#include "aspectsum/dataset_io.hpp"
#include "aspectsum/llm_gateway.hpp"

namespace testing_support {

using namespace aspectsum;

inline std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(ASPECTSUM_FIXTURES) / name; }

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Timestamp at(const std::string& iso) { return *parse_timestamp(iso); }

inline Clock fixed_clock(const std::string& iso = "2024-06-01T00:00:00Z") {
    auto t = at(iso);
    return [t] { return t; };
}

inline LlmGateway::Sleeper no_sleep() {
    return [](Millis) {};
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("aspectsum-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

/// Backend answering from a per-template script, falling back to a handler.
/// Counts calls per template.
class ScriptedBackend : public LlmBackend {
public:
    using Step = std::function<std::string(const BackendRequest&)>;

    void push(TemplateId id, Step step) {
        std::lock_guard lock(mutex_);
        script_[id].push_back(std::move(step));
    }
    void push_text(TemplateId id, std::string text) {
        push(id, [text](const BackendRequest&) { return text; });
    }
    void push_failure(TemplateId id, BackendFailure kind) {
        push(id, [kind](const BackendRequest&) -> std::string { throw BackendError(kind, "scripted failure"); });
    }
    void set_fallback(Step step) {
        std::lock_guard lock(mutex_);
        fallback_ = std::move(step);
    }

    std::string complete(const BackendRequest& request) override {
        Step step;
        {
            std::lock_guard lock(mutex_);
            ++calls_[request.template_id];
            prompts_.emplace_back(request.prompt);
            auto& q = script_[request.template_id];
            if (!q.empty()) {
                step = std::move(q.front());
                q.pop_front();
            } else {
                step = fallback_;
            }
        }
        if (!step) throw BackendError(BackendFailure::Transport, "script exhausted");
        return step(request);
    }
    std::string id() const override { return "scripted"; }

    int calls(TemplateId id) const {
        std::lock_guard lock(mutex_);
        auto it = calls_.find(id);
        return it == calls_.end() ? 0 : it->second;
    }
    std::vector<std::string> prompts() const {
        std::lock_guard lock(mutex_);
        return prompts_;
    }

private:
    mutable std::mutex mutex_;
    std::map<TemplateId, std::deque<Step>> script_;
    std::map<TemplateId, int> calls_;
    std::vector<std::string> prompts_;
    Step fallback_;
};

/// Wraps a backend and counts calls per template.
class CountingBackend : public LlmBackend {
public:
    explicit CountingBackend(std::shared_ptr<LlmBackend> inner) : inner_(std::move(inner)) {}
    std::string complete(const BackendRequest& r) override {
        ++counts_[static_cast<std::size_t>(r.template_id)];
        return inner_->complete(r);
    }
    std::string id() const override { return inner_->id(); }
    std::size_t calls(TemplateId id) const { return counts_[static_cast<std::size_t>(id)].load(); }

private:
    std::shared_ptr<LlmBackend> inner_;
    std::array<std::atomic<std::size_t>, 3> counts_{};
};

inline std::vector<Review> golden_reviews() {
    std::vector<Review> out;
    for (auto& rec : load_reviews_table(fixture("golden_product.jsonl")).records) out.push_back(rec.review);
    return out;
}

inline Review make_review(const std::string& id, const std::string& product, const std::string& text,
                          const std::string& created = "2024-01-01T00:00:00Z") {
    return Review{id, product, text, at(created), std::nullopt, std::nullopt};
}

}  // namespace testing_support
