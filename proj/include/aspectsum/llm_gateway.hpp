#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <semaphore>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "aspectsum/domain.hpp"
#include "aspectsum/errors.hpp"
#include "aspectsum/templates.hpp"

namespace aspectsum {

using Millis = std::chrono::milliseconds;

/// Failure kinds a backend reports. Auth failures are final; the rest are retried.
enum class BackendFailure { Transport, RateLimited, Timeout, Auth };

class BackendError : public std::runtime_error {
public:
    BackendError(BackendFailure kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    BackendFailure kind() const noexcept { return kind_; }

private:
    BackendFailure kind_;
};

struct BackendRequest {
    TemplateId template_id;
    std::string_view prompt;
    Millis timeout;
};

/// One LLM provider. Implementations must be safe to call from several threads.
class LlmBackend {
public:
    virtual ~LlmBackend() = default;
    /// Returns the model's raw text or throws BackendError.
    virtual std::string complete(const BackendRequest& request) = 0;
    virtual std::string id() const = 0;
};

struct LlmCall {
    TemplateId template_id = TemplateId::AspectExtraction;
    std::string rendered_prompt;
    int attempt = 1;
    int max_attempts = 3;
    Millis timeout{60'000};
};

struct RawMention {
    std::string aspect;
    Sentiment sentiment = Sentiment::Positive;

    bool operator==(const RawMention&) const = default;
};

struct ExtractionPayload {
    std::vector<RawMention> mentions;
    bool operator==(const ExtractionPayload&) const = default;
};

struct ConsolidationPayload {
    /// (raw aspect, canonical aspect) in response order.
    std::vector<std::pair<std::string, std::string>> mappings;
    bool operator==(const ConsolidationPayload&) const = default;
};

struct SummaryPayload {
    std::string text;
    bool operator==(const SummaryPayload&) const = default;
};

using StructuredPayload = std::variant<ExtractionPayload, ConsolidationPayload, SummaryPayload>;

struct LlmOutcome {
    std::string raw_text;
    std::optional<StructuredPayload> parsed;
    std::string backend_id;
    Millis latency{0};
    /// Dispatches made, including the successful one.
    int attempts = 0;
};

/// Validates raw model output against the schema for `schema`. One repair pass
/// strips markdown fences and surrounding prose before failing with
/// GatewayError(MalformedOutput).
StructuredPayload parse_structured(std::string_view raw_text, TemplateId schema);

struct GatewayConfig {
    int max_attempts = 3;
    Millis timeout{60'000};
    Millis backoff_base{1'000};
    double backoff_multiplier = 2.0;
    std::size_t parallelism = 8;
};

/// Retrying, concurrency-bounded front for an LlmBackend.
class LlmGateway {
public:
    using Sleeper = std::function<void(Millis)>;

    explicit LlmGateway(std::shared_ptr<LlmBackend> backend, GatewayConfig config = {},
                        Sleeper sleeper = {});

    LlmGateway(const LlmGateway&) = delete;
    LlmGateway& operator=(const LlmGateway&) = delete;

    /// A call carrying this gateway's attempt and timeout defaults.
    LlmCall make_call(TemplateId id, std::string prompt) const;

    /// Dispatches with exponential backoff. Throws GatewayError with
    /// InvalidRequest, AuthFailure, Timeout (every attempt timed out) or
    /// ExhaustedRetries.
    LlmOutcome complete(const LlmCall& call) const;

    /// complete() followed by parse_structured(); parse failures propagate.
    LlmOutcome complete_structured(const LlmCall& call) const;

    std::string backend_id() const { return backend_->id(); }
    const GatewayConfig& config() const { return config_; }

private:
    std::shared_ptr<LlmBackend> backend_;
    GatewayConfig config_;
    Sleeper sleeper_;
    std::unique_ptr<std::counting_semaphore<>> slots_;
};

}  // namespace aspectsum
