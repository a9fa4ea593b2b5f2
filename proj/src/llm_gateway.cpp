#include "aspectsum/llm_gateway.hpp"

#include <cmath>
#include <thread>

#include <json.hpp>

#include "aspectsum/text.hpp"

namespace aspectsum {

using nlohmann::json;

namespace {

std::optional<StructuredPayload> try_parse(std::string_view text, TemplateId schema) {
    if (schema == TemplateId::Summarization) {
        auto t = trim(text);
        if (t.empty()) return std::nullopt;
        return SummaryPayload{std::string(t)};
    }
    json doc = json::parse(text.begin(), text.end(), nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object()) return std::nullopt;

    if (schema == TemplateId::AspectExtraction) {
        auto it = doc.find("aspects");
        if (it == doc.end() || !it->is_array()) return std::nullopt;
        ExtractionPayload payload;
        for (const auto& item : *it) {
            if (!item.is_object()) return std::nullopt;
            auto a = item.find("aspect");
            auto s = item.find("sentiment");
            if (a == item.end() || s == item.end() || !a->is_string() || !s->is_string()) return std::nullopt;
            auto sentiment = parse_sentiment(s->get<std::string>());
            if (!sentiment) return std::nullopt;
            payload.mentions.push_back({a->get<std::string>(), *sentiment});
        }
        return payload;
    }

    auto it = doc.find("mappings");
    if (it == doc.end() || !it->is_array()) return std::nullopt;
    ConsolidationPayload payload;
    for (const auto& item : *it) {
        if (!item.is_object()) return std::nullopt;
        auto a = item.find("aspect");
        auto c = item.find("canonical");
        if (a == item.end() || c == item.end() || !a->is_string() || !c->is_string()) return std::nullopt;
        payload.mappings.emplace_back(a->get<std::string>(), c->get<std::string>());
    }
    return payload;
}

// Content of the first fenced block if any, otherwise the span from the first
// '{' to the last '}'.
std::string repair(std::string_view text, TemplateId schema) {
    auto fence = text.find("```");
    if (fence != std::string_view::npos) {
        auto body_start = text.find('\n', fence);
        if (body_start != std::string_view::npos) {
            auto close = text.find("```", body_start + 1);
            auto body = text.substr(body_start + 1, close == std::string_view::npos ? std::string_view::npos
                                                                                     : close - body_start - 1);
            return std::string(trim(body));
        }
    }
    if (schema == TemplateId::Summarization) return std::string(trim(text));
    auto open = text.find('{');
    auto close = text.rfind('}');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open) return std::string(text);
    return std::string(text.substr(open, close - open + 1));
}

}  // namespace

StructuredPayload parse_structured(std::string_view raw_text, TemplateId schema) {
    if (trim(raw_text).empty())
        throw GatewayError(GatewayErrorCode::MalformedOutput, "empty model output");
    if (auto parsed = try_parse(raw_text, schema)) return std::move(*parsed);
    auto repaired = repair(raw_text, schema);
    if (repaired != raw_text) {
        if (auto parsed = try_parse(repaired, schema)) return std::move(*parsed);
    }
    std::string excerpt(raw_text.substr(0, 120));
    throw GatewayError(GatewayErrorCode::MalformedOutput,
                       std::string(to_string(schema)) + " output does not match schema: " + excerpt);
}

LlmGateway::LlmGateway(std::shared_ptr<LlmBackend> backend, GatewayConfig config, Sleeper sleeper)
    : backend_(std::move(backend)), config_(config), sleeper_(std::move(sleeper)) {
    if (!backend_) throw ConfigError("LLM gateway requires a backend");
    if (config_.max_attempts < 1) throw ConfigError("max_attempts must be >= 1");
    if (config_.parallelism < 1) throw ConfigError("parallelism must be >= 1");
    if (!sleeper_) sleeper_ = [](Millis d) { std::this_thread::sleep_for(d); };
    slots_ = std::make_unique<std::counting_semaphore<>>(static_cast<std::ptrdiff_t>(config_.parallelism));
}

LlmCall LlmGateway::make_call(TemplateId id, std::string prompt) const {
    LlmCall call;
    call.template_id = id;
    call.rendered_prompt = std::move(prompt);
    call.max_attempts = config_.max_attempts;
    call.timeout = config_.timeout;
    return call;
}

LlmOutcome LlmGateway::complete(const LlmCall& call) const {
    if (trim(call.rendered_prompt).empty())
        throw GatewayError(GatewayErrorCode::InvalidRequest, "empty prompt");
    if (call.attempt < 1 || call.max_attempts < 1 || call.attempt > call.max_attempts)
        throw GatewayError(GatewayErrorCode::InvalidRequest, "attempt outside [1, max_attempts]");

    const auto started = std::chrono::steady_clock::now();
    bool all_timeouts = true;
    std::string last_error;
    int dispatched = 0;
    for (int attempt = call.attempt; attempt <= call.max_attempts; ++attempt) {
        try {
            slots_->acquire();
            struct Release {
                std::counting_semaphore<>* s;
                ~Release() { s->release(); }
            } release{slots_.get()};
            ++dispatched;
            auto text = backend_->complete({call.template_id, call.rendered_prompt, call.timeout});
            LlmOutcome outcome;
            outcome.raw_text = std::move(text);
            outcome.backend_id = backend_->id();
            outcome.latency = std::chrono::duration_cast<Millis>(std::chrono::steady_clock::now() - started);
            outcome.attempts = dispatched;
            return outcome;
        } catch (const BackendError& e) {
            if (e.kind() == BackendFailure::Auth) throw GatewayError(GatewayErrorCode::AuthFailure, e.what());
            all_timeouts = all_timeouts && e.kind() == BackendFailure::Timeout;
            last_error = e.what();
        }
        if (attempt < call.max_attempts) {
            const double factor = std::pow(config_.backoff_multiplier, attempt - call.attempt);
            sleeper_(Millis(static_cast<Millis::rep>(static_cast<double>(config_.backoff_base.count()) * factor)));
        }
    }
    const auto detail = "after " + std::to_string(dispatched) + " attempt(s): " + last_error;
    if (all_timeouts) throw GatewayError(GatewayErrorCode::Timeout, detail);
    throw GatewayError(GatewayErrorCode::ExhaustedRetries, detail);
}

LlmOutcome LlmGateway::complete_structured(const LlmCall& call) const {
    auto outcome = complete(call);
    outcome.parsed = parse_structured(outcome.raw_text, call.template_id);
    return outcome;
}

}  // namespace aspectsum
