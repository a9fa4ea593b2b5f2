#include "aspectsum/extraction.hpp"

#include <atomic>
#include <optional>
#include <thread>
#include <variant>

#include "aspectsum/errors.hpp"

namespace aspectsum {

AspectExtractor::AspectExtractor(const LlmGateway& gateway, const TemplateSet& templates, Clock clock)
    : gateway_(gateway), templates_(templates), clock_(std::move(clock)) {}

ExtractionResult AspectExtractor::extract_aspects(const Review& review) const {
    validate(review);
    const auto prompt = templates_.render(TemplateId::AspectExtraction, {{"review_text", review.text}});

    constexpr int kCallsOnMalformed = 2;
    for (int call_no = 1;; ++call_no) {
        try {
            auto outcome = gateway_.complete_structured(gateway_.make_call(TemplateId::AspectExtraction, prompt));
            const auto& payload = std::get<ExtractionPayload>(*outcome.parsed);
            std::vector<AspectMention> raw;
            raw.reserve(payload.mentions.size());
            for (const auto& m : payload.mentions) raw.push_back({m.aspect, m.sentiment});
            return ExtractionResult{review.review_id, clamp_mentions(raw), outcome.backend_id, clock_()};
        } catch (const GatewayError& e) {
            if (e.code() != GatewayErrorCode::MalformedOutput || call_no == kCallsOnMalformed) throw;
        }
    }
}

BatchExtraction AspectExtractor::extract_batch(std::span<const Review> reviews, std::size_t parallelism) const {
    if (parallelism < 1) throw ConfigError("extract_batch parallelism must be >= 1");
    std::vector<std::optional<ExtractionResult>> slots(reviews.size());
    std::vector<std::string> errors(reviews.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i = next++; i < reviews.size(); i = next++) {
            try {
                slots[i] = extract_aspects(reviews[i]);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };

    const auto threads = std::min(parallelism, reviews.size());
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    BatchExtraction batch;
    for (std::size_t i = 0; i < reviews.size(); ++i) {
        if (slots[i]) {
            batch.results.push_back(std::move(*slots[i]));
        } else {
            batch.failures.push_back({i, reviews[i].review_id, errors[i]});
        }
    }
    return batch;
}

}  // namespace aspectsum
