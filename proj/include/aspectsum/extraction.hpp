#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "aspectsum/domain.hpp"
#include "aspectsum/llm_gateway.hpp"
#include "aspectsum/templates.hpp"

namespace aspectsum {

struct ExtractionFailure {
    /// Position in the input batch.
    std::size_t index = 0;
    std::string review_id;
    std::string reason;
};

struct BatchExtraction {
    /// Successful results, in input order.
    std::vector<ExtractionResult> results;
    std::vector<ExtractionFailure> failures;
};

/// Stage 1: one LLM call per review, yielding at most five normalized,
/// deduplicated aspect-sentiment mentions.
class AspectExtractor {
public:
    AspectExtractor(const LlmGateway& gateway, const TemplateSet& templates, Clock clock = now_utc);

    /// Malformed output is retried once with a fresh call. Throws ValidationError
    /// for a blank review and GatewayError when the review cannot be extracted.
    ExtractionResult extract_aspects(const Review& review) const;

    /// Never throws for per-review failures; they are listed in the report.
    BatchExtraction extract_batch(std::span<const Review> reviews, std::size_t parallelism) const;

private:
    const LlmGateway& gateway_;
    const TemplateSet& templates_;
    Clock clock_;
};

}  // namespace aspectsum
