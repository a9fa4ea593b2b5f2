#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "aspectsum/domain.hpp"
#include "aspectsum/llm_gateway.hpp"
#include "aspectsum/templates.hpp"

namespace aspectsum {

/// One `[aspect: A | sentiment: S | mentions: N]` header per bucket, in bucket
/// order, each followed by `<review id="...">` blocks for the bucket's reviews
/// sorted by id. Throws ValidationError for an empty selection or a review
/// missing from `reviews`.
std::string build_aspect_sections(const SelectionResult& selection, std::span<const Review> reviews);

std::string build_summary_prompt(const SelectionResult& selection, std::span<const Review> reviews,
                                 const TemplateSet& templates);

/// True iff the Unicode scalar count is within [kHardSummaryMin, kHardSummaryMax].
bool summary_length_ok(std::string_view text);

/// Stage 4. Regenerates up to twice when the output falls outside the hard
/// length bounds; the last attempt is kept with length_ok = false.
class Summarizer {
public:
    static constexpr int kMaxGenerations = 3;

    Summarizer(const LlmGateway& gateway, const TemplateSet& templates, Clock clock = now_utc);

    /// Gateway errors propagate; nothing is recorded for the product then.
    SummaryRecord generate_summary(const SelectionResult& selection, std::span<const Review> reviews,
                                   std::uint64_t review_count) const;

private:
    const LlmGateway& gateway_;
    const TemplateSet& templates_;
    Clock clock_;
};

}  // namespace aspectsum
