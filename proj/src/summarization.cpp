#include "aspectsum/summarization.hpp"

#include <unordered_map>
#include <variant>

#include "aspectsum/errors.hpp"
#include "aspectsum/text.hpp"

namespace aspectsum {

std::string build_aspect_sections(const SelectionResult& selection, std::span<const Review> reviews) {
    if (selection.buckets.empty() || selection.selected_review_ids.empty())
        throw ValidationError("cannot summarize an empty selection for product " + selection.product_id);
    std::unordered_map<std::string_view, const Review*> by_id;
    for (const auto& r : reviews) by_id.emplace(r.review_id, &r);

    std::string out;
    for (const auto& bucket : selection.buckets) {
        if (!out.empty()) out += '\n';
        out += "[aspect: " + bucket.key.aspect + " | sentiment: " + std::string(to_string(bucket.key.sentiment)) +
               " | mentions: " + std::to_string(bucket.count) + "]\n";
        for (const auto& id : bucket.review_ids) {
            auto it = by_id.find(id);
            if (it == by_id.end()) throw ValidationError("selected review " + id + " was not supplied");
            out += "<review id=\"" + id + "\">\n" + std::string(trim(it->second->text)) + "\n</review>\n";
        }
    }
    if (!out.empty() && out.back() == '\n') out.pop_back();
    return out;
}

std::string build_summary_prompt(const SelectionResult& selection, std::span<const Review> reviews,
                                 const TemplateSet& templates) {
    return templates.render(TemplateId::Summarization,
                            {{"aspect_sections", build_aspect_sections(selection, reviews)},
                             {"min_chars", std::to_string(kTargetSummaryMin)},
                             {"max_chars", std::to_string(kTargetSummaryMax)}});
}

bool summary_length_ok(std::string_view text) {
    const auto n = utf8_length(text);
    return n >= kHardSummaryMin && n <= kHardSummaryMax;
}

Summarizer::Summarizer(const LlmGateway& gateway, const TemplateSet& templates, Clock clock)
    : gateway_(gateway), templates_(templates), clock_(std::move(clock)) {}

SummaryRecord Summarizer::generate_summary(const SelectionResult& selection, std::span<const Review> reviews,
                                           std::uint64_t review_count) const {
    const auto prompt = build_summary_prompt(selection, reviews, templates_);
    SummaryRecord record;
    record.product_id = selection.product_id;
    for (const auto& a : selection.selected_aspects) record.aspects_used.push_back(a.aspect);
    record.review_count_at_generation = review_count;

    for (int generation = 1; generation <= kMaxGenerations; ++generation) {
        auto outcome = gateway_.complete_structured(gateway_.make_call(TemplateId::Summarization, prompt));
        record.summary_text = std::get<SummaryPayload>(*outcome.parsed).text;
        record.model_id = outcome.backend_id;
        record.length_ok = summary_length_ok(record.summary_text);
        if (record.length_ok) break;
    }
    record.generated_at = clock_();
    return record;
}

}  // namespace aspectsum
