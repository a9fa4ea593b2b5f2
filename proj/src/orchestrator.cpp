#include "aspectsum/orchestrator.hpp"

#include <cmath>
#include <iostream>

#include "aspectsum/text.hpp"

namespace aspectsum {

std::string_view to_string(TriggerKind kind) {
    switch (kind) {
        case TriggerKind::None: return "NONE";
        case TriggerKind::InitialSummary: return "INITIAL_SUMMARY";
        case TriggerKind::Refresh: return "REFRESH";
    }
    return "NONE";
}

std::string_view to_string(PipelineStage stage) {
    switch (stage) {
        case PipelineStage::Precondition: return "precondition";
        case PipelineStage::Extraction: return "extraction";
        case PipelineStage::Consolidation: return "consolidation";
        case PipelineStage::Selection: return "selection";
        case PipelineStage::Summarization: return "summarization";
        case PipelineStage::Persistence: return "persistence";
    }
    return "unknown";
}

std::uint64_t refresh_delta(std::uint64_t baseline, double fraction) {
    // Parts per million keep ceil(0.1 * 110) at 11 rather than 12.
    const auto ppm = static_cast<std::uint64_t>(std::llround(fraction * 1'000'000.0));
    return std::max<std::uint64_t>(1, (ppm * baseline + 999'999) / 1'000'000);
}

TriggerDecision evaluate_trigger(const RefreshState& state, const TriggerPolicy& policy) {
    if (!state.has_summary()) {
        if (state.current_review_count >= policy.min_reviews)
            return {TriggerKind::InitialSummary, std::to_string(state.current_review_count) + " reviews, no summary yet"};
        return {TriggerKind::None, "waiting for " + std::to_string(policy.min_reviews) + " reviews"};
    }
    const auto baseline = *state.count_at_last_summary;
    const auto added = state.current_review_count - baseline;
    const auto needed = refresh_delta(baseline, policy.refresh_fraction);
    if (added >= needed)
        return {TriggerKind::Refresh,
                std::to_string(added) + " new reviews since baseline " + std::to_string(baseline)};
    return {TriggerKind::None, std::to_string(added) + " of " + std::to_string(needed) + " new reviews for refresh"};
}

std::pair<RefreshState, TriggerDecision> on_review_ingested(const Review& review, RefreshState state,
                                                            const TriggerPolicy& policy) {
    if (review.product_id != state.product_id)
        throw ValidationError("review " + review.review_id + " belongs to " + review.product_id + ", not " +
                              state.product_id);
    ++state.current_review_count;
    auto decision = evaluate_trigger(state, policy);
    return {std::move(state), std::move(decision)};
}

Orchestrator::Orchestrator(Store& store, const LlmGateway& gateway, const TemplateSet& templates,
                           AspectVocabulary& vocabulary, PipelineConfig config, Clock clock)
    : store_(store),
      gateway_(gateway),
      templates_(templates),
      vocabulary_(vocabulary),
      config_(config),
      clock_(std::move(clock)),
      extractor_(gateway_, templates_, clock_),
      summarizer_(gateway_, templates_, clock_) {}

std::mutex& Orchestrator::ingest_mutex(const std::string& product_id) {
    std::lock_guard lock(locks_mutex_);
    auto& slot = ingest_locks_[product_id];
    if (!slot) slot = std::make_unique<std::mutex>();
    return *slot;
}

std::mutex& Orchestrator::pipeline_mutex(const std::string& product_id) {
    std::lock_guard lock(locks_mutex_);
    auto& slot = pipeline_locks_[product_id];
    if (!slot) slot = std::make_unique<std::mutex>();
    return *slot;
}

IngestResult Orchestrator::ingest(const Review& review) {
    validate(review);
    std::lock_guard lock(ingest_mutex(review.product_id));
    auto before = store_.get_refresh_state(review.product_id);
    if (!store_.put_review(review)) throw DuplicateReviewError("duplicate review_id " + review.review_id);
    auto [state, decision] = on_review_ingested(review, std::move(before), config_.trigger);
    return {std::move(state), std::move(decision)};
}

BatchExtraction Orchestrator::extract_missing(const std::vector<Review>& reviews) {
    std::vector<Review> missing;
    for (const auto& r : reviews) {
        if (!store_.get_extraction(r.review_id)) missing.push_back(r);
    }
    if (missing.empty()) return {};
    reviews_extracted_ += missing.size();
    auto batch = extractor_.extract_batch(missing, config_.extraction_parallelism);
    for (const auto& result : batch.results) store_.put_extraction(result);
    for (const auto& f : batch.failures) {
        std::clog << "extraction failed for review " << f.review_id << ": " << f.reason << '\n';
    }
    return batch;
}

SummaryRecord Orchestrator::run_pipeline(const std::string& product_id) {
    std::lock_guard lock(pipeline_mutex(product_id));
    const auto reviews = store_.get_reviews(product_id);
    const auto review_count = reviews.size();
    if (review_count < config_.trigger.min_reviews)
        throw PipelineError(PipelineStage::Precondition,
                            "product " + product_id + " has " + std::to_string(review_count) + " reviews, needs " +
                                std::to_string(config_.trigger.min_reviews));

    try {
        extract_missing(reviews);
    } catch (const StorageError& e) {
        throw PipelineError(PipelineStage::Extraction, e.what());
    }
    std::vector<ExtractionResult> extractions;
    for (const auto& r : reviews) {
        if (auto e = store_.get_extraction(r.review_id)) extractions.push_back(std::move(*e));
    }

    std::vector<ExtractionResult> consolidated;
    try {
        consolidated = vocabulary_.apply(extractions);
    } catch (const std::exception& e) {
        throw PipelineError(PipelineStage::Consolidation, e.what());
    }

    SelectionResult selection;
    try {
        const auto profile = build_profile(product_id, consolidated);
        SelectionOptions options;
        options.cap = config_.cap;
        options.top_k = config_.top_k;
        options.seed = config_.seed ^ fnv1a64(product_id);
        options.weighting = config_.weighting;
        options.now = clock_();
        selection = select_reviews(profile, consolidated, reviews, options);
    } catch (const std::exception& e) {
        throw PipelineError(PipelineStage::Selection, e.what());
    }
    if (selection.empty())
        throw PipelineError(PipelineStage::Selection, "no aspects extracted for product " + product_id);

    SummaryRecord record;
    try {
        record = summarizer_.generate_summary(selection, reviews, review_count);
    } catch (const std::exception& e) {
        throw PipelineError(PipelineStage::Summarization, e.what());
    }
    try {
        store_.put_summary(record);
    } catch (const StorageError& e) {
        throw PipelineError(PipelineStage::Persistence, e.what());
    }
    return record;
}

BatchRunReport Orchestrator::batch_run(bool only_due) {
    BatchRunReport report;
    std::vector<std::string> products;
    for (const auto& id : store_.product_ids()) {
        const auto state = store_.get_refresh_state(id);
        if (state.current_review_count < config_.trigger.min_reviews) continue;
        if (only_due && !evaluate_trigger(state, config_.trigger).triggered()) continue;
        products.push_back(id);
    }

    std::vector<Review> all;
    for (const auto& id : products) {
        auto reviews = store_.get_reviews(id);
        all.insert(all.end(), reviews.begin(), reviews.end());
    }
    // Only reviews extracted now enter the frequency table; earlier batches
    // already added theirs to the vocabulary's running counts.
    auto fresh = extract_missing(all);
    report.extraction_failures = fresh.failures.size();
    const auto table = build_frequency_table(fresh.results);
    if (!table.empty()) {
        const auto threshold =
            config_.pinned_threshold ? config_.pinned_threshold : compute_threshold(table, config_.percentile);
        vocabulary_.set_threshold(threshold);
        vocabulary_.consolidate(table);
        report.threshold = threshold;
    }

    for (const auto& id : products) {
        try {
            run_pipeline(id);
            report.succeeded.push_back(id);
        } catch (const Error& e) {
            report.failed.emplace_back(id, e.what());
        }
    }
    return report;
}

std::vector<ExtractionResult> Orchestrator::consolidated_extractions(const std::string& product_id) const {
    std::vector<ExtractionResult> out;
    for (const auto& r : store_.get_reviews(product_id)) {
        auto e = store_.get_extraction(r.review_id);
        if (!e) continue;
        out.push_back(map_mentions(*e, [&](const std::string& a) { return vocabulary_.lookup(a).value_or(a); }));
    }
    return out;
}

std::optional<ProductAspectProfile> Orchestrator::profile(const std::string& product_id) const {
    auto consolidated = consolidated_extractions(product_id);
    if (consolidated.empty()) return std::nullopt;
    return build_profile(product_id, consolidated);
}

TriggerDecision Orchestrator::current_trigger(const std::string& product_id) const {
    return evaluate_trigger(store_.get_refresh_state(product_id), config_.trigger);
}

}  // namespace aspectsum
