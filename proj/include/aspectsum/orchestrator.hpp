#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aspectsum/consolidation.hpp"
#include "aspectsum/domain.hpp"
#include "aspectsum/errors.hpp"
#include "aspectsum/extraction.hpp"
#include "aspectsum/llm_gateway.hpp"
#include "aspectsum/selection.hpp"
#include "aspectsum/store.hpp"
#include "aspectsum/summarization.hpp"
#include "aspectsum/templates.hpp"

namespace aspectsum {

enum class TriggerKind { None, InitialSummary, Refresh };

std::string_view to_string(TriggerKind kind);

struct TriggerDecision {
    TriggerKind kind = TriggerKind::None;
    std::string reason;

    bool triggered() const { return kind != TriggerKind::None; }
};

struct TriggerPolicy {
    std::uint64_t min_reviews = 10;
    double refresh_fraction = 0.10;
};

/// New reviews needed since the baseline: max(1, ceil(fraction * baseline)).
std::uint64_t refresh_delta(std::uint64_t baseline, double fraction);

/// Decision for the state as it stands (no increment).
TriggerDecision evaluate_trigger(const RefreshState& state, const TriggerPolicy& policy = {});

/// Counts the review and evaluates the trigger rules: an initial summary once
/// a product without one has min_reviews reviews; a refresh once the reviews
/// added since the last summary reach refresh_delta(baseline).
std::pair<RefreshState, TriggerDecision> on_review_ingested(const Review& review, RefreshState state,
                                                            const TriggerPolicy& policy = {});

enum class PipelineStage { Precondition, Extraction, Consolidation, Selection, Summarization, Persistence };

std::string_view to_string(PipelineStage stage);

class PipelineError : public Error {
public:
    PipelineError(PipelineStage stage, const std::string& message)
        : Error(std::string(to_string(stage)) + ": " + message), stage_(stage) {}

    PipelineStage stage() const noexcept { return stage_; }

private:
    PipelineStage stage_;
};

class DuplicateReviewError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

struct PipelineConfig {
    TriggerPolicy trigger;
    std::size_t cap = kDefaultReviewCap;
    std::size_t top_k = kDefaultTopK;
    /// Per-product seed is seed ^ fnv1a64(product_id).
    std::uint64_t seed = 0;
    WeightingConfig weighting;
    std::size_t extraction_parallelism = 8;
    double percentile = kDefaultPercentile;
    /// Non-zero pins the consolidation threshold instead of computing it.
    std::uint64_t pinned_threshold = 0;
};

struct IngestResult {
    RefreshState state;
    TriggerDecision decision;
};

struct BatchRunReport {
    std::vector<std::string> succeeded;
    std::vector<std::pair<std::string, std::string>> failed;
    std::size_t extraction_failures = 0;
    std::optional<std::uint64_t> threshold;
};

/// Drives the four stages per product over a Store and owns the trigger rules.
/// Ingestion and pipeline runs are serialized per product; different products
/// proceed concurrently.
class Orchestrator {
public:
    Orchestrator(Store& store, const LlmGateway& gateway, const TemplateSet& templates, AspectVocabulary& vocabulary,
                 PipelineConfig config = {}, Clock clock = now_utc);

    /// Persists the review, then evaluates the trigger. Throws
    /// DuplicateReviewError or ValidationError.
    IngestResult ingest(const Review& review);

    /// Extract (uncached reviews only), consolidate, select, summarize, then
    /// persist the summary together with the baseline (the review count when
    /// the run started). Throws PipelineError; on error nothing is persisted
    /// except extraction cache entries.
    SummaryRecord run_pipeline(const std::string& product_id);

    /// Extracts every pending review across eligible products, consolidates
    /// the aspects of the newly extracted reviews as one batch, then runs each
    /// product. `only_due`
    /// restricts to products whose trigger currently fires.
    BatchRunReport batch_run(bool only_due);

    /// Stored extractions for the product mapped through cached vocabulary
    /// entries (identity for unknown aspects). Never calls the LLM.
    std::vector<ExtractionResult> consolidated_extractions(const std::string& product_id) const;

    std::optional<ProductAspectProfile> profile(const std::string& product_id) const;

    TriggerDecision current_trigger(const std::string& product_id) const;

    /// Reviews sent to the extraction stage since construction.
    std::size_t reviews_extracted() const { return reviews_extracted_.load(); }

    const PipelineConfig& config() const { return config_; }
    Store& store() { return store_; }

private:
    std::mutex& ingest_mutex(const std::string& product_id);
    std::mutex& pipeline_mutex(const std::string& product_id);
    BatchExtraction extract_missing(const std::vector<Review>& reviews);

    Store& store_;
    const LlmGateway& gateway_;
    const TemplateSet& templates_;
    AspectVocabulary& vocabulary_;
    PipelineConfig config_;
    Clock clock_;
    AspectExtractor extractor_;
    Summarizer summarizer_;

    std::mutex locks_mutex_;
    std::map<std::string, std::unique_ptr<std::mutex>> ingest_locks_;
    std::map<std::string, std::unique_ptr<std::mutex>> pipeline_locks_;
    std::atomic<std::size_t> reviews_extracted_{0};
};

}  // namespace aspectsum
