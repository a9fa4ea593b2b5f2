#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aspectsum/domain.hpp"
#include "aspectsum/llm_gateway.hpp"
#include "aspectsum/templates.hpp"

namespace aspectsum {

using FrequencyTable = std::map<std::string, std::uint64_t>;

/// Mention occurrences per normalized aspect.
FrequencyTable build_frequency_table(std::span<const ExtractionResult> results);

inline constexpr double kDefaultPercentile = 0.95;

/// Threshold reported for the production vocabulary at the 95th percentile.
/// Reference only; desk-scale batches produce their own value.
inline constexpr std::uint64_t kReferenceProductionThreshold = 30;

/// Nearest-rank percentile over the distinct-aspect frequencies: the value at
/// 1-indexed rank ceil(percentile * n) of the ascending sort. Throws
/// ValidationError for an empty table or a percentile outside (0, 1].
std::uint64_t compute_threshold(const FrequencyTable& table, double percentile = kDefaultPercentile);

/// Aspects per consolidation prompt.
inline constexpr std::size_t kConsolidationBatchSize = 100;

/// "- a\n- b\n..." as bound into the consolidation template.
std::string format_aspect_list(const std::vector<std::string>& aspects);

using MappingChanges = std::vector<std::pair<std::string, std::string>>;

struct ConsolidationReport {
    std::size_t llm_calls = 0;
    std::size_t aspects_sent = 0;
    /// Aspects left as identity and flagged pending because their call failed.
    std::vector<std::string> failed;
    /// Entries whose canonical value was added or changed.
    MappingChanges changed;
};

/// Merges `table` into the map's frequencies, keeps aspects at or above the
/// threshold as themselves, and asks the LLM (in sub-batches) for canonical
/// forms of the rest that are not yet cached or are pending. Chains are
/// collapsed so every canonical value is a fixed point. Bumps the version once.
ConsolidationMap consolidate_batch(const FrequencyTable& table, ConsolidationMap map, const LlmGateway& gateway,
                                   const TemplateSet& templates, ConsolidationReport* report = nullptr);

/// Adds missing canonical keys and collapses chains (cycles are cut where
/// they close) so every entry points at a fixed point.
void restore_fixed_points(ConsolidationMap& map);

/// Replaces each mention's aspect with canon(aspect). Mentions that collide in
/// one review merge: equal sentiments are kept, differing ones become Mixed.
ExtractionResult map_mentions(const ExtractionResult& result,
                              const std::function<std::string(const std::string&)>& canon);

/// Throws std::out_of_range if an aspect has no entry.
std::vector<ExtractionResult> apply_mapping(std::span<const ExtractionResult> results, const ConsolidationMap& map);

/// Thread-safe owner of a ConsolidationMap. Cached lookups take a shared lock;
/// unseen aspects are consolidated under the writer lock so each distinct
/// aspect costs at most one LLM call over the map's lifetime.
class AspectVocabulary {
public:
    using Listener = std::function<void(const MappingChanges& changed, std::uint64_t version)>;

    AspectVocabulary(const LlmGateway& gateway, const TemplateSet& templates, ConsolidationMap map = {});

    std::string resolve(const std::string& aspect);
    /// Resolves many aspects (normalized first), batching the unseen ones into
    /// as few calls as possible. Throws ValidationError for a blank aspect.
    std::vector<std::string> resolve_all(const std::vector<std::string>& aspects);
    /// Cached entry only; never calls the LLM.
    std::optional<std::string> lookup(const std::string& aspect) const;

    void consolidate(const FrequencyTable& table, ConsolidationReport* report = nullptr);
    void set_threshold(std::uint64_t threshold);

    ConsolidationMap snapshot() const;
    std::size_t llm_calls() const { return llm_calls_.load(); }

    /// Called under the writer lock after every change.
    void set_listener(Listener listener);

    std::vector<ExtractionResult> apply(std::span<const ExtractionResult> results);

private:
    const LlmGateway& gateway_;
    const TemplateSet& templates_;
    mutable std::shared_mutex mutex_;
    ConsolidationMap map_;
    Listener listener_;
    std::atomic<std::size_t> llm_calls_{0};
};

}  // namespace aspectsum
