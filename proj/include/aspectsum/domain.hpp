#pragma once

#include <array>
#include <chrono>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace aspectsum {

/// UTC, second resolution.
using Timestamp = std::chrono::sys_seconds;

/// ISO-8601 "YYYY-MM-DDTHH:MM:SSZ".
std::string format_timestamp(Timestamp t);
/// Accepts "YYYY-MM-DD", "YYYY-MM-DDTHH:MM:SS" with optional trailing "Z".
std::optional<Timestamp> parse_timestamp(std::string_view s);

enum class Sentiment : std::uint8_t { Positive = 0, Negative = 1, Mixed = 2 };

inline constexpr std::array<Sentiment, 3> kAllSentiments{
    Sentiment::Positive, Sentiment::Negative, Sentiment::Mixed};

/// "positive" / "negative" / "mixed".
std::string_view to_string(Sentiment s);
/// Case-insensitive match against the three full names only.
std::optional<Sentiment> parse_sentiment(std::string_view s);
/// Also accepts POS / NEG / MIX abbreviations (dataset files use them).
std::optional<Sentiment> parse_sentiment_lenient(std::string_view s);

struct Review {
    std::string review_id;
    std::string product_id;
    std::string text;
    Timestamp created_at{};
    std::optional<bool> verified_purchaser;
    std::optional<std::string> language;

    bool operator==(const Review&) const = default;
};

/// Throws ValidationError when the id is empty or the text is blank.
void validate(const Review& review);

struct AspectMention {
    std::string aspect;
    Sentiment sentiment = Sentiment::Positive;

    /// Normalizes the aspect; nullopt if nothing is left.
    static std::optional<AspectMention> make(std::string_view raw_aspect, Sentiment sentiment);

    bool operator==(const AspectMention&) const = default;
};

inline constexpr std::size_t kMaxMentionsPerReview = 5;

/// Normalizes, drops empty aspects, keeps the first occurrence of each aspect,
/// then truncates to kMaxMentionsPerReview.
std::vector<AspectMention> clamp_mentions(const std::vector<AspectMention>& raw);

struct ExtractionResult {
    std::string review_id;
    std::vector<AspectMention> mentions;
    std::string model_id;
    Timestamp extracted_at{};

    bool operator==(const ExtractionResult&) const = default;
};

struct AspectSentiment {
    std::string aspect;
    Sentiment sentiment = Sentiment::Positive;

    auto operator<=>(const AspectSentiment&) const = default;
};

/// Raw aspect -> canonical aspect vocabulary. Every canonical value is itself a
/// key mapping to itself.
struct ConsolidationMap {
    std::map<std::string, std::string> entries;
    std::map<std::string, std::uint64_t> frequency;
    std::uint64_t threshold = 0;
    std::uint64_t version = 0;
    /// Aspects recorded as identity after a failed LLM call.
    std::set<std::string> pending;

    std::optional<std::string> lookup(const std::string& aspect) const;

    bool operator==(const ConsolidationMap&) const = default;
};

/// Fixed-point, threshold, and pending-subset invariants.
bool satisfies_invariants(const ConsolidationMap& map);

struct ProductAspectProfile {
    std::string product_id;
    std::map<AspectSentiment, std::uint64_t> pair_counts;
    std::uint64_t review_count = 0;

    bool operator==(const ProductAspectProfile&) const = default;
};

struct RankedAspect {
    std::string aspect;
    /// Indexed by Sentiment.
    std::array<std::uint64_t, 3> counts{};

    std::uint64_t total() const { return counts[0] + counts[1] + counts[2]; }
    std::uint64_t count(Sentiment s) const { return counts[static_cast<std::size_t>(s)]; }

    bool operator==(const RankedAspect&) const = default;
};

/// Reviews supporting one (aspect, sentiment) pair. After sampling, review_ids
/// holds only the reviews assigned to this bucket.
struct Bucket {
    AspectSentiment key;
    std::uint64_t count = 0;
    std::vector<std::string> review_ids;

    bool operator==(const Bucket&) const = default;
};

struct SelectionResult {
    std::string product_id;
    std::vector<RankedAspect> selected_aspects;
    /// In aspect rank order, then Positive, Negative, Mixed.
    std::vector<Bucket> buckets;
    /// Distinct, sorted by review_id.
    std::vector<std::string> selected_review_ids;
    std::uint64_t seed = 0;

    bool empty() const { return selected_review_ids.empty(); }
    bool operator==(const SelectionResult&) const = default;
};

inline constexpr std::size_t kTargetSummaryMin = 300;
inline constexpr std::size_t kTargetSummaryMax = 500;
inline constexpr std::size_t kHardSummaryMin = 250;
inline constexpr std::size_t kHardSummaryMax = 600;

struct SummaryRecord {
    std::string product_id;
    std::string summary_text;
    std::pair<std::size_t, std::size_t> target_length{kTargetSummaryMin, kTargetSummaryMax};
    std::vector<std::string> aspects_used;
    std::uint64_t review_count_at_generation = 0;
    Timestamp generated_at{};
    std::string model_id;
    bool length_ok = false;

    bool operator==(const SummaryRecord&) const = default;
};

struct RefreshState {
    std::string product_id;
    std::uint64_t current_review_count = 0;
    std::optional<std::uint64_t> count_at_last_summary;

    bool has_summary() const { return count_at_last_summary.has_value(); }
    bool operator==(const RefreshState&) const = default;
};

enum class ErrorLabel : std::uint8_t {
    NoErrors,
    ExaggerationUnderstatement,
    MinorMisrepresentation,
    MajorMisrepresentation,
    MinorOmission,
    MajorOmission,
};

inline constexpr std::array<ErrorLabel, 6> kAllErrorLabels{
    ErrorLabel::NoErrors,           ErrorLabel::ExaggerationUnderstatement,
    ErrorLabel::MinorMisrepresentation, ErrorLabel::MajorMisrepresentation,
    ErrorLabel::MinorOmission,      ErrorLabel::MajorOmission};

/// "NO_ERRORS", "EXAGGERATION_UNDERSTATEMENT", ...
std::string_view to_string(ErrorLabel label);
std::optional<ErrorLabel> parse_error_label(std::string_view s);

using LabelSet = std::set<ErrorLabel>;

/// Non-empty, and NO_ERRORS never combined with another label.
bool is_valid_label_set(const LabelSet& labels);

struct AnnotationRecord {
    std::string product_id;
    std::string annotator_id;
    LabelSet labels;
    std::string reason;

    bool operator==(const AnnotationRecord&) const = default;
};

/// Injectable time source; tests pin it for byte-stable output.
using Clock = std::function<Timestamp()>;

Timestamp now_utc();

}  // namespace aspectsum
