#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aspectsum/domain.hpp"

namespace aspectsum {

/// pair_counts counts reviews per (aspect, sentiment); review_count counts the
/// results that have at least one mention.
ProductAspectProfile build_profile(std::string product_id, std::span<const ExtractionResult> consolidated);

inline constexpr std::size_t kDefaultTopK = 5;
inline constexpr std::size_t kDefaultReviewCap = 200;

/// Ranked by total mentions across sentiments, descending; ties go to the
/// lexicographically smaller aspect.
std::vector<RankedAspect> top_aspects(const ProductAspectProfile& profile, std::size_t k = kDefaultTopK);

/// Largest-remainder (Hamilton) apportionment of `seats` proportional to
/// `counts`; the result sums to `seats` whenever any count is non-zero. Equal
/// remainders favour the larger count, then the earlier index.
std::vector<std::uint64_t> apportion(std::span<const std::uint64_t> counts, std::uint64_t seats);

enum class WeightingMode { Uniform, Recency, RecencyVerified };

std::string_view to_string(WeightingMode mode);
/// "uniform" | "recency" | "recency+verified"; throws ConfigError otherwise.
WeightingMode parse_weighting_mode(std::string_view s);

struct WeightingConfig {
    WeightingMode mode = WeightingMode::Uniform;
    double half_life_days = 180.0;
};

inline constexpr double kMinSamplingWeight = 1e-12;

/// Uniform: 1. Recency: 2^(-age_days / half_life_days), future dates count as
/// age 0. RecencyVerified additionally doubles verified purchases. Never below
/// kMinSamplingWeight.
double default_weighting(const Review& review, const WeightingConfig& config, Timestamp now);

struct SelectionOptions {
    std::size_t cap = kDefaultReviewCap;
    std::size_t top_k = kDefaultTopK;
    std::uint64_t seed = 0;
    WeightingConfig weighting;
    /// Reference time for recency weighting.
    Timestamp now{};
};

/// Buckets the reviews supporting each selected (aspect, sentiment) pair.
/// When the distinct eligible reviews fit under the cap, all are taken and each
/// is listed under the first bucket it supports. Otherwise bucket quotas are
/// apportioned to the cap by count and each bucket is sampled without
/// replacement in weighted random order (Efraimidis-Spirakis keys); a review
/// already taken by an earlier bucket is skipped for the bucket's next draw,
/// and quota a bucket cannot fill spills to the largest bucket with reviews left.
///
/// Throws ValidationError if a profiled review is missing from `reviews`, and
/// ConfigError for cap == 0.
SelectionResult select_reviews(const ProductAspectProfile& profile, std::span<const ExtractionResult> consolidated,
                               std::span<const Review> reviews, const SelectionOptions& options);

}  // namespace aspectsum
