#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "aspectsum/dataset_io.hpp"

namespace aspectsum {

struct AspectStats {
    std::string aspect;
    std::uint64_t count = 0;
    /// Mentions by Sentiment.
    std::array<std::uint64_t, 3> by_sentiment{};
    /// Percent of `count`, rounded to two decimals.
    std::array<double, 3> percent{};

    bool operator==(const AspectStats&) const = default;
};

struct CorpusStats {
    /// Count descending, then aspect ascending.
    std::vector<AspectStats> aspects;
    std::uint64_t distinct_aspects = 0;
    std::uint64_t total_mentions = 0;
    std::uint64_t review_count = 0;
    std::uint64_t product_count = 0;
    /// Unicode scalar values per review.
    double mean_review_length = 0.0;
    double mean_reviews_per_product = 0.0;

    bool operator==(const CorpusStats&) const = default;
};

/// Mergeable partial aggregate; merge is associative and commutative, so
/// shards can be combined in any order.
class CorpusAccumulator {
public:
    void add(const ReviewRecord& record);
    void merge(const CorpusAccumulator& other);
    CorpusStats finish() const;

private:
    std::map<std::string, std::array<std::uint64_t, 3>> aspects_;
    std::map<std::string, std::uint64_t> reviews_per_product_;
    std::uint64_t review_count_ = 0;
    std::uint64_t total_length_ = 0;
};

CorpusStats compute_corpus_stats(std::span<const ReviewRecord> records);

/// Tab-separated `Aspect  Count  Pos.  Neg.  Mix.` rows for the top `top_k`
/// aspects, followed by `# key<TAB>value` summary lines.
std::string format_stats_report(const CorpusStats& stats, std::size_t top_k = 10);

}  // namespace aspectsum
