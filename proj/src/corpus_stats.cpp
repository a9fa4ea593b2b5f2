#include "aspectsum/corpus_stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "aspectsum/text.hpp"

namespace aspectsum {

void CorpusAccumulator::add(const ReviewRecord& record) {
    ++review_count_;
    total_length_ += utf8_length(record.review.text);
    ++reviews_per_product_[record.review.product_id];
    for (const auto& m : record.mentions) ++aspects_[m.aspect][static_cast<std::size_t>(m.sentiment)];
}

void CorpusAccumulator::merge(const CorpusAccumulator& other) {
    review_count_ += other.review_count_;
    total_length_ += other.total_length_;
    for (const auto& [p, n] : other.reviews_per_product_) reviews_per_product_[p] += n;
    for (const auto& [a, counts] : other.aspects_) {
        auto& mine = aspects_[a];
        for (std::size_t i = 0; i < 3; ++i) mine[i] += counts[i];
    }
}

CorpusStats CorpusAccumulator::finish() const {
    CorpusStats stats;
    stats.review_count = review_count_;
    stats.product_count = reviews_per_product_.size();
    stats.distinct_aspects = aspects_.size();
    if (review_count_ > 0) stats.mean_review_length = static_cast<double>(total_length_) / review_count_;
    if (!reviews_per_product_.empty())
        stats.mean_reviews_per_product = static_cast<double>(review_count_) / reviews_per_product_.size();
    for (const auto& [aspect, counts] : aspects_) {
        AspectStats a;
        a.aspect = aspect;
        a.by_sentiment = counts;
        a.count = counts[0] + counts[1] + counts[2];
        for (std::size_t i = 0; i < 3; ++i)
            a.percent[i] = std::round(10000.0 * static_cast<double>(counts[i]) / static_cast<double>(a.count)) / 100.0;
        stats.total_mentions += a.count;
        stats.aspects.push_back(std::move(a));
    }
    std::sort(stats.aspects.begin(), stats.aspects.end(), [](const AspectStats& x, const AspectStats& y) {
        return x.count != y.count ? x.count > y.count : x.aspect < y.aspect;
    });
    return stats;
}

CorpusStats compute_corpus_stats(std::span<const ReviewRecord> records) {
    CorpusAccumulator acc;
    for (const auto& r : records) acc.add(r);
    return acc.finish();
}

std::string format_stats_report(const CorpusStats& stats, std::size_t top_k) {
    std::string out = "Aspect\tCount\tPos.\tNeg.\tMix.\n";
    char buf[64];
    for (std::size_t i = 0; i < std::min(top_k, stats.aspects.size()); ++i) {
        const auto& a = stats.aspects[i];
        std::snprintf(buf, sizeof buf, "\t%.2f\t%.2f\t%.2f\n", a.percent[0], a.percent[1], a.percent[2]);
        out += a.aspect + "\t" + std::to_string(a.count) + buf;
    }
    std::snprintf(buf, sizeof buf, "%.2f", stats.mean_review_length);
    out += "# reviews\t" + std::to_string(stats.review_count) + "\n";
    out += "# products\t" + std::to_string(stats.product_count) + "\n";
    out += "# distinct_aspects\t" + std::to_string(stats.distinct_aspects) + "\n";
    out += "# total_mentions\t" + std::to_string(stats.total_mentions) + "\n";
    out += std::string("# mean_review_length\t") + buf + "\n";
    std::snprintf(buf, sizeof buf, "%.2f", stats.mean_reviews_per_product);
    out += std::string("# mean_reviews_per_product\t") + buf + "\n";
    return out;
}

}  // namespace aspectsum
