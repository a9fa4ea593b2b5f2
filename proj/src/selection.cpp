#include "aspectsum/selection.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "aspectsum/errors.hpp"
#include "aspectsum/rng.hpp"
#include "aspectsum/text.hpp"

namespace aspectsum {

ProductAspectProfile build_profile(std::string product_id, std::span<const ExtractionResult> consolidated) {
    ProductAspectProfile profile;
    profile.product_id = std::move(product_id);
    for (const auto& r : consolidated) {
        std::set<AspectSentiment> pairs;
        for (const auto& m : r.mentions) pairs.insert({m.aspect, m.sentiment});
        if (pairs.empty()) continue;
        ++profile.review_count;
        for (const auto& p : pairs) ++profile.pair_counts[p];
    }
    return profile;
}

std::vector<RankedAspect> top_aspects(const ProductAspectProfile& profile, std::size_t k) {
    std::map<std::string, RankedAspect> by_aspect;
    for (const auto& [key, count] : profile.pair_counts) {
        auto& ranked = by_aspect[key.aspect];
        ranked.aspect = key.aspect;
        ranked.counts[static_cast<std::size_t>(key.sentiment)] += count;
    }
    std::vector<RankedAspect> ranked;
    ranked.reserve(by_aspect.size());
    for (auto& [aspect, r] : by_aspect) ranked.push_back(std::move(r));
    std::stable_sort(ranked.begin(), ranked.end(), [](const RankedAspect& a, const RankedAspect& b) {
        if (a.total() != b.total()) return a.total() > b.total();
        return a.aspect < b.aspect;
    });
    if (ranked.size() > k) ranked.resize(k);
    return ranked;
}

std::vector<std::uint64_t> apportion(std::span<const std::uint64_t> counts, std::uint64_t seats) {
    std::vector<std::uint64_t> quotas(counts.size(), 0);
    const auto total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
    if (total == 0) return quotas;
    std::vector<std::uint64_t> remainders(counts.size());
    std::uint64_t assigned = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const auto scaled = static_cast<unsigned __int128>(seats) * counts[i];
        quotas[i] = static_cast<std::uint64_t>(scaled / total);
        remainders[i] = static_cast<std::uint64_t>(scaled % total);
        assigned += quotas[i];
    }
    std::vector<std::size_t> order(counts.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (remainders[a] != remainders[b]) return remainders[a] > remainders[b];
        return counts[a] > counts[b];
    });
    for (std::size_t j = 0; assigned < seats; ++j, ++assigned) ++quotas[order[j % order.size()]];
    return quotas;
}

std::string_view to_string(WeightingMode mode) {
    switch (mode) {
        case WeightingMode::Uniform: return "uniform";
        case WeightingMode::Recency: return "recency";
        case WeightingMode::RecencyVerified: return "recency+verified";
    }
    return "uniform";
}

WeightingMode parse_weighting_mode(std::string_view s) {
    for (auto m : {WeightingMode::Uniform, WeightingMode::Recency, WeightingMode::RecencyVerified}) {
        if (iequals(trim(s), to_string(m))) return m;
    }
    throw ConfigError("unknown sampling mode '" + std::string(s) + "'");
}

double default_weighting(const Review& review, const WeightingConfig& config, Timestamp now) {
    double weight = 1.0;
    if (config.mode != WeightingMode::Uniform) {
        const double age_days =
            std::max(0.0, std::chrono::duration<double, std::ratio<86400>>(now - review.created_at).count());
        weight = std::exp2(-age_days / config.half_life_days);
        if (config.mode == WeightingMode::RecencyVerified && review.verified_purchaser.value_or(false)) weight *= 2.0;
    }
    if (!(weight >= kMinSamplingWeight)) weight = kMinSamplingWeight;
    return weight;
}

SelectionResult select_reviews(const ProductAspectProfile& profile, std::span<const ExtractionResult> consolidated,
                               std::span<const Review> reviews, const SelectionOptions& options) {
    if (options.cap == 0) throw ConfigError("review cap must be >= 1");

    SelectionResult result;
    result.product_id = profile.product_id;
    result.seed = options.seed;
    result.selected_aspects = top_aspects(profile, options.top_k);

    std::map<AspectSentiment, std::vector<std::string>> members;
    std::set<std::string> selected_aspect_names;
    for (const auto& a : result.selected_aspects) selected_aspect_names.insert(a.aspect);
    for (const auto& r : consolidated) {
        for (const auto& m : r.mentions) {
            if (selected_aspect_names.count(m.aspect)) members[{m.aspect, m.sentiment}].push_back(r.review_id);
        }
    }
    for (const auto& a : result.selected_aspects) {
        for (auto s : kAllSentiments) {
            if (a.count(s) == 0) continue;
            AspectSentiment key{a.aspect, s};
            auto& ids = members[key];
            std::sort(ids.begin(), ids.end());
            ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
            result.buckets.push_back({key, a.count(s), ids});
        }
    }

    std::set<std::string> eligible;
    for (const auto& b : result.buckets) eligible.insert(b.review_ids.begin(), b.review_ids.end());

    std::unordered_map<std::string, const Review*> by_id;
    for (const auto& r : reviews) by_id.emplace(r.review_id, &r);
    for (const auto& id : eligible) {
        if (!by_id.count(id)) throw ValidationError("review " + id + " is profiled but was not supplied");
    }

    if (eligible.size() <= options.cap) {
        std::set<std::string> taken;
        for (auto& b : result.buckets) {
            std::vector<std::string> own;
            for (const auto& id : b.review_ids) {
                if (taken.insert(id).second) own.push_back(id);
            }
            b.review_ids = std::move(own);
        }
        result.selected_review_ids.assign(eligible.begin(), eligible.end());
        return result;
    }

    // Weighted random order per bucket: larger log(u) / w first.
    SplitMix64 rng(options.seed);
    std::vector<std::vector<std::string>> draw_order(result.buckets.size());
    for (std::size_t i = 0; i < result.buckets.size(); ++i) {
        const auto& ids = result.buckets[i].review_ids;
        std::vector<std::pair<double, std::size_t>> keys;
        keys.reserve(ids.size());
        for (std::size_t j = 0; j < ids.size(); ++j) {
            const double w = default_weighting(*by_id.at(ids[j]), options.weighting, options.now);
            keys.emplace_back(std::log(rng.uniform_open_zero()) / w, j);
        }
        std::sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) {
            return a.first != b.first ? a.first > b.first : a.second < b.second;
        });
        for (const auto& [key, j] : keys) draw_order[i].push_back(ids[j]);
    }

    std::vector<std::uint64_t> counts;
    for (const auto& b : result.buckets) counts.push_back(b.count);
    auto quotas = apportion(counts, options.cap);

    std::unordered_set<std::string> taken;
    std::vector<std::size_t> cursor(result.buckets.size(), 0);
    std::vector<std::vector<std::string>> assigned(result.buckets.size());
    auto draw = [&](std::size_t i) -> bool {
        auto& order = draw_order[i];
        while (cursor[i] < order.size()) {
            const auto& id = order[cursor[i]++];
            if (taken.insert(id).second) {
                assigned[i].push_back(id);
                return true;
            }
        }
        return false;
    };

    std::uint64_t residual = 0;
    for (std::size_t i = 0; i < result.buckets.size(); ++i) {
        std::uint64_t got = 0;
        while (got < quotas[i] && draw(i)) ++got;
        residual += quotas[i] - got;
    }
    while (residual > 0) {
        std::size_t best = result.buckets.size();
        for (std::size_t i = 0; i < result.buckets.size(); ++i) {
            if (cursor[i] >= draw_order[i].size()) continue;
            if (best == result.buckets.size() || result.buckets[i].count > result.buckets[best].count) best = i;
        }
        if (best == result.buckets.size()) break;
        while (residual > 0 && draw(best)) --residual;
    }

    for (std::size_t i = 0; i < result.buckets.size(); ++i) {
        std::sort(assigned[i].begin(), assigned[i].end());
        result.buckets[i].review_ids = std::move(assigned[i]);
    }
    result.selected_review_ids.assign(taken.begin(), taken.end());
    std::sort(result.selected_review_ids.begin(), result.selected_review_ids.end());
    return result;
}

}  // namespace aspectsum
