#include "aspectsum/domain.hpp"

#include <charconv>
#include <cstdio>
#include <unordered_set>

#include "aspectsum/errors.hpp"
#include "aspectsum/text.hpp"

namespace aspectsum {

std::string_view to_string(GatewayErrorCode code) {
    switch (code) {
        case GatewayErrorCode::ExhaustedRetries: return "EXHAUSTED_RETRIES";
        case GatewayErrorCode::Timeout: return "TIMEOUT";
        case GatewayErrorCode::AuthFailure: return "AUTH_FAILURE";
        case GatewayErrorCode::MalformedOutput: return "MALFORMED_OUTPUT";
        case GatewayErrorCode::InvalidRequest: return "INVALID_REQUEST";
    }
    return "UNKNOWN";
}

std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    const auto day = floor<days>(t);
    const year_month_day ymd{day};
    const hh_mm_ss hms{t - day};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

namespace {

bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    auto first = s.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + len, out);
    return ec == std::errc{} && ptr == first + len;
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view s) {
    using namespace std::chrono;
    s = trim(s);
    if (!s.empty() && (s.back() == 'Z' || s.back() == 'z')) s.remove_suffix(1);
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    if (s.size() < 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    if (!read_int(s, 0, 4, y) || !read_int(s, 5, 2, mo) || !read_int(s, 8, 2, d)) return std::nullopt;
    if (s.size() > 10) {
        if (s.size() != 19 || (s[10] != 'T' && s[10] != ' ') || s[13] != ':' || s[16] != ':')
            return std::nullopt;
        if (!read_int(s, 11, 2, h) || !read_int(s, 14, 2, mi) || !read_int(s, 17, 2, sec))
            return std::nullopt;
        if (h > 23 || mi > 59 || sec > 60) return std::nullopt;
    }
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    return Timestamp{sys_days{ymd}} + hours{h} + minutes{mi} + seconds{sec};
}

std::string_view to_string(Sentiment s) {
    switch (s) {
        case Sentiment::Positive: return "positive";
        case Sentiment::Negative: return "negative";
        case Sentiment::Mixed: return "mixed";
    }
    return "positive";
}

std::optional<Sentiment> parse_sentiment(std::string_view s) {
    s = trim(s);
    for (auto v : kAllSentiments) {
        if (iequals(s, to_string(v))) return v;
    }
    return std::nullopt;
}

std::optional<Sentiment> parse_sentiment_lenient(std::string_view s) {
    if (auto v = parse_sentiment(s)) return v;
    s = trim(s);
    if (iequals(s, "pos")) return Sentiment::Positive;
    if (iequals(s, "neg")) return Sentiment::Negative;
    if (iequals(s, "mix")) return Sentiment::Mixed;
    return std::nullopt;
}

void validate(const Review& review) {
    if (trim(review.review_id).empty()) throw ValidationError("review_id is empty");
    if (trim(review.product_id).empty())
        throw ValidationError("product_id is empty for review " + review.review_id);
    if (trim(review.text).empty())
        throw ValidationError("review text is empty for review " + review.review_id);
}

std::optional<AspectMention> AspectMention::make(std::string_view raw_aspect, Sentiment sentiment) {
    auto aspect = normalize_aspect(raw_aspect);
    if (aspect.empty()) return std::nullopt;
    return AspectMention{std::move(aspect), sentiment};
}

std::vector<AspectMention> clamp_mentions(const std::vector<AspectMention>& raw) {
    std::vector<AspectMention> out;
    std::unordered_set<std::string> seen;
    for (const auto& m : raw) {
        if (out.size() == kMaxMentionsPerReview) break;
        auto norm = AspectMention::make(m.aspect, m.sentiment);
        if (!norm || !seen.insert(norm->aspect).second) continue;
        out.push_back(std::move(*norm));
    }
    return out;
}

std::optional<std::string> ConsolidationMap::lookup(const std::string& aspect) const {
    auto it = entries.find(aspect);
    if (it == entries.end()) return std::nullopt;
    return it->second;
}

bool satisfies_invariants(const ConsolidationMap& map) {
    for (const auto& [raw, canonical] : map.entries) {
        auto it = map.entries.find(canonical);
        if (it == map.entries.end() || it->second != canonical) return false;
    }
    if (map.threshold > 0) {
        for (const auto& [raw, freq] : map.frequency) {
            if (freq < map.threshold) continue;
            auto it = map.entries.find(raw);
            if (it == map.entries.end() || it->second != raw) return false;
        }
    }
    for (const auto& p : map.pending) {
        auto it = map.entries.find(p);
        if (it == map.entries.end() || it->second != p) return false;
    }
    return true;
}

std::string_view to_string(ErrorLabel label) {
    switch (label) {
        case ErrorLabel::NoErrors: return "NO_ERRORS";
        case ErrorLabel::ExaggerationUnderstatement: return "EXAGGERATION_UNDERSTATEMENT";
        case ErrorLabel::MinorMisrepresentation: return "MINOR_MISREPRESENTATION";
        case ErrorLabel::MajorMisrepresentation: return "MAJOR_MISREPRESENTATION";
        case ErrorLabel::MinorOmission: return "MINOR_OMISSION";
        case ErrorLabel::MajorOmission: return "MAJOR_OMISSION";
    }
    return "NO_ERRORS";
}

std::optional<ErrorLabel> parse_error_label(std::string_view s) {
    s = trim(s);
    for (auto l : kAllErrorLabels) {
        if (iequals(s, to_string(l))) return l;
    }
    return std::nullopt;
}

bool is_valid_label_set(const LabelSet& labels) {
    if (labels.empty()) return false;
    return !(labels.count(ErrorLabel::NoErrors) && labels.size() > 1);
}

Timestamp now_utc() {
    return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
}

}  // namespace aspectsum
