#include "aspectsum/json_codec.hpp"

#include "aspectsum/errors.hpp"

namespace aspectsum {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
    return j.at(key);
}

std::string require_string(const json& j, const char* key) {
    const auto& v = require(j, key);
    if (!v.is_string()) throw ValidationError(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

Timestamp require_timestamp(const json& j, const char* key) {
    auto s = require_string(j, key);
    auto t = parse_timestamp(s);
    if (!t) throw ValidationError(std::string("field '") + key + "' is not a timestamp: " + s);
    return *t;
}

}  // namespace

void to_json(json& j, const Review& r) {
    j = json{{"review_id", r.review_id},
             {"product_id", r.product_id},
             {"text", r.text},
             {"created_at", format_timestamp(r.created_at)}};
    if (r.verified_purchaser) j["verified_purchaser"] = *r.verified_purchaser;
    if (r.language) j["language"] = *r.language;
}

void from_json(const json& j, Review& r) {
    Review out;
    out.review_id = require_string(j, "review_id");
    out.product_id = require_string(j, "product_id");
    out.text = require_string(j, "text");
    if (j.contains("created_at")) out.created_at = require_timestamp(j, "created_at");
    if (j.contains("verified_purchaser") && !j.at("verified_purchaser").is_null()) {
        if (!j.at("verified_purchaser").is_boolean())
            throw ValidationError("field 'verified_purchaser' must be a boolean");
        out.verified_purchaser = j.at("verified_purchaser").get<bool>();
    }
    if (j.contains("language") && !j.at("language").is_null()) out.language = require_string(j, "language");
    validate(out);
    r = std::move(out);
}

void to_json(json& j, const AspectMention& m) {
    j = json{{"aspect", m.aspect}, {"sentiment", std::string(to_string(m.sentiment))}};
}

void from_json(const json& j, AspectMention& m) {
    auto s = require_string(j, "sentiment");
    auto sentiment = parse_sentiment_lenient(s);
    if (!sentiment) throw ValidationError("unknown sentiment '" + s + "'");
    auto mention = AspectMention::make(require_string(j, "aspect"), *sentiment);
    if (!mention) throw ValidationError("empty aspect");
    m = std::move(*mention);
}

void to_json(json& j, const ExtractionResult& r) {
    j = json{{"review_id", r.review_id},
             {"mentions", r.mentions},
             {"model_id", r.model_id},
             {"extracted_at", format_timestamp(r.extracted_at)}};
}

void from_json(const json& j, ExtractionResult& r) {
    r.review_id = require_string(j, "review_id");
    r.mentions = require(j, "mentions").get<std::vector<AspectMention>>();
    r.model_id = require_string(j, "model_id");
    r.extracted_at = require_timestamp(j, "extracted_at");
}

void to_json(json& j, const RankedAspect& a) {
    j = json{{"aspect", a.aspect},
             {"total", a.total()},
             {"counts",
              {{"positive", a.count(Sentiment::Positive)},
               {"negative", a.count(Sentiment::Negative)},
               {"mixed", a.count(Sentiment::Mixed)}}}};
}

void to_json(json& j, const SummaryRecord& s) {
    j = json{{"product_id", s.product_id},
             {"summary_text", s.summary_text},
             {"target_length", {s.target_length.first, s.target_length.second}},
             {"aspects_used", s.aspects_used},
             {"review_count_at_generation", s.review_count_at_generation},
             {"generated_at", format_timestamp(s.generated_at)},
             {"model_id", s.model_id},
             {"length_ok", s.length_ok}};
}

void from_json(const json& j, SummaryRecord& s) {
    s.product_id = require_string(j, "product_id");
    s.summary_text = require_string(j, "summary_text");
    const auto& tl = require(j, "target_length");
    s.target_length = {tl.at(0).get<std::size_t>(), tl.at(1).get<std::size_t>()};
    s.aspects_used = require(j, "aspects_used").get<std::vector<std::string>>();
    s.review_count_at_generation = require(j, "review_count_at_generation").get<std::uint64_t>();
    s.generated_at = require_timestamp(j, "generated_at");
    s.model_id = require_string(j, "model_id");
    s.length_ok = require(j, "length_ok").get<bool>();
}

}  // namespace aspectsum
