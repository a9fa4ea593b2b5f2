#include <gtest/gtest.h>

#include "aspectsum/domain.hpp"
#include "aspectsum/errors.hpp"

using namespace aspectsum;

TEST(Timestamp, RoundTrip) {
    auto t = parse_timestamp("2024-02-29T23:59:01Z");
    ASSERT_TRUE(t);
    EXPECT_EQ(format_timestamp(*t), "2024-02-29T23:59:01Z");
    EXPECT_EQ(format_timestamp(*parse_timestamp("2024-01-05")), "2024-01-05T00:00:00Z");
    EXPECT_EQ(format_timestamp(*parse_timestamp("2024-01-05 07:08:09")), "2024-01-05T07:08:09Z");
}

TEST(Timestamp, RejectsGarbage) {
    EXPECT_FALSE(parse_timestamp(""));
    EXPECT_FALSE(parse_timestamp("yesterday"));
    EXPECT_FALSE(parse_timestamp("2023-02-29"));
    EXPECT_FALSE(parse_timestamp("2024-13-01"));
    EXPECT_FALSE(parse_timestamp("2024-01-01T25:00:00"));
}

TEST(Sentiment, StrictAndLenientParsing) {
    EXPECT_EQ(parse_sentiment("NEGATIVE"), Sentiment::Negative);
    EXPECT_EQ(parse_sentiment("Mixed"), Sentiment::Mixed);
    EXPECT_FALSE(parse_sentiment("pos"));
    EXPECT_FALSE(parse_sentiment("great"));
    EXPECT_EQ(parse_sentiment_lenient("POS"), Sentiment::Positive);
    EXPECT_EQ(parse_sentiment_lenient("neg"), Sentiment::Negative);
    EXPECT_EQ(parse_sentiment_lenient("MIX"), Sentiment::Mixed);
    for (auto s : kAllSentiments) EXPECT_EQ(parse_sentiment(to_string(s)), s);
}

TEST(Review, Validation) {
    Review r{"r1", "p1", "fine", {}, std::nullopt, std::nullopt};
    EXPECT_NO_THROW(validate(r));
    r.text = "   ";
    EXPECT_THROW(validate(r), ValidationError);
    r.text = "ok";
    r.review_id = "";
    EXPECT_THROW(validate(r), ValidationError);
    r.review_id = "r1";
    r.product_id = "";
    EXPECT_THROW(validate(r), ValidationError);
}

TEST(AspectMention, MakeNormalizes) {
    auto m = AspectMention::make("  Assembly  Time", Sentiment::Negative);
    ASSERT_TRUE(m);
    EXPECT_EQ(m->aspect, "assembly time");
    EXPECT_FALSE(AspectMention::make("  ", Sentiment::Positive));
}

TEST(ClampMentions, DedupesKeepsFirstAndTruncates) {
    std::vector<AspectMention> raw{{"Color", Sentiment::Positive}, {"color", Sentiment::Negative},
                                   {"", Sentiment::Positive},      {"a", Sentiment::Mixed},
                                   {"b", Sentiment::Positive},     {"c", Sentiment::Positive},
                                   {"d", Sentiment::Positive},     {"e", Sentiment::Positive}};
    auto out = clamp_mentions(raw);
    ASSERT_EQ(out.size(), kMaxMentionsPerReview);
    EXPECT_EQ(out[0], (AspectMention{"color", Sentiment::Positive}));
    EXPECT_EQ(out[1].aspect, "a");
    EXPECT_EQ(out[4].aspect, "d");
}

TEST(ConsolidationMap, Invariants) {
    ConsolidationMap m;
    m.entries = {{"price", "price"}, {"value for money", "price"}};
    EXPECT_TRUE(satisfies_invariants(m));
    m.entries["cost"] = "value for money";
    EXPECT_FALSE(satisfies_invariants(m));
    m.entries["cost"] = "price";
    m.threshold = 5;
    m.frequency = {{"cost", 9}};
    EXPECT_FALSE(satisfies_invariants(m));
    m.entries["cost"] = "cost";
    EXPECT_TRUE(satisfies_invariants(m));
    m.pending = {"value for money"};
    EXPECT_FALSE(satisfies_invariants(m));
}

TEST(ErrorLabels, ParseAndValidate) {
    for (auto l : kAllErrorLabels) EXPECT_EQ(parse_error_label(to_string(l)), l);
    EXPECT_EQ(parse_error_label(" minor_omission "), ErrorLabel::MinorOmission);
    EXPECT_FALSE(parse_error_label("TYPO"));
    EXPECT_FALSE(is_valid_label_set({}));
    EXPECT_FALSE(is_valid_label_set({ErrorLabel::NoErrors, ErrorLabel::MinorOmission}));
    EXPECT_TRUE(is_valid_label_set({ErrorLabel::MajorOmission, ErrorLabel::MinorMisrepresentation}));
}

TEST(RankedAspect, Totals) {
    RankedAspect a{"x", {3, 2, 1}};
    EXPECT_EQ(a.total(), 6u);
    EXPECT_EQ(a.count(Sentiment::Negative), 2u);
}
