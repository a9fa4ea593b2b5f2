#include <gtest/gtest.h>

#include "aspectsum/errors.hpp"
#include "aspectsum/llm_gateway.hpp"
#include "aspectsum/mock_backend.hpp"
#include "aspectsum/text.hpp"

using namespace aspectsum;

namespace {

std::vector<RawMention> extract(const MockBackend& b, std::string_view text) {
    return std::get<ExtractionPayload>(parse_structured(b.extract(text), TemplateId::AspectExtraction)).mentions;
}

}  // namespace

TEST(MockRules, BuiltinParses) {
    auto rules = MockRules::builtin();
    EXPECT_EQ(rules.aspect_keywords.at("assembly time"), "assembly time");
    EXPECT_EQ(rules.canonical.at("value for money"), "price");
    EXPECT_FALSE(rules.fillers.empty());
    EXPECT_EQ(rules.poison_markers.size(), 1u);
}

TEST(MockRules, RejectsBadLines) {
    EXPECT_THROW(MockRules::parse("aspect\tonly-two"), ConfigError);
    EXPECT_THROW(MockRules::parse("bogus\ta\tb"), ConfigError);
    EXPECT_NO_THROW(MockRules::parse("# comment\n\npositive\tgood\n"));
}

TEST(MockBackend, ExtractsWithClauseSentiment) {
    MockBackend b;
    auto m = extract(b, "Love the color. Assembly took forever though, but delivery was fast.");
    ASSERT_EQ(m.size(), 3u);
    EXPECT_EQ(m[0], (RawMention{"color", Sentiment::Positive}));
    EXPECT_EQ(m[1], (RawMention{"assembly", Sentiment::Negative}));
    EXPECT_EQ(m[2], (RawMention{"delivery", Sentiment::Positive}));
}

TEST(MockBackend, LongestKeywordWinsAndMixedCues) {
    MockBackend b;
    auto m = extract(b, "Assembly time was okay.");
    ASSERT_EQ(m.size(), 1u);
    EXPECT_EQ(m[0], (RawMention{"assembly time", Sentiment::Mixed}));
    auto both = extract(b, "Great fabric with bad stitching");
    ASSERT_EQ(both.size(), 1u);
    EXPECT_EQ(both[0].sentiment, Sentiment::Mixed);
}

TEST(MockBackend, PoisonMarkerYieldsMalformedOutput) {
    MockBackend b;
    EXPECT_THROW(parse_structured(b.extract("nice color <<emit-malformed>>"), TemplateId::AspectExtraction),
                 GatewayError);
}

TEST(MockBackend, ConsolidationUsesCanonicalTable) {
    MockBackend b;
    auto c = std::get<ConsolidationPayload>(
        parse_structured(b.consolidate({"Value For Money", "widget"}), TemplateId::AspectConsolidation));
    ASSERT_EQ(c.mappings.size(), 2u);
    EXPECT_EQ(c.mappings[0], (std::pair<std::string, std::string>{"Value For Money", "price"}));
    EXPECT_EQ(c.mappings[1], (std::pair<std::string, std::string>{"widget", "widget"}));
}

TEST(MockBackend, SummaryLengthWithinTarget) {
    MockBackend b;
    std::string sections;
    for (int i = 0; i < 12; ++i)
        sections += "[aspect: aspect number " + std::to_string(i) + " | sentiment: negative | mentions: 4]\n"
                    "<review id=\"r" + std::to_string(i) + "\">\ntext\n</review>\n";
    for (const auto& s : {std::string{}, sections,
                          std::string("[aspect: color | sentiment: positive | mentions: 1]\n")}) {
        auto text = b.summarize(s);
        EXPECT_GE(utf8_length(text), kTargetSummaryMin);
        EXPECT_LE(utf8_length(text), kTargetSummaryMax);
    }
}

TEST(SectionBetween, UsesLastOpeningMarker) {
    EXPECT_EQ(section_between("<a>\nx\n</a> <a>\ny\n</a>", "<a>", "</a>"), "y");
    EXPECT_EQ(section_between("none", "<a>", "</a>"), "");
}
