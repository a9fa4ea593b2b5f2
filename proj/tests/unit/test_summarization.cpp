#include <gtest/gtest.h>

#include "aspectsum/errors.hpp"
#include "aspectsum/summarization.hpp"
#include "support.hpp"

using namespace aspectsum;
using testing_support::make_review;
using testing_support::ScriptedBackend;

namespace {

SelectionResult sample_selection() {
    SelectionResult s;
    s.product_id = "p";
    s.selected_aspects = {{"color", {2, 0, 0}}, {"assembly", {0, 1, 0}}};
    s.buckets = {{{"color", Sentiment::Positive}, 2, {"r1", "r2"}}, {{"assembly", Sentiment::Negative}, 1, {"r3"}}};
    s.selected_review_ids = {"r1", "r2", "r3"};
    return s;
}

std::vector<Review> sample_reviews() {
    return {make_review("r1", "p", "Nice color."), make_review("r2", "p", " Great color! "),
            make_review("r3", "p", "Assembly was hard.")};
}

std::string text_of_length(std::size_t n) { return std::string(n, 'x'); }

}  // namespace

TEST(AspectSections, Format) {
    EXPECT_EQ(build_aspect_sections(sample_selection(), sample_reviews()),
              "[aspect: color | sentiment: positive | mentions: 2]\n"
              "<review id=\"r1\">\nNice color.\n</review>\n"
              "<review id=\"r2\">\nGreat color!\n</review>\n\n"
              "[aspect: assembly | sentiment: negative | mentions: 1]\n"
              "<review id=\"r3\">\nAssembly was hard.\n</review>");
}

TEST(AspectSections, Errors) {
    EXPECT_THROW(build_aspect_sections(SelectionResult{}, sample_reviews()), ValidationError);
    auto reviews = sample_reviews();
    reviews.pop_back();
    EXPECT_THROW(build_aspect_sections(sample_selection(), reviews), ValidationError);
}

TEST(SummaryPrompt, BindsLengthTargets) {
    auto prompt = build_summary_prompt(sample_selection(), sample_reviews(), TemplateSet::builtin());
    EXPECT_NE(prompt.find("between 300 and 500 characters"), std::string::npos);
    EXPECT_NE(prompt.find("[aspect: assembly | sentiment: negative | mentions: 1]"), std::string::npos);
}

TEST(SummaryLength, HardBounds) {
    EXPECT_FALSE(summary_length_ok(text_of_length(249)));
    EXPECT_TRUE(summary_length_ok(text_of_length(250)));
    EXPECT_TRUE(summary_length_ok(text_of_length(600)));
    EXPECT_FALSE(summary_length_ok(text_of_length(601)));
    std::string accented;
    for (int i = 0; i < 300; ++i) accented += "\xc3\xa9";
    EXPECT_TRUE(summary_length_ok(accented));
}

TEST(Summarizer, RegeneratesUntilLengthFits) {
    auto backend = std::make_shared<ScriptedBackend>();
    backend->push_text(TemplateId::Summarization, text_of_length(100));
    backend->push_text(TemplateId::Summarization, text_of_length(400));
    LlmGateway gw(backend, {}, testing_support::no_sleep());
    auto templates = TemplateSet::builtin();
    Summarizer s(gw, templates, testing_support::fixed_clock());
    auto rec = s.generate_summary(sample_selection(), sample_reviews(), 12);
    EXPECT_TRUE(rec.length_ok);
    EXPECT_EQ(rec.summary_text.size(), 400u);
    EXPECT_EQ(rec.aspects_used, (std::vector<std::string>{"color", "assembly"}));
    EXPECT_EQ(rec.review_count_at_generation, 12u);
    EXPECT_EQ(rec.model_id, "scripted");
    EXPECT_EQ(backend->calls(TemplateId::Summarization), 2);
}

TEST(Summarizer, KeepsLastOutOfRangeAttempt) {
    auto backend = std::make_shared<ScriptedBackend>();
    for (std::size_t n : {100u, 700u, 800u, 400u}) backend->push_text(TemplateId::Summarization, text_of_length(n));
    LlmGateway gw(backend, {}, testing_support::no_sleep());
    auto templates = TemplateSet::builtin();
    Summarizer s(gw, templates, testing_support::fixed_clock());
    auto rec = s.generate_summary(sample_selection(), sample_reviews(), 3);
    EXPECT_FALSE(rec.length_ok);
    EXPECT_EQ(rec.summary_text.size(), 800u);
    EXPECT_EQ(backend->calls(TemplateId::Summarization), 3);
}
