#include <gtest/gtest.h>

#include <fstream>

#include "aspectsum/errors.hpp"
#include "aspectsum/templates.hpp"
#include "support.hpp"

using namespace aspectsum;

TEST(RenderPrompt, SubstitutesOnce) {
    PromptTemplate t{TemplateId::AspectExtraction, "A {x} B {y} {x}"};
    EXPECT_EQ(render_prompt(t, {{"x", "{y}"}, {"y", "2"}}), "A {y} B 2 {y}");
}

TEST(RenderPrompt, UnboundAndExtraBindingsAreErrors) {
    PromptTemplate t{TemplateId::AspectExtraction, "hello {name}"};
    EXPECT_THROW(render_prompt(t, {}), ConfigError);
    EXPECT_THROW(render_prompt(t, {{"name", "a"}, {"other", "b"}}), ConfigError);
}

TEST(RenderPrompt, NonPlaceholderBracesPassThrough) {
    PromptTemplate t{TemplateId::AspectExtraction, R"({"aspects": []} {v})"};
    EXPECT_EQ(render_prompt(t, {{"v", "1"}}), R"({"aspects": []} 1)");
}

TEST(TemplateSet, BuiltinPlaceholders) {
    auto set = TemplateSet::builtin();
    using Names = std::vector<std::string>;
    EXPECT_EQ(set.get(TemplateId::AspectExtraction).placeholders(), (Names{"review_text"}));
    EXPECT_EQ(set.get(TemplateId::AspectConsolidation).placeholders(), (Names{"aspects"}));
    EXPECT_EQ(set.get(TemplateId::Summarization).placeholders(), (Names{"min_chars", "max_chars", "aspect_sections"}));
}

TEST(TemplateSet, BuiltinMatchesRepositoryFiles) {
    auto set = TemplateSet::builtin();
    auto repo = std::filesystem::path(ASPECTSUM_FIXTURES).parent_path().parent_path() / "templates";
    auto loaded = TemplateSet::load_directory(repo);
    for (auto id : {TemplateId::AspectExtraction, TemplateId::AspectConsolidation, TemplateId::Summarization})
        EXPECT_EQ(set.get(id).body, loaded.get(id).body);
}

TEST(TemplateSet, LoadDirectoryMissingFileIsConfigError) {
    testing_support::TempDir dir;
    std::ofstream(dir / "aspect_extraction.txt") << "{review_text}";
    EXPECT_THROW(TemplateSet::load_directory(dir.path()), ConfigError);
}
