#pragma once

#include <set>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aspectsum/llm_gateway.hpp"

namespace aspectsum {

/// Keyword tables driving MockBackend; the file format is documented at the
/// top of data/mock_rules.tsv.
struct MockRules {
    /// keyword (normalized, possibly multi-word) -> raw aspect.
    std::map<std::string, std::string> aspect_keywords;
    std::set<std::string> positive_cues;
    std::set<std::string> negative_cues;
    std::set<std::string> mixed_cues;
    /// raw aspect -> canonical aspect.
    std::map<std::string, std::string> canonical;
    std::vector<std::string> poison_markers;
    std::vector<std::string> fillers;

    static MockRules parse(std::string_view tsv);
    static MockRules builtin();
};

/// Deterministic stand-in for a real model: output depends only on the
/// template id and the rendered prompt.
///
/// Extraction splits the review into clauses and emits every aspect keyword
/// found, with sentiment from the cue words in the same clause. Consolidation
/// looks each aspect up in the canonical table (identity otherwise).
/// Summarization writes one sentence per listed aspect-sentiment pair and pads
/// with filler sentences so the text is always 300-500 characters.
class MockBackend : public LlmBackend {
public:
    explicit MockBackend(MockRules rules = MockRules::builtin());

    std::string complete(const BackendRequest& request) override;
    std::string id() const override { return "mock-keyword-v1"; }

    std::string extract(std::string_view review_text) const;
    std::string consolidate(const std::vector<std::string>& aspects) const;
    std::string summarize(std::string_view aspect_sections) const;

    const MockRules& rules() const { return rules_; }

private:
    MockRules rules_;
    std::size_t longest_keyword_words_ = 1;
};

/// Text between the last `open` marker line and the following `close` marker.
std::string_view section_between(std::string_view text, std::string_view open, std::string_view close);

}  // namespace aspectsum
