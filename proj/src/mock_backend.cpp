#include "aspectsum/mock_backend.hpp"

#include <json.hpp>

#include "aspectsum/errors.hpp"
#include "aspectsum/text.hpp"

namespace aspectsum {

using nlohmann::json;

MockRules MockRules::parse(std::string_view tsv) {
    MockRules rules;
    std::size_t line_no = 0;
    for (auto line : split(tsv, '\n')) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (trim(line).empty() || line.front() == '#') continue;
        auto cols = split(line, '\t');
        auto kind = cols[0];
        auto need = [&](std::size_t n) {
            if (cols.size() != n)
                throw ConfigError("mock rules line " + std::to_string(line_no) + ": expected " + std::to_string(n) +
                                  " columns");
        };
        if (kind == "aspect") {
            need(3);
            rules.aspect_keywords[normalize_aspect(cols[1])] = normalize_aspect(cols[2]);
        } else if (kind == "positive") {
            need(2);
            rules.positive_cues.insert(normalize_aspect(cols[1]));
        } else if (kind == "negative") {
            need(2);
            rules.negative_cues.insert(normalize_aspect(cols[1]));
        } else if (kind == "mixed") {
            need(2);
            rules.mixed_cues.insert(normalize_aspect(cols[1]));
        } else if (kind == "canonical") {
            need(3);
            rules.canonical[normalize_aspect(cols[1])] = normalize_aspect(cols[2]);
        } else if (kind == "poison") {
            need(2);
            rules.poison_markers.emplace_back(cols[1]);
        } else if (kind == "filler") {
            need(2);
            rules.fillers.emplace_back(trim(cols[1]));
        } else {
            throw ConfigError("mock rules line " + std::to_string(line_no) + ": unknown kind '" + std::string(kind) +
                              "'");
        }
    }
    return rules;
}

MockRules MockRules::builtin() { return parse(embedded::mock_rules()); }

std::string_view section_between(std::string_view text, std::string_view open, std::string_view close) {
    auto start = text.rfind(open);
    if (start == std::string_view::npos) return {};
    start += open.size();
    if (start < text.size() && text[start] == '\n') ++start;
    auto end = text.find(close, start);
    if (end == std::string_view::npos) return {};
    auto body = text.substr(start, end - start);
    if (!body.empty() && body.back() == '\n') body.remove_suffix(1);
    return body;
}

MockBackend::MockBackend(MockRules rules) : rules_(std::move(rules)) {
    for (const auto& [keyword, aspect] : rules_.aspect_keywords) {
        longest_keyword_words_ = std::max(longest_keyword_words_, split(keyword, ' ').size());
    }
    if (rules_.fillers.empty()) rules_.fillers.push_back("Reviewers shared a range of additional comments.");
}

std::string MockBackend::complete(const BackendRequest& request) {
    switch (request.template_id) {
        case TemplateId::AspectExtraction:
            return extract(section_between(request.prompt, "<review>", "</review>"));
        case TemplateId::AspectConsolidation: {
            std::vector<std::string> aspects;
            for (auto line : split(section_between(request.prompt, "<aspects>", "</aspects>"), '\n')) {
                line = trim(line);
                if (line.size() > 2 && line.substr(0, 2) == "- ") aspects.emplace_back(trim(line.substr(2)));
            }
            return consolidate(aspects);
        }
        case TemplateId::Summarization:
            return summarize(section_between(request.prompt, "<aspects>", "</aspects>"));
    }
    return {};
}

namespace {

bool is_word_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '\'';
}

bool is_clause_break_word(std::string_view w) {
    return w == "but" || w == "however" || w == "although" || w == "though" || w == "yet";
}

// Lowercased words grouped into clauses.
std::vector<std::vector<std::string>> clauses_of(std::string_view text) {
    std::vector<std::vector<std::string>> clauses(1);
    std::string word;
    auto flush_word = [&] {
        if (word.empty()) return;
        if (is_clause_break_word(word)) {
            if (!clauses.back().empty()) clauses.emplace_back();
        } else {
            clauses.back().push_back(word);
        }
        word.clear();
    };
    for (char raw : text) {
        const char c = (raw >= 'A' && raw <= 'Z') ? static_cast<char>(raw - 'A' + 'a') : raw;
        if (is_word_char(c)) {
            word.push_back(c);
            continue;
        }
        flush_word();
        if (c == ',' || c == '.' || c == ';' || c == ':' || c == '!' || c == '?' || c == '\n') {
            if (!clauses.back().empty()) clauses.emplace_back();
        }
    }
    flush_word();
    if (clauses.back().empty()) clauses.pop_back();
    return clauses;
}

}  // namespace

std::string MockBackend::extract(std::string_view review_text) const {
    for (const auto& marker : rules_.poison_markers) {
        if (review_text.find(marker) != std::string_view::npos) return "Sorry, I cannot answer that {";
    }
    json aspects = json::array();
    for (const auto& clause : clauses_of(review_text)) {
        int pos = 0, neg = 0, mix = 0;
        for (const auto& w : clause) {
            pos += rules_.positive_cues.count(w) ? 1 : 0;
            neg += rules_.negative_cues.count(w) ? 1 : 0;
            mix += rules_.mixed_cues.count(w) ? 1 : 0;
        }
        Sentiment sentiment = Sentiment::Positive;
        if (mix > 0 || (pos > 0 && neg > 0)) {
            sentiment = Sentiment::Mixed;
        } else if (neg > 0) {
            sentiment = Sentiment::Negative;
        }
        for (std::size_t i = 0; i < clause.size();) {
            std::size_t matched = 0;
            for (std::size_t len = std::min(longest_keyword_words_, clause.size() - i); len >= 1; --len) {
                std::string phrase = clause[i];
                for (std::size_t k = 1; k < len; ++k) phrase += " " + clause[i + k];
                auto it = rules_.aspect_keywords.find(phrase);
                if (it != rules_.aspect_keywords.end()) {
                    aspects.push_back({{"aspect", it->second}, {"sentiment", std::string(to_string(sentiment))}});
                    matched = len;
                    break;
                }
            }
            i += matched ? matched : 1;
        }
    }
    return json{{"aspects", aspects}}.dump();
}

std::string MockBackend::consolidate(const std::vector<std::string>& aspects) const {
    json mappings = json::array();
    for (const auto& a : aspects) {
        auto norm = normalize_aspect(a);
        auto it = rules_.canonical.find(norm);
        mappings.push_back({{"aspect", a}, {"canonical", it == rules_.canonical.end() ? norm : it->second}});
    }
    return json{{"mappings", mappings}}.dump();
}

std::string MockBackend::summarize(std::string_view aspect_sections) const {
    constexpr std::size_t kAspectBudget = 480;
    std::size_t review_blocks = 0;
    std::vector<std::string> sentences;
    for (auto line : split(aspect_sections, '\n')) {
        line = trim(line);
        if (line.substr(0, 11) == "<review id=") {
            ++review_blocks;
            continue;
        }
        // [aspect: NAME | sentiment: S | mentions: N]
        if (line.substr(0, 9) != "[aspect: " || line.back() != ']') continue;
        auto fields = split(line.substr(1, line.size() - 2), '|');
        if (fields.size() != 3) continue;
        auto value = [](std::string_view f) { return trim(f.substr(f.find(':') + 1)); };
        const std::string aspect(value(fields[0]));
        auto sentiment = parse_sentiment(value(fields[1]));
        const std::string count(value(fields[2]));
        const std::string mentions = count + (count == "1" ? " mention" : " mentions");
        if (!sentiment) continue;
        switch (*sentiment) {
            case Sentiment::Positive:
                sentences.push_back("Customers praise the " + aspect + " (" + mentions + ").");
                break;
            case Sentiment::Negative:
                sentences.push_back("Some customers report problems with the " + aspect + " (" + mentions +
                                    ").");
                break;
            case Sentiment::Mixed:
                sentences.push_back("Opinions on the " + aspect + " are mixed (" + mentions + ").");
                break;
        }
    }

    std::string text = "This summary reflects " + std::to_string(review_blocks) + " selected customer reviews.";
    for (const auto& s : sentences) {
        if (utf8_length(text) + 1 + utf8_length(s) > kAspectBudget) break;
        text += " " + s;
    }
    for (std::size_t i = 0; utf8_length(text) < kTargetSummaryMin; ++i) {
        text += " " + rules_.fillers[i % rules_.fillers.size()];
    }
    return text;
}

}  // namespace aspectsum
