#include "aspectsum/templates.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "aspectsum/errors.hpp"

namespace aspectsum {

std::string_view to_string(TemplateId id) {
    switch (id) {
        case TemplateId::AspectExtraction: return "ASPECT_EXTRACTION";
        case TemplateId::AspectConsolidation: return "ASPECT_CONSOLIDATION";
        case TemplateId::Summarization: return "SUMMARIZATION";
    }
    return "UNKNOWN";
}

std::string_view template_file_name(TemplateId id) {
    switch (id) {
        case TemplateId::AspectExtraction: return "aspect_extraction.txt";
        case TemplateId::AspectConsolidation: return "aspect_consolidation.txt";
        case TemplateId::Summarization: return "summarization.txt";
    }
    return "";
}

namespace {

bool is_name_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

// Calls on_text for literal runs and on_placeholder for each `{name}`.
template <typename TextFn, typename PlaceholderFn>
void scan(std::string_view body, TextFn&& on_text, PlaceholderFn&& on_placeholder) {
    std::size_t i = 0;
    std::size_t literal_start = 0;
    while (i < body.size()) {
        if (body[i] == '{') {
            std::size_t j = i + 1;
            while (j < body.size() && is_name_char(body[j])) ++j;
            if (j > i + 1 && j < body.size() && body[j] == '}' && !(body[i + 1] >= '0' && body[i + 1] <= '9')) {
                on_text(body.substr(literal_start, i - literal_start));
                on_placeholder(body.substr(i + 1, j - i - 1));
                i = j + 1;
                literal_start = i;
                continue;
            }
        }
        ++i;
    }
    on_text(body.substr(literal_start));
}

}  // namespace

std::vector<std::string> PromptTemplate::placeholders() const {
    std::vector<std::string> names;
    std::set<std::string, std::less<>> seen;
    scan(body, [](std::string_view) {},
         [&](std::string_view name) {
             if (seen.emplace(name).second) names.emplace_back(name);
         });
    return names;
}

std::string render_prompt(const PromptTemplate& tpl, const Bindings& bindings) {
    std::string out;
    out.reserve(tpl.body.size());
    std::set<std::string, std::less<>> used;
    scan(
        tpl.body, [&](std::string_view text) { out.append(text); },
        [&](std::string_view name) {
            auto it = bindings.find(std::string(name));
            if (it == bindings.end())
                throw ConfigError("template " + std::string(to_string(tpl.id)) + ": unbound placeholder {" +
                                  std::string(name) + "}");
            out.append(it->second);
            used.emplace(name);
        });
    for (const auto& [name, value] : bindings) {
        if (!used.count(name))
            throw ConfigError("template " + std::string(to_string(tpl.id)) + " has no placeholder {" + name + "}");
    }
    return out;
}

TemplateSet TemplateSet::builtin() {
    TemplateSet set;
    set.templates_[0] = {TemplateId::AspectExtraction, std::string(embedded::extraction_template())};
    set.templates_[1] = {TemplateId::AspectConsolidation, std::string(embedded::consolidation_template())};
    set.templates_[2] = {TemplateId::Summarization, std::string(embedded::summarization_template())};
    return set;
}

TemplateSet TemplateSet::load_directory(const std::filesystem::path& dir) {
    TemplateSet set;
    for (auto id : {TemplateId::AspectExtraction, TemplateId::AspectConsolidation, TemplateId::Summarization}) {
        auto path = dir / template_file_name(id);
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ConfigError("cannot read template file " + path.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        set.templates_[static_cast<std::size_t>(id)] = {id, ss.str()};
    }
    return set;
}

}  // namespace aspectsum
