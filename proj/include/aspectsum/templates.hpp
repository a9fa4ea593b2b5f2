#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace aspectsum {

enum class TemplateId { AspectExtraction, AspectConsolidation, Summarization };

std::string_view to_string(TemplateId id);

/// Prompt text with `{name}` placeholders. A placeholder name is lowercase
/// letters, digits and underscores; other braces (JSON examples) are literal.
struct PromptTemplate {
    TemplateId id = TemplateId::AspectExtraction;
    std::string body;

    /// Distinct placeholder names in order of first appearance.
    std::vector<std::string> placeholders() const;
};

using Bindings = std::map<std::string, std::string>;

/// Single-pass substitution; bound values are not rescanned. Throws
/// ConfigError if a placeholder is unbound or a binding names no placeholder.
std::string render_prompt(const PromptTemplate& tpl, const Bindings& bindings);

class TemplateSet {
public:
    /// The repository's templates/ files, compiled in.
    static TemplateSet builtin();
    /// Reads aspect_extraction.txt, aspect_consolidation.txt and summarization.txt.
    static TemplateSet load_directory(const std::filesystem::path& dir);

    const PromptTemplate& get(TemplateId id) const { return templates_[static_cast<std::size_t>(id)]; }
    std::string render(TemplateId id, const Bindings& bindings) const { return render_prompt(get(id), bindings); }

private:
    std::array<PromptTemplate, 3> templates_;
};

std::string_view template_file_name(TemplateId id);

namespace embedded {
std::string_view extraction_template();
std::string_view consolidation_template();
std::string_view summarization_template();
std::string_view mock_rules();
}  // namespace embedded

}  // namespace aspectsum
