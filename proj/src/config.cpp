#include "aspectsum/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "aspectsum/errors.hpp"
#include "aspectsum/text.hpp"

namespace aspectsum {

namespace {

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ConfigError("config key '" + std::string(key) + "': not a number: " + std::string(value));
    return out;
}

double parse_double(std::string_view key, std::string_view value) {
    try {
        std::size_t used = 0;
        const std::string s(value);
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + std::string(key) + "': not a number: " + std::string(value));
    }
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (iequals(value, "true") || value == "1" || iequals(value, "yes")) return true;
    if (iequals(value, "false") || value == "0" || iequals(value, "no")) return false;
    throw ConfigError("config key '" + std::string(key) + "': not a boolean: " + std::string(value));
}

Millis seconds_to_millis(std::string_view key, std::string_view value) {
    return Millis(static_cast<Millis::rep>(parse_double(key, value) * 1000.0));
}

}  // namespace

AppConfig AppConfig::parse(std::string_view text) {
    AppConfig cfg;
    using Setter = std::function<void(std::string_view, std::string_view)>;
    const std::map<std::string, Setter, std::less<>> setters{
        {"min_reviews", [&](auto k, auto v) { cfg.pipeline.trigger.min_reviews = parse_number<std::uint64_t>(k, v); }},
        {"refresh_fraction", [&](auto k, auto v) { cfg.pipeline.trigger.refresh_fraction = parse_double(k, v); }},
        {"cap", [&](auto k, auto v) { cfg.pipeline.cap = parse_number<std::size_t>(k, v); }},
        {"top_k", [&](auto k, auto v) { cfg.pipeline.top_k = parse_number<std::size_t>(k, v); }},
        {"seed", [&](auto k, auto v) { cfg.pipeline.seed = parse_number<std::uint64_t>(k, v); }},
        {"percentile", [&](auto k, auto v) { cfg.pipeline.percentile = parse_double(k, v); }},
        {"threshold", [&](auto k, auto v) { cfg.pipeline.pinned_threshold = parse_number<std::uint64_t>(k, v); }},
        {"sampling_mode", [&](auto, auto v) { cfg.pipeline.weighting.mode = parse_weighting_mode(v); }},
        {"half_life_days", [&](auto k, auto v) { cfg.pipeline.weighting.half_life_days = parse_double(k, v); }},
        {"extraction_parallelism",
         [&](auto k, auto v) { cfg.pipeline.extraction_parallelism = parse_number<std::size_t>(k, v); }},
        {"llm.backend",
         [&](auto k, auto v) {
             if (iequals(v, "mock")) {
                 cfg.backend = BackendKind::Mock;
             } else if (iequals(v, "http")) {
                 cfg.backend = BackendKind::Http;
             } else {
                 throw ConfigError("config key '" + std::string(k) + "': expected mock or http");
             }
         }},
        {"llm.endpoint", [&](auto, auto v) { cfg.llm_endpoint = std::string(v); }},
        {"llm.model", [&](auto, auto v) { cfg.llm_model = std::string(v); }},
        {"llm.max_attempts", [&](auto k, auto v) { cfg.gateway.max_attempts = parse_number<int>(k, v); }},
        {"llm.timeout_s", [&](auto k, auto v) { cfg.gateway.timeout = seconds_to_millis(k, v); }},
        {"llm.backoff_base_s", [&](auto k, auto v) { cfg.gateway.backoff_base = seconds_to_millis(k, v); }},
        {"llm.parallelism", [&](auto k, auto v) { cfg.gateway.parallelism = parse_number<std::size_t>(k, v); }},
        {"templates_dir", [&](auto, auto v) { cfg.templates_dir = std::string(v); }},
        {"mock_rules", [&](auto, auto v) { cfg.mock_rules = std::string(v); }},
        {"store_path", [&](auto, auto v) { cfg.store_path = std::string(v); }},
        {"mapping_path", [&](auto, auto v) { cfg.mapping_path = std::string(v); }},
        {"listen_host", [&](auto, auto v) { cfg.listen_host = std::string(v); }},
        {"listen_port", [&](auto k, auto v) { cfg.listen_port = parse_number<int>(k, v); }},
        {"cors_origin", [&](auto, auto v) { cfg.cors_origin = std::string(v); }},
        {"auto_run", [&](auto k, auto v) { cfg.auto_run = parse_bool(k, v); }},
    };

    std::size_t line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" +
                                                   std::string(key) + "'");
        it->second(key, value);
    }

    if (cfg.pipeline.cap == 0) throw ConfigError("cap must be >= 1");
    if (cfg.pipeline.top_k == 0) throw ConfigError("top_k must be >= 1");
    if (!(cfg.pipeline.percentile > 0.0 && cfg.pipeline.percentile <= 1.0))
        throw ConfigError("percentile must be in (0, 1]");
    if (!(cfg.pipeline.trigger.refresh_fraction > 0.0)) throw ConfigError("refresh_fraction must be > 0");
    if (!(cfg.pipeline.weighting.half_life_days > 0.0)) throw ConfigError("half_life_days must be > 0");
    return cfg;
}

AppConfig AppConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

}  // namespace aspectsum
