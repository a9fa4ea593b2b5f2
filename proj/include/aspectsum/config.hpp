#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "aspectsum/llm_gateway.hpp"
#include "aspectsum/orchestrator.hpp"

namespace aspectsum {

enum class BackendKind { Mock, Http };

/// Everything the CLI and service read from a `key = value` file. Lines
/// starting with '#' are comments; unknown keys are rejected.
struct AppConfig {
    PipelineConfig pipeline;
    GatewayConfig gateway;

    BackendKind backend = BackendKind::Mock;
    std::string llm_endpoint;
    std::string llm_model;
    /// Empty: built-in templates.
    std::filesystem::path templates_dir;
    /// Empty: built-in mock rules.
    std::filesystem::path mock_rules;

    std::filesystem::path store_path = "aspectsum.journal";
    std::filesystem::path mapping_path = "aspect_mappings.tsv";

    std::string listen_host = "127.0.0.1";
    int listen_port = 8080;
    std::string cors_origin = "*";
    /// Run triggered pipelines as soon as ingestion fires them.
    bool auto_run = true;

    static AppConfig parse(std::string_view text);
    static AppConfig load(const std::filesystem::path& path);
};

}  // namespace aspectsum
