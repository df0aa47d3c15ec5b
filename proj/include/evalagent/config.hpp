// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

// Run configuration: one JSON document naming the LLM backends, loop limits,
// tool registry, models, workspace and store. Relative paths resolve against
// the config file's directory. Credentials only ever come from environment
// variables named in the config.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "evalagent/core.hpp"
#include "evalagent/llm_gateway.hpp"
#include "evalagent/loop_engine.hpp"
#include "evalagent/prompt_templates.hpp"
#include "evalagent/promptgen_agent.hpp"
#include "evalagent/tiering.hpp"
#include "evalagent/toolkit.hpp"

namespace evalagent {

/// Either a scripted transcript or a remote chat endpoint.
struct BackendConfig {
    std::optional<std::filesystem::path> script_file;
    std::optional<RemoteBackendConfig> remote;

    /// A fresh backend; scripted backends restart their transcript.
    std::unique_ptr<ChatBackend> make() const;
};

struct AppConfig {
    std::filesystem::path source;

    BackendConfig planner;
    BackendConfig promptgen;
    std::optional<BackendConfig> vlm;
    double temperature = kDefaultTemperature;
    int max_parse_retries = 3;
    int vqa_parse_retries = 2;

    LoopLimits limits;
    ToolRegistry registry;
    std::map<std::string, TierScale> scales;        // by dimension_id
    std::map<std::string, PromptLibrary> libraries;  // by dimension_id
    std::vector<ModelDescriptor> models;

    std::filesystem::path workspace;
    std::filesystem::path store;
    std::filesystem::path templates;
    CostClock clock = CostClock::sample_latency;
    std::chrono::seconds generation_timeout{600};
    bool allow_generated_in_closed = false;
    int trial_concurrency = 1;

    /// Throws ConfigError for an unknown model id.
    const ModelDescriptor& model(const std::string& id) const;
};

/// Throws ConfigError (unreadable or malformed document) or ValidationError
/// (a referenced descriptor, scale or library is invalid).
AppConfig load_config(const std::filesystem::path& path);
AppConfig parse_config(const json& document, const std::filesystem::path& base_dir);

/// Runs one session with fresh per-session agents and backends, inside
/// session_directory(workspace, query.id, seed). When `write_files` is set,
/// trace.jsonl is written there incrementally and report.json on success.
SessionOutcome run_configured_session(const AppConfig& config, const TemplateSet& templates, const UserQuery& query,
                                      const ModelDescriptor& model, std::uint64_t seed,
                                      const std::filesystem::path& workspace, bool write_files = true);

}  // namespace evalagent
