// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

#include "evalagent/config.hpp"

#include <fstream>

#include <fmt/format.h>

#include "evalagent/error.hpp"
#include "evalagent/json_codec.hpp"
#include "evalagent/sampler.hpp"

namespace evalagent {

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : (base / path).lexically_normal();
}

BackendConfig parse_backend(const json& j, const std::filesystem::path& base, const std::string& what) {
    BackendConfig b;
    if (j.contains("script_file")) {
        b.script_file = resolve(base, j.at("script_file").get<std::string>());
    } else if (j.contains("url")) {
        RemoteBackendConfig r;
        r.url = j.at("url").get<std::string>();
        r.credential_env = j.value("credential_env", "");
        r.max_attempts = j.value("max_attempts", r.max_attempts);
        r.initial_backoff = std::chrono::milliseconds(j.value("backoff_ms", 200));
        r.timeout = std::chrono::seconds(j.value("timeout_s", 120));
        if (r.max_attempts < 1) throw ConfigError(what + ": max_attempts must be at least 1");
        b.remote = r;
    } else {
        throw ConfigError(what + ": needs script_file or url");
    }
    return b;
}

void add_scale(AppConfig& cfg, const std::string& dimension_id, TierScale scale) {
    scale.validate();
    const auto [it, inserted] = cfg.scales.emplace(dimension_id, scale);
    if (!inserted && !(it->second == scale)) {
        throw ConfigError("conflicting calibrations for dimension " + dimension_id);
    }
}

void parse_registry(AppConfig& cfg, const json& reg, const std::filesystem::path& base) {
    for (const auto& r : reg.value("references", json::array())) {
        ReferenceDataset ref{r.at("id").get<std::string>(), r.at("uri").get<std::string>()};
        if (ref.uri.find("://") == std::string::npos) ref.uri = resolve(base, ref.uri).string();
        cfg.registry.register_reference(ref);
    }
    for (const auto& t : reg.at("tools")) {
        ToolDescriptor d;
        if (t.contains("remote")) {
            d = fetch_remote_descriptor(t.at("remote").get<std::string>());
        } else {
            d = decode<ToolDescriptor>(t, "tool descriptor");
        }
        const auto& tool = cfg.registry.register_tool(d);
        const auto calibration = t.value("calibration", "default");
        if (calibration == "default") {
            add_scale(cfg, tool.dimension_id, TierScale::uniform(tool.dimension_id));
        } else {
            auto scale = load_tier_scale(resolve(base, calibration).string());
            if (scale.dimension_id.empty()) scale.dimension_id = tool.dimension_id;
            if (scale.dimension_id != tool.dimension_id) {
                throw ConfigError(fmt::format("calibration {} is for {}, tool {} scores {}", calibration,
                                              scale.dimension_id, tool.tool_id, tool.dimension_id));
            }
            add_scale(cfg, tool.dimension_id, scale);
        }
    }
    for (const auto& l : reg.value("libraries", json::array())) {
        auto lib = load_prompt_library(resolve(base, l.get<std::string>()).string());
        const auto id = lib.dimension_id;
        if (!cfg.libraries.emplace(id, std::move(lib)).second) {
            throw ConfigError("two prompt libraries for dimension " + id);
        }
    }
}

}  // namespace

std::unique_ptr<ChatBackend> BackendConfig::make() const {
    if (script_file) return ScriptedBackend::from_file(script_file->string());
    if (remote) return std::make_unique<RemoteBackend>(*remote);
    throw ConfigError("backend has neither script_file nor url");
}

const ModelDescriptor& AppConfig::model(const std::string& id) const {
    for (const auto& m : models) {
        if (m.id == id) return m;
    }
    throw ConfigError("model " + id + " is not configured");
}

AppConfig parse_config(const json& doc, const std::filesystem::path& base) {
    AppConfig cfg;
    try {
        const auto& gw = doc.at("gateway");
        cfg.planner = parse_backend(gw.at("planner"), base, "gateway.planner");
        cfg.promptgen = gw.contains("promptgen") ? parse_backend(gw.at("promptgen"), base, "gateway.promptgen")
                                                 : cfg.planner;
        if (gw.contains("vlm")) cfg.vlm = parse_backend(gw.at("vlm"), base, "gateway.vlm");
        cfg.temperature = gw.value("temperature", kDefaultTemperature);
        cfg.max_parse_retries = gw.value("max_parse_retries", 3);
        cfg.vqa_parse_retries = gw.value("vqa_parse_retries", 2);
        if (cfg.max_parse_retries < 0 || cfg.vqa_parse_retries < 0) {
            throw ConfigError("parse retry counts must be non-negative");
        }

        if (doc.contains("limits")) cfg.limits = decode<LoopLimits>(doc.at("limits"), "limits");
        cfg.limits.validate();

        parse_registry(cfg, doc.at("registry"), base);
        for (const auto& m : doc.at("models")) {
            auto model = decode<ModelDescriptor>(m, "model descriptor");
            if (model.is_mock() && !model.mock_profile) throw ConfigError("mock model " + model.id + " needs mock_profile");
            cfg.models.push_back(std::move(model));
        }

        cfg.workspace = resolve(base, doc.value("workspace", "workspace"));
        cfg.store = resolve(base, doc.value("store", "store/results.jsonl"));
        cfg.templates = doc.contains("templates") ? resolve(base, doc.at("templates").get<std::string>())
                                                  : std::filesystem::path(TemplateSet::default_dir());
        const auto clock = parse_cost_clock(doc.value("cost_clock", "sample_latency"));
        if (!clock) throw ConfigError("cost_clock must be sample_latency or wall");
        cfg.clock = *clock;
        cfg.generation_timeout = std::chrono::seconds(doc.value("generation_timeout_s", 600));
        cfg.allow_generated_in_closed = doc.value("allow_generated_in_closed", false);
        cfg.trial_concurrency = doc.value("trial_concurrency", 1);
        if (cfg.trial_concurrency < 1) throw ConfigError("trial_concurrency must be at least 1");
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

AppConfig load_config(const std::filesystem::path& path) {
    auto cfg = parse_config(read_json_file(path.string()), path.parent_path());
    cfg.source = path;
    return cfg;
}

SessionOutcome run_configured_session(const AppConfig& config, const TemplateSet& templates, const UserQuery& query,
                                      const ModelDescriptor& model, std::uint64_t seed,
                                      const std::filesystem::path& workspace, bool write_files) {
    const auto dir = session_directory(workspace, query.id, seed);
    std::filesystem::create_directories(dir);

    auto planner_llm = config.planner.make();
    auto promptgen_llm = config.promptgen.make();
    std::unique_ptr<ChatBackend> vlm = config.vlm ? config.vlm->make() : nullptr;

    PlanAgent planner(*planner_llm, templates, {config.max_parse_retries, config.temperature});
    PromptGenOptions pg;
    pg.seed = seed;
    pg.allow_generated_in_closed = config.allow_generated_in_closed;
    pg.max_parse_retries = config.max_parse_retries;
    pg.temperature = config.temperature;
    PromptGenAgent promptgen(*promptgen_llm, templates, pg);
    Sampler sampler({dir, config.limits.samples_per_prompt, config.generation_timeout});
    Toolkit toolkit(config.registry, dir);

    SessionDeps deps{planner,  promptgen, sampler, toolkit, config.scales, config.libraries, templates,
                     vlm.get(), {config.vqa_parse_retries, config.temperature}, config.clock};

    std::ofstream trace_file;
    if (write_files) {
        trace_file.open(dir / "trace.jsonl", std::ios::binary | std::ios::trunc);
        if (!trace_file) throw StorageFailure("cannot write " + (dir / "trace.jsonl").string());
    }
    auto outcome = run_session(query, model, config.limits, deps, seed, write_files ? &trace_file : nullptr);
    if (write_files) {
        std::ofstream report(dir / "report.json", std::ios::binary | std::ios::trunc);
        report << render_report(outcome.report);
        if (!report) throw StorageFailure("cannot write " + (dir / "report.json").string());
    }
    return outcome;
}

}  // namespace evalagent
