// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

#include "evalagent/json_codec.hpp"

#include <fstream>
#include <sstream>

namespace evalagent {

namespace {

template <typename Enum, typename Parser>
Enum parse_enum(const json& j, Parser parse, const char* what) {
    const auto s = j.get<std::string>();
    if (auto v = parse(s)) return *v;
    throw json::other_error::create(599, std::string("invalid ") + what + " '" + s + "'", &j);
}

template <typename T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
    if (v) j[key] = *v;
}

template <typename T>
void get_optional(const json& j, const char* key, std::optional<T>& v) {
    if (auto it = j.find(key); it != j.end() && !it->is_null()) {
        v = it->template get<T>();
    } else {
        v.reset();
    }
}

}  // namespace

void to_json(json& j, Tier t) { j = std::string(tier_id(t)); }

void from_json(const json& j, Tier& t) {
    if (j.is_number_integer()) {
        const int lvl = j.get<int>();
        if (lvl < 1 || lvl > 5) throw json::other_error::create(599, "tier level outside 1..5", &j);
        t = static_cast<Tier>(lvl);
        return;
    }
    t = parse_enum<Tier>(j, parse_tier, "tier");
}

void to_json(json& j, const UserQuery& v) {
    j = json{{"id", v.id}, {"text", v.text}, {"mode", to_string(v.mode)}, {"target_models", v.target_models}};
    if (!v.tags.empty()) j["tags"] = v.tags;
}

void from_json(const json& j, UserQuery& v) {
    j.at("id").get_to(v.id);
    j.at("text").get_to(v.text);
    v.mode = parse_enum<QueryMode>(j.at("mode"), parse_query_mode, "mode");
    j.at("target_models").get_to(v.target_models);
    v.tags = j.value("tags", std::vector<std::string>{});
}

void to_json(json& j, const ModelDescriptor& v) {
    j = json{{"id", v.id}, {"modality", to_string(v.modality)}, {"endpoint", v.endpoint}};
    if (v.mock_profile) {
        json profile = json::object();
        for (const auto& [dim, tier] : *v.mock_profile) profile[dim] = tier;
        j["mock_profile"] = profile;
    }
}

void from_json(const json& j, ModelDescriptor& v) {
    j.at("id").get_to(v.id);
    v.modality = parse_enum<Modality>(j.at("modality"), parse_modality, "modality");
    j.at("endpoint").get_to(v.endpoint);
    v.mock_profile.reset();
    if (auto it = j.find("mock_profile"); it != j.end() && !it->is_null()) {
        std::map<std::string, Tier> profile;
        for (const auto& [dim, tier] : it->items()) profile[dim] = tier.get<Tier>();
        v.mock_profile = std::move(profile);
    }
}

void to_json(json& j, const VqaQuestion& v) {
    j = json{{"text", v.text}, {"expected_form", to_string(v.expected_form)}};
}

void from_json(const json& j, VqaQuestion& v) {
    j.at("text").get_to(v.text);
    v.expected_form = parse_enum<AnswerForm>(j.at("expected_form"), parse_answer_form, "expected_form");
}

void to_json(json& j, const PromptSpec& v) {
    j = json{{"id", v.id}, {"text", v.text}, {"rationale", v.rationale}, {"source", to_string(v.source)}};
    put_optional(j, "library_ref", v.library_ref);
    if (!v.questions.empty()) j["questions"] = v.questions;
}

void from_json(const json& j, PromptSpec& v) {
    j.at("id").get_to(v.id);
    j.at("text").get_to(v.text);
    j.at("rationale").get_to(v.rationale);
    v.source = parse_enum<PromptSource>(j.at("source"), parse_prompt_source, "source");
    get_optional(j, "library_ref", v.library_ref);
    v.questions = j.value("questions", std::vector<VqaQuestion>{});
}

void to_json(json& j, const GeneratedSample& v) {
    j = json{{"id", v.id}, {"prompt_id", v.prompt_id}, {"model_id", v.model_id}, {"uri", v.uri}, {"latency", v.latency}};
}

void from_json(const json& j, GeneratedSample& v) {
    j.at("id").get_to(v.id);
    j.at("prompt_id").get_to(v.prompt_id);
    j.at("model_id").get_to(v.model_id);
    j.at("uri").get_to(v.uri);
    j.at("latency").get_to(v.latency);
}

void to_json(json& j, const ToolScore& v) {
    j = json{{"sample_id", v.sample_id}, {"tool_id", v.tool_id}, {"value", v.value}, {"kind", to_string(v.kind)}};
    put_optional(j, "detail", v.detail);
}

void from_json(const json& j, ToolScore& v) {
    j.at("sample_id").get_to(v.sample_id);
    j.at("tool_id").get_to(v.tool_id);
    j.at("value").get_to(v.value);
    v.kind = parse_enum<ScoreKind>(j.at("kind"), parse_score_kind, "kind");
    get_optional(j, "detail", v.detail);
}

void to_json(json& j, const ToolFailure& v) { j = json{{"sample_id", v.sample_id}, {"reason", v.reason}}; }

void from_json(const json& j, ToolFailure& v) {
    j.at("sample_id").get_to(v.sample_id);
    j.at("reason").get_to(v.reason);
}

void to_json(json& j, const SubAspectProposal& v) {
    j = json{{"thought", v.thought},
             {"sub_aspect", v.sub_aspect},
             {"tool_id", v.tool_id},
             {"prompt_count", v.prompt_count},
             {"stop", v.stop}};
    put_optional(j, "stop_rationale", v.stop_rationale);
    if (v.repetition_warning) j["repetition_warning"] = true;
}

void from_json(const json& j, SubAspectProposal& v) {
    j.at("thought").get_to(v.thought);
    v.sub_aspect = j.value("sub_aspect", std::string{});
    v.tool_id = j.value("tool_id", std::string{});
    v.prompt_count = j.value("prompt_count", 0);
    j.at("stop").get_to(v.stop);
    get_optional(j, "stop_rationale", v.stop_rationale);
    v.repetition_warning = j.value("repetition_warning", false);
}

void to_json(json& j, const RoundRecord& v) {
    j = json{{"index", v.index},
             {"proposal", v.proposal},
             {"dimension_id", v.dimension_id},
             {"prompts", v.prompts},
             {"samples", v.samples},
             {"scores", v.scores},
             {"failures", v.failures},
             {"round_tier", v.round_tier},
             {"observation", v.observation}};
}

void from_json(const json& j, RoundRecord& v) {
    j.at("index").get_to(v.index);
    j.at("proposal").get_to(v.proposal);
    j.at("dimension_id").get_to(v.dimension_id);
    j.at("prompts").get_to(v.prompts);
    j.at("samples").get_to(v.samples);
    j.at("scores").get_to(v.scores);
    v.failures = j.value("failures", std::vector<ToolFailure>{});
    j.at("round_tier").get_to(v.round_tier);
    j.at("observation").get_to(v.observation);
}

void to_json(json& j, const RoundCost& v) { j = json{{"samples", v.samples}, {"seconds", v.seconds}}; }

void from_json(const json& j, RoundCost& v) {
    j.at("samples").get_to(v.samples);
    j.at("seconds").get_to(v.seconds);
}

void to_json(json& j, const CostLedger& v) {
    j = json{{"total_samples", v.total_samples}, {"wall_clock", v.wall_clock}, {"per_round", v.per_round}};
}

void from_json(const json& j, CostLedger& v) {
    j.at("total_samples").get_to(v.total_samples);
    j.at("wall_clock").get_to(v.wall_clock);
    j.at("per_round").get_to(v.per_round);
}

void to_json(json& j, const DimensionVerdict& v) { j = json{{"tier", v.tier}, {"evidence", v.evidence}}; }

void from_json(const json& j, DimensionVerdict& v) {
    j.at("tier").get_to(v.tier);
    j.at("evidence").get_to(v.evidence);
}

void to_json(json& j, const FinalReport& v) {
    j = json{{"query_id", v.query_id},
             {"model_id", v.model_id},
             {"per_dimension", v.per_dimension},
             {"narrative", v.narrative},
             {"cost", v.cost},
             {"rounds_used", v.rounds_used},
             {"stop_reason", to_string(v.stop_reason)},
             {"assumptions", v.assumptions}};
}

void from_json(const json& j, FinalReport& v) {
    j.at("query_id").get_to(v.query_id);
    j.at("model_id").get_to(v.model_id);
    j.at("per_dimension").get_to(v.per_dimension);
    j.at("narrative").get_to(v.narrative);
    j.at("cost").get_to(v.cost);
    j.at("rounds_used").get_to(v.rounds_used);
    v.stop_reason = parse_enum<StopReason>(j.at("stop_reason"), parse_stop_reason, "stop_reason");
    v.assumptions = j.value("assumptions", std::vector<std::string>{});
}

void to_json(json& j, const LoopLimits& v) {
    j = json{{"min_rounds", v.min_rounds},
             {"max_rounds", v.max_rounds},
             {"max_total_samples", v.max_total_samples},
             {"samples_per_prompt", v.samples_per_prompt}};
}

void from_json(const json& j, LoopLimits& v) {
    const LoopLimits defaults;
    v.min_rounds = j.value("min_rounds", defaults.min_rounds);
    v.max_rounds = j.value("max_rounds", defaults.max_rounds);
    v.max_total_samples = j.value("max_total_samples", defaults.max_total_samples);
    v.samples_per_prompt = j.value("samples_per_prompt", defaults.samples_per_prompt);
}

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(what + ": " + e.what());
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string render_report(const FinalReport& report) { return json(report).dump(2) + "\n"; }

}  // namespace evalagent
