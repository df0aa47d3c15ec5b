// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

#include "evalagent/toolkit.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "httplib.h"

#include "evalagent/error.hpp"
#include "evalagent/mock_scoring.hpp"

namespace evalagent {

// ---------------------------------------------------------------------------
// Descriptors
// ---------------------------------------------------------------------------

void ToolDescriptor::validate() const {
    if (tool_id.empty()) throw ValidationError("tool descriptor has empty tool_id");
    if (dimension_id.empty()) throw ValidationError("tool " + tool_id + " has empty dimension_id");
    if (description.empty()) throw ValidationError("tool " + tool_id + " has empty description");
    if (endpoint.empty()) throw ValidationError("tool " + tool_id + " has empty endpoint");
    if (!(score_range.hi > score_range.lo)) throw ValidationError("tool " + tool_id + " has an empty score_range");
    if (is_vqa() && score_kind != ScoreKind::continuous) {
        throw ValidationError("VQA tool " + tool_id + " must report continuous scores");
    }
    if (is_vqa() && requires_reference) throw ValidationError("VQA tool " + tool_id + " cannot require a reference");
    if (reference_id && !requires_reference) {
        throw ValidationError("tool " + tool_id + " names a reference but does not require one");
    }
}

void to_json(json& j, const ToolDescriptor& v) {
    j = json{{"tool_id", v.tool_id},
             {"dimension_id", v.dimension_id},
             {"modality", to_string(v.modality)},
             {"score_kind", to_string(v.score_kind)},
             {"description", v.description},
             {"requires_reference", v.requires_reference},
             {"endpoint", v.endpoint}};
    if (!v.score_range.is_unit()) j["score_range"] = json::array({v.score_range.lo, v.score_range.hi});
    if (v.reference_id) j["reference_id"] = *v.reference_id;
}

void from_json(const json& j, ToolDescriptor& v) {
    j.at("tool_id").get_to(v.tool_id);
    j.at("dimension_id").get_to(v.dimension_id);
    const auto modality = j.at("modality").get<std::string>();
    const auto kind = j.at("score_kind").get<std::string>();
    auto m = parse_modality(modality);
    auto k = parse_score_kind(kind);
    if (!m) throw json::other_error::create(599, "invalid modality '" + modality + "'", &j);
    if (!k) throw json::other_error::create(599, "invalid score_kind '" + kind + "'", &j);
    v.modality = *m;
    v.score_kind = *k;
    j.at("description").get_to(v.description);
    v.requires_reference = j.value("requires_reference", false);
    v.endpoint = j.value("endpoint", std::string{});
    v.score_range = ScoreRange{};
    if (auto it = j.find("score_range"); it != j.end()) {
        if (!it->is_array() || it->size() != 2) throw json::other_error::create(599, "score_range must be [lo, hi]", &j);
        v.score_range = ScoreRange{(*it)[0].get<double>(), (*it)[1].get<double>()};
    }
    if (auto it = j.find("reference_id"); it != j.end() && !it->is_null()) {
        v.reference_id = it->get<std::string>();
    } else {
        v.reference_id.reset();
    }
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

const ToolDescriptor& ToolRegistry::register_tool(ToolDescriptor descriptor) {
    descriptor.validate();
    if (tools_.count(descriptor.tool_id)) throw DuplicateToolId(descriptor.tool_id);
    if (descriptor.reference_id && !references_.count(*descriptor.reference_id)) {
        throw ValidationError("tool " + descriptor.tool_id + " names unregistered reference " + *descriptor.reference_id);
    }
    auto [it, inserted] = tools_.emplace(descriptor.tool_id, std::move(descriptor));
    return it->second;
}

void ToolRegistry::register_reference(ReferenceDataset dataset) {
    if (dataset.id.empty()) throw ValidationError("reference dataset has empty id");
    const bool is_url = dataset.uri.rfind("http://", 0) == 0 || dataset.uri.rfind("https://", 0) == 0;
    if (!is_url && !std::filesystem::exists(dataset.uri)) {
        throw ValidationError("reference dataset " + dataset.id + " is not resolvable: " + dataset.uri);
    }
    if (references_.count(dataset.id)) throw ValidationError("duplicate reference dataset " + dataset.id);
    references_.emplace(dataset.id, std::move(dataset));
}

const ToolDescriptor* ToolRegistry::find(const std::string& tool_id) const {
    auto it = tools_.find(tool_id);
    return it == tools_.end() ? nullptr : &it->second;
}

const ToolDescriptor& ToolRegistry::at(const std::string& tool_id) const {
    if (const auto* d = find(tool_id)) return *d;
    throw UnknownTool(tool_id);
}

const ReferenceDataset* ToolRegistry::reference(const std::string& id) const {
    auto it = references_.find(id);
    return it == references_.end() ? nullptr : &it->second;
}

std::vector<ToolDescriptor> ToolRegistry::catalog() const {
    std::vector<ToolDescriptor> out;
    out.reserve(tools_.size());
    for (const auto& [id, d] : tools_) out.push_back(d);
    return out;
}

std::string render_catalog(std::span<const ToolDescriptor> catalog) {
    std::string out;
    for (const auto& t : catalog) {
        out += fmt::format("- {} (dimension: {}, {} scores): {}\n", t.tool_id, t.dimension_id, to_string(t.score_kind),
                           t.description);
    }
    return out;
}

ToolDescriptor fetch_remote_descriptor(const std::string& endpoint) {
    httplib::Client client(endpoint);
    client.set_connection_timeout(std::chrono::seconds(10));
    auto res = client.Get("/descriptor");
    if (!res) throw ToolUnreachable(endpoint + ": " + httplib::to_string(res.error()));
    if (res->status != 200) throw ToolUnreachable(fmt::format("{}: HTTP {}", endpoint, res->status));
    try {
        auto d = json::parse(res->body).get<ToolDescriptor>();
        d.endpoint = endpoint;
        d.validate();
        return d;
    } catch (const json::exception& e) {
        throw ProtocolViolation(endpoint + "/descriptor: " + e.what());
    } catch (const ValidationError& e) {
        throw ProtocolViolation(endpoint + "/descriptor: " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Wire protocol
// ---------------------------------------------------------------------------

namespace {

const PromptSpec& prompt_for(const GeneratedSample& s, std::span<const PromptSpec> prompts) {
    for (const auto& p : prompts) {
        if (p.id == s.prompt_id) return p;
    }
    throw PreconditionError("sample " + s.id + " references unknown prompt " + s.prompt_id);
}

void require_samples(std::span<const GeneratedSample> samples) {
    if (samples.empty()) throw PreconditionError("no samples to evaluate");
}

}  // namespace

json make_evaluate_request(const ToolDescriptor& tool, std::span<const GeneratedSample> samples,
                           std::span<const PromptSpec> prompts) {
    json items = json::array();
    for (const auto& s : samples) {
        items.push_back({{"sample_id", s.id}, {"uri", s.uri}, {"prompt_text", prompt_for(s, prompts).text}});
    }
    json body = {{"tool_id", tool.tool_id}, {"items", std::move(items)}};
    if (tool.requires_reference && tool.reference_id) body["reference_id"] = *tool.reference_id;
    return body;
}

ToolResult parse_evaluate_response(const ToolDescriptor& tool, std::span<const GeneratedSample> samples,
                                   const json& reply) {
    auto violation = [&](const std::string& msg) { return ProtocolViolation(tool.tool_id + ": " + msg); };
    if (!reply.is_object()) throw violation("reply is not a JSON object");
    const auto scores_it = reply.find("scores");
    const auto failures_it = reply.find("failures");
    if (scores_it == reply.end() || !scores_it->is_array()) throw violation("reply lacks a \"scores\" array");
    if (failures_it != reply.end() && !failures_it->is_array()) throw violation("\"failures\" is not an array");

    std::map<std::string, std::variant<ToolScore, ToolFailure>> by_sample;
    std::set<std::string> known;
    for (const auto& s : samples) known.insert(s.id);

    auto claim = [&](const std::string& id) {
        if (!known.count(id)) throw violation("reply names unknown sample " + id);
        if (by_sample.count(id)) throw violation("sample " + id + " reported more than once");
    };

    for (const auto& entry : *scores_it) {
        if (!entry.is_object() || !entry.contains("sample_id") || !entry["sample_id"].is_string()) {
            throw violation("score entry without a sample_id");
        }
        const auto id = entry["sample_id"].get<std::string>();
        claim(id);
        const auto value_it = entry.find("value");
        if (value_it == entry.end() || !value_it->is_number()) throw violation("sample " + id + " has no numeric value");
        double value = value_it->get<double>();
        if (!tool.score_range.is_unit()) {
            value = (value - tool.score_range.lo) / (tool.score_range.hi - tool.score_range.lo);
        }
        if (!std::isfinite(value) || value < 0.0 || value > 1.0) {
            throw violation(fmt::format("sample {} score {} outside [0,1]", id, value_it->get<double>()));
        }
        if (tool.score_kind == ScoreKind::binary && value != 0.0 && value != 1.0) {
            throw violation(fmt::format("sample {} binary score {} not in {{0,1}}", id, value));
        }
        ToolScore score{id, tool.tool_id, value, tool.score_kind, std::nullopt};
        if (auto d = entry.find("detail"); d != entry.end() && !d->is_null()) {
            if (!d->is_string()) throw violation("sample " + id + " detail is not a string");
            score.detail = d->get<std::string>();
        }
        by_sample.emplace(id, std::move(score));
    }
    if (failures_it != reply.end()) {
        for (const auto& entry : *failures_it) {
            if (!entry.is_object() || !entry.contains("sample_id") || !entry["sample_id"].is_string() ||
                !entry.contains("reason") || !entry["reason"].is_string()) {
                throw violation("malformed failure entry");
            }
            const auto id = entry["sample_id"].get<std::string>();
            claim(id);
            by_sample.emplace(id, ToolFailure{id, entry["reason"].get<std::string>()});
        }
    }

    ToolResult result{tool.tool_id, {}, {}};
    for (const auto& s : samples) {
        auto it = by_sample.find(s.id);
        if (it == by_sample.end()) throw violation("reply does not cover sample " + s.id);
        if (auto* score = std::get_if<ToolScore>(&it->second)) {
            result.scores.push_back(*score);
        } else {
            result.failures.push_back(std::get<ToolFailure>(it->second));
        }
    }
    return result;
}

json make_evaluate_response(const ToolResult& result) {
    json scores = json::array();
    for (const auto& s : result.scores) {
        json entry{{"sample_id", s.sample_id}, {"value", s.value}};
        if (s.detail) entry["detail"] = *s.detail;
        scores.push_back(std::move(entry));
    }
    json failures = json::array();
    for (const auto& f : result.failures) failures.push_back({{"sample_id", f.sample_id}, {"reason", f.reason}});
    return {{"scores", std::move(scores)}, {"failures", std::move(failures)}};
}

std::variant<ToolScore, ToolFailure> score_mock_artifact(const ToolDescriptor& tool, const std::string& sample_id,
                                                         const std::string& artifact_bytes) {
    const auto artifact = mock::parse_artifact(artifact_bytes);
    if (!artifact) return ToolFailure{sample_id, "not a mock artifact"};
    auto it = artifact->profile.find(tool.dimension_id);
    if (it == artifact->profile.end()) return ToolFailure{sample_id, "no mock profile for dimension " + tool.dimension_id};
    const double value = tool.score_kind == ScoreKind::binary
                             ? mock::binary_score(artifact_bytes, tool.tool_id, it->second)
                             : mock::continuous_score(artifact_bytes, tool.tool_id, it->second);
    return ToolScore{sample_id, tool.tool_id, value, tool.score_kind, std::nullopt};
}

double map_vqa_answer(const json& answer, AnswerForm form) {
    if (form == AnswerForm::yes_no) {
        const auto a = answer.get<std::string>();
        if (a == "yes") return 1.0;
        if (a == "no") return 0.0;
        throw PreconditionError("yes_no answer must be \"yes\" or \"no\"");
    }
    const int k = answer.get<int>();
    if (k < 1 || k > 5) throw PreconditionError("scale answer outside 1..5");
    return (k - 1) / 4.0;
}

// ---------------------------------------------------------------------------
// Toolkit
// ---------------------------------------------------------------------------

Toolkit::Toolkit(const ToolRegistry& registry, std::filesystem::path workspace)
    : registry_(registry), workspace_(std::move(workspace)) {}

ToolResult Toolkit::evaluate(const std::string& tool_id, std::span<const GeneratedSample> samples,
                             std::span<const PromptSpec> prompts) const {
    const auto& tool = registry_.at(tool_id);
    require_samples(samples);
    for (const auto& s : samples) prompt_for(s, prompts);

    if (tool.is_vqa()) throw PreconditionError("tool " + tool_id + " is a VQA tool; use evaluate_vqa");

    if (tool.is_mock()) {
        if (tool.requires_reference) {
            throw ToolUnreachable("reference-based tool " + tool_id + " has no built-in implementation");
        }
        ToolResult result{tool.tool_id, {}, {}};
        for (const auto& s : samples) {
            std::filesystem::path path(s.uri);
            if (path.is_relative()) path = workspace_ / path;
            std::ifstream in(path, std::ios::binary);
            if (!in) {
                result.failures.push_back({s.id, "artifact not found: " + s.uri});
                continue;
            }
            std::ostringstream buf;
            buf << in.rdbuf();
            auto scored = score_mock_artifact(tool, s.id, buf.str());
            if (auto* score = std::get_if<ToolScore>(&scored)) {
                result.scores.push_back(std::move(*score));
            } else {
                result.failures.push_back(std::get<ToolFailure>(std::move(scored)));
            }
        }
        return result;
    }

    const auto body = make_evaluate_request(tool, samples, prompts).dump();
    httplib::Client client(tool.endpoint);
    client.set_connection_timeout(std::chrono::seconds(10));
    client.set_read_timeout(std::chrono::seconds(600));
    auto res = client.Post("/evaluate", body, "application/json");
    if (!res) throw ToolUnreachable(tool.endpoint + ": " + httplib::to_string(res.error()));
    if (res->status != 200) throw ToolUnreachable(fmt::format("{}: HTTP {}", tool.endpoint, res->status));
    json reply;
    try {
        reply = json::parse(res->body);
    } catch (const json::parse_error& e) {
        throw ProtocolViolation(tool_id + ": reply is not JSON: " + e.what());
    }
    return parse_evaluate_response(tool, samples, reply);
}

ToolResult Toolkit::evaluate_vqa(const std::string& tool_id, std::span<const GeneratedSample> samples,
                                 std::span<const PromptSpec> prompts, ChatBackend& vlm, const TemplateSet& templates,
                                 const VqaOptions& options) const {
    const auto& tool = registry_.at(tool_id);
    if (!tool.is_vqa()) throw PreconditionError("tool " + tool_id + " is not a VQA tool");
    require_samples(samples);
    for (const auto& p : prompts) {
        if (p.questions.empty()) throw PreconditionError("prompt " + p.id + " carries no VQA questions");
    }

    ToolResult result{tool.tool_id, {}, {}};
    for (const auto& s : samples) {
        const auto& prompt = prompt_for(s, prompts);
        double sum = 0.0;
        std::string detail;
        std::optional<std::string> failure;
        for (std::size_t qi = 0; qi < prompt.questions.size(); ++qi) {
            const auto& q = prompt.questions[qi];
            const auto rendered = templates.render(
                "vqa_answer", {{"uri", s.uri},
                               {"prompt", prompt.text},
                               {"question", q.text},
                               {"expected_form", std::string(to_string(q.expected_form))}});
            ChatRequest req{rendered.system, {{ChatRole::user, rendered.user}}, options.temperature,
                            schema::kVqaAnswer};
            const auto form = q.expected_form;
            JsonValidator form_check = [form](const json& j) -> std::optional<ValidationIssue> {
                const auto& a = j.at("answer");
                if (form == AnswerForm::yes_no && !a.is_string()) {
                    return ValidationIssue{"schema", "this question expects \"yes\" or \"no\""};
                }
                if (form == AnswerForm::scale_1_5 && !a.is_number_integer()) {
                    return ValidationIssue{"schema", "this question expects an integer from 1 to 5"};
                }
                return std::nullopt;
            };
            try {
                const auto parsed = complete_structured(std::move(req), vlm, options.max_parse_retries, form_check);
                const auto& answer = parsed.value.at("answer");
                sum += map_vqa_answer(answer, form);
                if (!detail.empty()) detail += "; ";
                detail += fmt::format("Q{}={}", qi + 1, answer.is_string() ? answer.get<std::string>() : answer.dump());
            } catch (const StructuredOutputFailure& e) {
                failure = fmt::format("question {} unanswered: {}", qi + 1, e.what());
                break;
            }
        }
        if (failure) {
            result.failures.push_back({s.id, *failure});
        } else {
            result.scores.push_back(
                {s.id, tool.tool_id, sum / static_cast<double>(prompt.questions.size()), ScoreKind::continuous, detail});
        }
    }
    return result;
}

}  // namespace evalagent
