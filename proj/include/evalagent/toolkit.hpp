// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

// Evaluation toolkit: tool descriptors, the registry the planner's catalog is
// drawn from, and dispatch to mock, remote and VQA tools.
//
// Tool server wire protocol (canonical JSON, sorted keys):
//
//   GET  /descriptor  -> ToolDescriptor
//   POST /evaluate    {"tool_id", "items": [{"sample_id", "uri", "prompt_text"}], "reference_id"?}
//                  -> {"scores": [{"sample_id", "value", "detail"?}], "failures": [{"sample_id", "reason"}]}

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <variant>
#include <string>
#include <vector>

#include "evalagent/core.hpp"
#include "evalagent/json_codec.hpp"
#include "evalagent/llm_gateway.hpp"
#include "evalagent/prompt_templates.hpp"

namespace evalagent {

inline constexpr std::string_view kVqaEndpoint = "vqa";

/// Raw score range a tool reports in; values are mapped onto [0,1] with
/// (v - lo) / (hi - lo) at the protocol boundary.
struct ScoreRange {
    double lo = 0.0;
    double hi = 1.0;

    bool is_unit() const { return lo == 0.0 && hi == 1.0; }
    bool operator==(const ScoreRange&) const = default;
};

struct ToolDescriptor {
    std::string tool_id;
    std::string dimension_id;
    Modality modality = Modality::text_to_image;
    ScoreKind score_kind = ScoreKind::continuous;
    std::string description;
    bool requires_reference = false;
    std::string endpoint;  // server base URL, "mock" or "vqa"
    ScoreRange score_range;
    std::optional<std::string> reference_id;

    bool is_mock() const { return endpoint == kMockEndpoint; }
    bool is_vqa() const { return endpoint == kVqaEndpoint; }
    /// Throws ValidationError when an invariant is broken.
    void validate() const;
    bool operator==(const ToolDescriptor&) const = default;
};

void to_json(json& j, const ToolDescriptor& v);
void from_json(const json& j, ToolDescriptor& v);

/// A reference dataset used by reference-based (distribution-level) tools.
struct ReferenceDataset {
    std::string id;
    std::string uri;

    bool operator==(const ReferenceDataset&) const = default;
};

struct ToolResult {
    std::string tool_id;
    std::vector<ToolScore> scores;
    std::vector<ToolFailure> failures;
};

/// Read-mostly registry; populate it at startup, then share it read-only.
class ToolRegistry {
public:
    /// Throws DuplicateToolId or ValidationError.
    const ToolDescriptor& register_tool(ToolDescriptor descriptor);

    /// A reference is resolvable when it is an http(s) URL or an existing path.
    void register_reference(ReferenceDataset dataset);

    const ToolDescriptor* find(const std::string& tool_id) const;
    /// Throws UnknownTool.
    const ToolDescriptor& at(const std::string& tool_id) const;
    const ReferenceDataset* reference(const std::string& id) const;

    /// Every registered tool in tool_id order.
    std::vector<ToolDescriptor> catalog() const;
    bool empty() const { return tools_.empty(); }

private:
    std::map<std::string, ToolDescriptor> tools_;
    std::map<std::string, ReferenceDataset> references_;
};

/// Fetches GET <endpoint>/descriptor. Throws ToolUnreachable or ProtocolViolation.
ToolDescriptor fetch_remote_descriptor(const std::string& endpoint);

/// Renders the catalog as the text block shown to the planner.
std::string render_catalog(std::span<const ToolDescriptor> catalog);

/// POST /evaluate request body for the given samples.
json make_evaluate_request(const ToolDescriptor& tool, std::span<const GeneratedSample> samples,
                           std::span<const PromptSpec> prompts);

/// Checks and normalizes a POST /evaluate reply. Throws ProtocolViolation.
ToolResult parse_evaluate_response(const ToolDescriptor& tool, std::span<const GeneratedSample> samples,
                                   const json& reply);

/// POST /evaluate reply body for a result: both arrays always present, in
/// result order.
json make_evaluate_response(const ToolResult& result);

/// Scores the mock artifact `artifact_bytes` with mock tool `tool`. Returns
/// the failure reason when the artifact cannot be scored.
std::variant<ToolScore, ToolFailure> score_mock_artifact(const ToolDescriptor& tool, const std::string& sample_id,
                                                         const std::string& artifact_bytes);

struct VqaOptions {
    int max_parse_retries = 2;
    double temperature = kDefaultTemperature;
};

/// Maps one VQA answer onto [0,1]: yes -> 1, no -> 0, scale k -> (k-1)/4.
double map_vqa_answer(const json& answer, AnswerForm form);

class Toolkit {
public:
    /// `workspace` resolves the relative sample URIs written by the mock sampler.
    Toolkit(const ToolRegistry& registry, std::filesystem::path workspace);

    const ToolRegistry& registry() const { return registry_; }

    /// Per-sample evaluation through a mock or remote tool. Scores come back
    /// in sample order, normalized to [0,1].
    ToolResult evaluate(const std::string& tool_id, std::span<const GeneratedSample> samples,
                        std::span<const PromptSpec> prompts) const;

    /// Asks every question attached to a sample's prompt through `vlm`; the
    /// sample score is the mean of the mapped answers. A question that never
    /// yields a valid answer turns the sample into a failure entry.
    ToolResult evaluate_vqa(const std::string& tool_id, std::span<const GeneratedSample> samples,
                            std::span<const PromptSpec> prompts, ChatBackend& vlm, const TemplateSet& templates,
                            const VqaOptions& options = {}) const;

private:
    const ToolRegistry& registry_;
    std::filesystem::path workspace_;
};

}  // namespace evalagent
