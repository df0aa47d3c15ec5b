// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <span>
#include <string>

#include "evalagent/core.hpp"
#include "evalagent/llm_gateway.hpp"
#include "evalagent/prompt_templates.hpp"
#include "evalagent/toolkit.hpp"

namespace evalagent {

struct PlannerOptions {
    int max_parse_retries = 3;
    double temperature = kDefaultTemperature;
};

/// Heading an open-ended summary must contain.
inline constexpr std::string_view kProgressionHeading = "Progression: basic -> deeper";

struct SummaryResult {
    std::string narrative;
    std::map<std::string, std::string> evidence;  // dimension_id -> evidence text
};

/// Drives the exploration: proposes sub-aspects round by round, decides when
/// enough has been observed, and writes the final analysis. Engine-side
/// guards bound what the LLM may decide: prompt counts are clamped to 3..9,
/// stops before min_rounds are refused, the hard max_rounds cap never
/// consults the LLM, and an immediate repeat of the previous sub-aspect with
/// the same tool is re-requested once.
class PlanAgent {
public:
    PlanAgent(ChatBackend& llm, const TemplateSet& templates, PlannerOptions options = {});

    SubAspectProposal propose_initial(const UserQuery& query, std::span<const ToolDescriptor> catalog);

    SubAspectProposal propose_next(const UserQuery& query, std::span<const RoundRecord> history,
                                   const LoopLimits& limits, std::span<const ToolDescriptor> catalog,
                                   int remaining_samples);

    SummaryResult summarize(const UserQuery& query, std::span<const RoundRecord> history,
                            const std::map<std::string, Tier>& tiers);

    /// Lowercased, whitespace-collapsed form used by the repetition guard.
    static std::string normalize_sub_aspect(std::string_view text);

private:
    SubAspectProposal finish(const json& value) const;

    ChatBackend& llm_;
    const TemplateSet& templates_;
    PlannerOptions options_;
};

/// Text block listing each round's observation, as shown to the planner.
std::string render_history(std::span<const RoundRecord> history);

}  // namespace evalagent
