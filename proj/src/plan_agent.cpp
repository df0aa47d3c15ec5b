// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

#include "evalagent/plan_agent.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

#include <fmt/format.h>

#include "evalagent/error.hpp"

namespace evalagent {

namespace {

bool in_catalog(std::span<const ToolDescriptor> catalog, const std::string& tool_id) {
    return std::any_of(catalog.begin(), catalog.end(), [&](const auto& t) { return t.tool_id == tool_id; });
}

std::optional<ValidationIssue> check_tool(const json& j, std::span<const ToolDescriptor> catalog) {
    if (j.at("stop").get<bool>()) return std::nullopt;
    const auto tool = j.at("tool_id").get<std::string>();
    if (in_catalog(catalog, tool)) return std::nullopt;
    std::string known;
    for (const auto& t : catalog) known += (known.empty() ? "" : ", ") + t.tool_id;
    return ValidationIssue{"unknown_tool", "tool_id \"" + tool + "\" is not in the catalog; choose one of: " + known};
}

// Runs a structured completion, translating an exhausted unknown-tool
// rejection into UnknownTool.
StructuredResult complete_proposal(ChatRequest request, ChatBackend& llm, int retries, const JsonValidator& extra) {
    try {
        return complete_structured(std::move(request), llm, retries, extra);
    } catch (const StructuredOutputFailure& e) {
        if (e.code() == "unknown_tool") throw UnknownTool(e.what());
        throw;
    }
}

}  // namespace

std::string render_history(std::span<const RoundRecord> history) {
    std::string out;
    for (const auto& r : history) out += r.observation + "\n";
    return out;
}

PlanAgent::PlanAgent(ChatBackend& llm, const TemplateSet& templates, PlannerOptions options)
    : llm_(llm), templates_(templates), options_(options) {}

std::string PlanAgent::normalize_sub_aspect(std::string_view text) {
    std::string out;
    bool pending_space = false;
    for (unsigned char c : text) {
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

SubAspectProposal PlanAgent::finish(const json& value) const {
    auto p = value.get<SubAspectProposal>();
    p.repetition_warning = false;
    if (p.stop) {
        p.prompt_count = 0;
        return p;
    }
    p.stop_rationale.reset();
    const int clamped = std::clamp(p.prompt_count, kMinPromptsPerRound, kMaxPromptsPerRound);
    if (clamped != p.prompt_count) {
        p.thought += fmt::format(" [engine: prompt_count {} coerced to {}]", p.prompt_count, clamped);
        p.prompt_count = clamped;
    }
    return p;
}

SubAspectProposal PlanAgent::propose_initial(const UserQuery& query, std::span<const ToolDescriptor> catalog) {
    if (catalog.empty()) throw PreconditionError("tool catalog is empty");
    const auto rendered = templates_.render("plan_initial", {{"query", query.text},
                                                             {"mode", std::string(to_string(query.mode))},
                                                             {"catalog", render_catalog(catalog)},
                                                             {"min_prompts", std::to_string(kMinPromptsPerRound)},
                                                             {"max_prompts", std::to_string(kMaxPromptsPerRound)}});
    ChatRequest req{rendered.system, {{ChatRole::user, rendered.user}}, options_.temperature, schema::kProposal};
    JsonValidator extra = [catalog](const json& j) -> std::optional<ValidationIssue> {
        if (j.at("stop").get<bool>()) {
            return ValidationIssue{"premature_stop", "the first proposal cannot stop; propose a sub-aspect to probe"};
        }
        return check_tool(j, catalog);
    };
    return finish(complete_proposal(std::move(req), llm_, options_.max_parse_retries, extra).value);
}

SubAspectProposal PlanAgent::propose_next(const UserQuery& query, std::span<const RoundRecord> history,
                                          const LoopLimits& limits, std::span<const ToolDescriptor> catalog,
                                          int remaining_samples) {
    if (history.empty()) throw PreconditionError("propose_next needs at least one completed round");
    const int rounds_done = static_cast<int>(history.size());
    if (rounds_done >= limits.max_rounds) {
        SubAspectProposal stop;
        stop.thought = fmt::format("Round limit reached after {} rounds.", rounds_done);
        stop.stop = true;
        stop.stop_rationale = fmt::format("max_rounds ({}) reached", limits.max_rounds);
        return stop;
    }

    const auto rendered = templates_.render("plan_next", {{"query", query.text},
                                                          {"mode", std::string(to_string(query.mode))},
                                                          {"catalog", render_catalog(catalog)},
                                                          {"history", render_history(history)},
                                                          {"rounds_done", std::to_string(rounds_done)},
                                                          {"min_rounds", std::to_string(limits.min_rounds)},
                                                          {"max_rounds", std::to_string(limits.max_rounds)},
                                                          {"remaining_samples", std::to_string(remaining_samples)},
                                                          {"min_prompts", std::to_string(kMinPromptsPerRound)},
                                                          {"max_prompts", std::to_string(kMaxPromptsPerRound)}});
    const ChatRequest base{rendered.system, {{ChatRole::user, rendered.user}}, options_.temperature,
                           schema::kProposal};

    bool refused_stop = false;
    JsonValidator extra = [&](const json& j) -> std::optional<ValidationIssue> {
        if (j.at("stop").get<bool>() && rounds_done < limits.min_rounds) {
            refused_stop = true;
            return ValidationIssue{
                "premature_stop",
                fmt::format("at least {} rounds are required and only {} have run; propose another sub-aspect",
                            limits.min_rounds, rounds_done)};
        }
        return check_tool(j, catalog);
    };

    auto proposal = finish(complete_proposal(base, llm_, options_.max_parse_retries, extra).value);

    const auto& previous = history.back().proposal;
    auto repeats = [&](const SubAspectProposal& p) {
        return !p.stop && p.tool_id == previous.tool_id &&
               normalize_sub_aspect(p.sub_aspect) == normalize_sub_aspect(previous.sub_aspect);
    };
    if (repeats(proposal)) {
        ChatRequest again = base;
        again.turns.push_back(
            {ChatRole::user,
             corrective_turn_text({"repetition", "the proposal repeats the previous round's sub-aspect \"" +
                                                     previous.sub_aspect + "\" with the same tool; adjust the "
                                                     "direction based on the observations"})});
        proposal = finish(complete_proposal(std::move(again), llm_, options_.max_parse_retries, extra).value);
        if (repeats(proposal)) proposal.repetition_warning = true;
    }
    if (refused_stop) {
        proposal.thought += fmt::format(" [engine: stop before min_rounds ({}) refused]", limits.min_rounds);
    }
    return proposal;
}

SummaryResult PlanAgent::summarize(const UserQuery& query, std::span<const RoundRecord> history,
                                   const std::map<std::string, Tier>& tiers) {
    if (history.empty()) throw PreconditionError("summarize needs at least one completed round");

    std::string markers;
    for (std::size_t i = 1; i <= history.size(); ++i) markers += (i > 1 ? ", R" : "R") + std::to_string(i);
    std::string tier_text;
    for (const auto& [dim, tier] : tiers) tier_text += fmt::format("- {}: {}\n", dim, tier_label(tier));
    const bool open_ended = query.mode == QueryMode::open_ended;
    const std::string progression =
        open_ended ? fmt::format("Include a section headed \"{}\" that walks from the basic aspects probed first "
                                 "to the deeper ones probed later.\n",
                                 kProgressionHeading)
                   : std::string{};

    const auto rendered = templates_.render("plan_summarize", {{"query", query.text},
                                                               {"history", render_history(history)},
                                                               {"tiers", tier_text},
                                                               {"round_markers", markers},
                                                               {"progression_requirement", progression}});
    ChatRequest req{rendered.system, {{ChatRole::user, rendered.user}}, options_.temperature, schema::kSummary};

    const std::size_t n_rounds = history.size();
    JsonValidator extra = [n_rounds, open_ended](const json& j) -> std::optional<ValidationIssue> {
        const auto narrative = j.at("narrative").get<std::string>();
        for (std::size_t i = 1; i <= n_rounds; ++i) {
            const std::regex marker("\\bR" + std::to_string(i) + "\\b");
            if (!std::regex_search(narrative, marker)) {
                return ValidationIssue{"missing_round_marker",
                                       fmt::format("the narrative never refers to round R{}", i)};
            }
        }
        if (open_ended && narrative.find(kProgressionHeading) == std::string::npos) {
            return ValidationIssue{"missing_progression",
                                   fmt::format("the narrative lacks the \"{}\" section", kProgressionHeading)};
        }
        return std::nullopt;
    };

    const auto value = complete_structured(std::move(req), llm_, options_.max_parse_retries, extra).value;
    SummaryResult out;
    out.narrative = value.at("narrative").get<std::string>();
    for (const auto& [dim, text] : value.at("evidence").items()) out.evidence[dim] = text.get<std::string>();
    return out;
}

}  // namespace evalagent
