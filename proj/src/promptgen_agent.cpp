// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

#include "evalagent/promptgen_agent.hpp"

#include <random>

#include <fmt/format.h>

#include "evalagent/error.hpp"
#include "evalagent/json_codec.hpp"
#include "evalagent/mock_scoring.hpp"

namespace evalagent {

void PromptLibrary::validate() const {
    if (dimension_id.empty()) throw ValidationError("prompt library has empty dimension_id");
    if (entries.empty()) throw ValidationError("prompt library " + dimension_id + " has no entries");
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].empty()) throw ValidationError(fmt::format("prompt library {} entry {} is empty", dimension_id, i));
    }
}

PromptLibrary load_prompt_library(const std::string& path) {
    const auto j = read_json_file(path);
    PromptLibrary lib;
    try {
        j.at("dimension_id").get_to(lib.dimension_id);
        j.at("entries").get_to(lib.entries);
    } catch (const json::exception& e) {
        throw ValidationError(path + ": " + e.what());
    }
    lib.validate();
    return lib;
}

PromptGenAgent::PromptGenAgent(ChatBackend& llm, const TemplateSet& templates, PromptGenOptions options)
    : llm_(llm), templates_(templates), options_(options) {}

std::vector<std::size_t> PromptGenAgent::seeded_order(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::mt19937_64 engine(seed);
    for (std::size_t i = n; i > 1; --i) {
        const auto j = static_cast<std::size_t>(engine() % i);
        std::swap(order[i - 1], order[j]);
    }
    return order;
}

std::vector<PromptSpec> PromptGenAgent::design_prompts(const SubAspectProposal& proposal, QueryMode mode,
                                                       int round_index, const PromptLibrary* library) {
    if (proposal.stop) throw PreconditionError("cannot design prompts for a stop proposal");
    if (proposal.prompt_count < kMinPromptsPerRound || proposal.prompt_count > kMaxPromptsPerRound) {
        throw PreconditionError(fmt::format("prompt_count {} outside 3..9", proposal.prompt_count));
    }
    if (mode == QueryMode::closed_domain) {
        if (library) return draw_from_library(proposal, round_index, *library);
        if (!options_.allow_generated_in_closed) {
            throw PreconditionError("no prompt library for tool " + proposal.tool_id +
                                    " and generated prompts are disabled in closed-domain mode");
        }
    }
    return generate(proposal, round_index);
}

std::vector<PromptSpec> PromptGenAgent::draw_from_library(const SubAspectProposal& proposal, int round_index,
                                                          const PromptLibrary& library) {
    auto [it, inserted] = cursors_.try_emplace(library.dimension_id);
    auto& cursor = it->second;
    if (inserted) {
        const auto seed = mock::splitmix64(options_.seed ^ mock::fnv1a64(library.dimension_id));
        cursor.order = seeded_order(library.entries.size(), seed);
    }

    const auto count = static_cast<std::size_t>(proposal.prompt_count);
    std::size_t unused = 0;
    for (std::size_t k = cursor.next; k < cursor.order.size(); ++k) {
        if (!used_.count(library.entries[cursor.order[k]])) ++unused;
    }
    if (unused < count) {
        throw LibraryExhausted(fmt::format("library {} has {} unused entries, {} requested", library.dimension_id,
                                           unused, count));
    }

    std::vector<PromptSpec> specs;
    while (specs.size() < count) {
        const auto index = cursor.order[cursor.next++];
        const auto& text = library.entries[index];
        if (!used_.insert(text).second) continue;
        PromptSpec spec;
        spec.id = fmt::format("r{}-p{}", round_index, specs.size() + 1);
        spec.text = text;
        spec.rationale = fmt::format("Benchmark prompt from the {} list, chosen to probe \"{}\".",
                                     library.dimension_id, proposal.sub_aspect);
        spec.source = PromptSource::library;
        spec.library_ref = fmt::format("{}#{}", library.dimension_id, index);
        specs.push_back(std::move(spec));
    }
    return specs;
}

std::vector<PromptSpec> PromptGenAgent::generate(const SubAspectProposal& proposal, int round_index) {
    std::string used_text;
    for (const auto& u : used_) used_text += "- " + u + "\n";
    if (used_text.empty()) used_text = "(none)\n";
    const auto rendered = templates_.render("promptgen_design", {{"sub_aspect", proposal.sub_aspect},
                                                                 {"thought", proposal.thought},
                                                                 {"count", std::to_string(proposal.prompt_count)},
                                                                 {"used_prompts", used_text}});
    ChatRequest req{rendered.system, {{ChatRole::user, rendered.user}}, options_.temperature, schema::kPrompts};

    const auto count = static_cast<std::size_t>(proposal.prompt_count);
    JsonValidator extra = [this, count](const json& j) -> std::optional<ValidationIssue> {
        const auto& prompts = j.at("prompts");
        if (prompts.size() != count) {
            return ValidationIssue{"count", fmt::format("expected exactly {} prompts, got {}", count, prompts.size())};
        }
        std::set<std::string> seen;
        for (const auto& p : prompts) {
            const auto text = p.at("text").get<std::string>();
            if (used_.count(text) || !seen.insert(text).second) {
                return ValidationIssue{"duplicate_prompt", "prompt \"" + text + "\" was already used"};
            }
        }
        return std::nullopt;
    };
    const auto value = complete_structured(std::move(req), llm_, options_.max_parse_retries, extra).value;

    std::vector<PromptSpec> specs;
    for (const auto& p : value.at("prompts")) {
        PromptSpec spec;
        spec.id = fmt::format("r{}-p{}", round_index, specs.size() + 1);
        spec.text = p.at("text").get<std::string>();
        spec.rationale = p.at("rationale").get<std::string>();
        spec.source = PromptSource::generated;
        used_.insert(spec.text);
        specs.push_back(std::move(spec));
    }
    return specs;
}

std::vector<VqaQuestion> PromptGenAgent::design_questions(const PromptSpec& prompt, const std::string& sub_aspect) {
    if (sub_aspect.empty()) throw PreconditionError("design_questions needs a non-empty sub_aspect");
    const auto rendered = templates_.render("promptgen_questions", {{"prompt", prompt.text}, {"sub_aspect", sub_aspect}});
    ChatRequest req{rendered.system, {{ChatRole::user, rendered.user}}, options_.temperature, schema::kQuestions};
    const auto value = complete_structured(std::move(req), llm_, options_.question_retries).value;
    return value.at("questions").get<std::vector<VqaQuestion>>();
}

}  // namespace evalagent
