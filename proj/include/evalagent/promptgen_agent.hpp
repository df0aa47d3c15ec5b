// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "evalagent/core.hpp"
#include "evalagent/llm_gateway.hpp"
#include "evalagent/prompt_templates.hpp"

namespace evalagent {

/// A benchmark's fixed prompt list for one dimension.
struct PromptLibrary {
    std::string dimension_id;
    std::vector<std::string> entries;

    /// Throws ValidationError for an empty id, no entries or an empty entry.
    void validate() const;
};

/// Loads a library file: {"dimension_id": str, "entries": [str, ...]}.
PromptLibrary load_prompt_library(const std::string& path);

struct PromptGenOptions {
    std::uint64_t seed = 0;
    // Closed-domain rounds without a library may fall back to generated prompts.
    bool allow_generated_in_closed = false;
    int max_parse_retries = 3;
    int question_retries = 1;
    double temperature = kDefaultTemperature;
};

inline constexpr int kMaxQuestionsPerPrompt = 3;

/// Designs the prompts for each round. One instance per session: it owns the
/// session's dedup ledger and the seeded draw order of every library it has
/// touched.
class PromptGenAgent {
public:
    PromptGenAgent(ChatBackend& llm, const TemplateSet& templates, PromptGenOptions options = {});

    /// Exactly proposal.prompt_count specs, none repeating a prompt text used
    /// earlier in the session. Library rounds draw sequentially from a
    /// per-session seeded shuffle of the library; generated rounds ask the LLM.
    /// Throws LibraryExhausted, StructuredOutputFailure or PreconditionError.
    std::vector<PromptSpec> design_prompts(const SubAspectProposal& proposal, QueryMode mode, int round_index,
                                           const PromptLibrary* library = nullptr);

    /// One to three VQA questions targeting `sub_aspect`.
    std::vector<VqaQuestion> design_questions(const PromptSpec& prompt, const std::string& sub_aspect);

    const std::set<std::string>& used_prompts() const { return used_; }

    /// Seeded Fisher-Yates permutation of 0..n-1 (mt19937_64, index drawn as
    /// engine() % (i + 1)).
    static std::vector<std::size_t> seeded_order(std::size_t n, std::uint64_t seed);

private:
    struct LibraryCursor {
        std::vector<std::size_t> order;
        std::size_t next = 0;
    };

    std::vector<PromptSpec> draw_from_library(const SubAspectProposal& proposal, int round_index,
                                              const PromptLibrary& library);
    std::vector<PromptSpec> generate(const SubAspectProposal& proposal, int round_index);

    ChatBackend& llm_;
    const TemplateSet& templates_;
    PromptGenOptions options_;
    std::set<std::string> used_;
    std::map<std::string, LibraryCursor> cursors_;
};

}  // namespace evalagent
