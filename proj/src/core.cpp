// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

#include "evalagent/core.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "evalagent/error.hpp"

namespace evalagent {

namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(std::string_view s, const std::array<std::pair<std::string_view, Enum>, N>& table) {
    for (const auto& [name, value] : table) {
        if (name == s) return value;
    }
    return std::nullopt;
}

constexpr std::array<std::pair<std::string_view, QueryMode>, 2> kQueryModes{{
    {"closed_domain", QueryMode::closed_domain},
    {"open_ended", QueryMode::open_ended},
}};
constexpr std::array<std::pair<std::string_view, Modality>, 2> kModalities{{
    {"text_to_image", Modality::text_to_image},
    {"text_to_video", Modality::text_to_video},
}};
constexpr std::array<std::pair<std::string_view, ScoreKind>, 2> kScoreKinds{{
    {"continuous", ScoreKind::continuous},
    {"binary", ScoreKind::binary},
}};
constexpr std::array<std::pair<std::string_view, PromptSource>, 2> kPromptSources{{
    {"generated", PromptSource::generated},
    {"library", PromptSource::library},
}};
constexpr std::array<std::pair<std::string_view, AnswerForm>, 2> kAnswerForms{{
    {"yes_no", AnswerForm::yes_no},
    {"scale_1_5", AnswerForm::scale_1_5},
}};
constexpr std::array<std::pair<std::string_view, StopReason>, 3> kStopReasons{{
    {"planner_stop", StopReason::planner_stop},
    {"max_rounds", StopReason::max_rounds},
    {"sample_budget", StopReason::sample_budget},
}};

template <typename Enum, std::size_t N>
std::string_view name_of(Enum e, const std::array<std::pair<std::string_view, Enum>, N>& table) noexcept {
    for (const auto& [name, value] : table) {
        if (value == e) return name;
    }
    return "?";
}

}  // namespace

Tier tier_from_level(int lvl) {
    if (lvl < 1 || lvl > 5) throw PreconditionError(fmt::format("tier level {} outside 1..5", lvl));
    return static_cast<Tier>(lvl);
}

std::string_view tier_id(Tier t) noexcept {
    switch (t) {
        case Tier::VeryLow: return "VeryLow";
        case Tier::Low: return "Low";
        case Tier::Moderate: return "Moderate";
        case Tier::High: return "High";
        case Tier::VeryHigh: return "VeryHigh";
    }
    return "?";
}

std::string_view tier_label(Tier t) noexcept {
    switch (t) {
        case Tier::VeryLow: return "Very Low";
        case Tier::Low: return "Low";
        case Tier::Moderate: return "Moderate";
        case Tier::High: return "High";
        case Tier::VeryHigh: return "Very High";
    }
    return "?";
}

std::optional<Tier> parse_tier(std::string_view text) {
    for (int l = 1; l <= 5; ++l) {
        const auto t = static_cast<Tier>(l);
        if (text == tier_id(t) || text == tier_label(t)) return t;
    }
    return std::nullopt;
}

std::string_view to_string(QueryMode m) noexcept { return name_of(m, kQueryModes); }
std::string_view to_string(Modality m) noexcept { return name_of(m, kModalities); }
std::string_view to_string(ScoreKind k) noexcept { return name_of(k, kScoreKinds); }
std::string_view to_string(PromptSource s) noexcept { return name_of(s, kPromptSources); }
std::string_view to_string(AnswerForm f) noexcept { return name_of(f, kAnswerForms); }
std::string_view to_string(StopReason r) noexcept { return name_of(r, kStopReasons); }

std::optional<QueryMode> parse_query_mode(std::string_view s) { return lookup(s, kQueryModes); }
std::optional<Modality> parse_modality(std::string_view s) { return lookup(s, kModalities); }
std::optional<ScoreKind> parse_score_kind(std::string_view s) { return lookup(s, kScoreKinds); }
std::optional<PromptSource> parse_prompt_source(std::string_view s) { return lookup(s, kPromptSources); }
std::optional<AnswerForm> parse_answer_form(std::string_view s) { return lookup(s, kAnswerForms); }
std::optional<StopReason> parse_stop_reason(std::string_view s) { return lookup(s, kStopReasons); }

const std::vector<std::string>& query_tag_vocabulary() {
    static const std::vector<std::string> vocab = {
        // Ability
        "Prompt Following", "Visual Quality", "Creativity", "Knowledge", "Others",
        // General/Specific
        "General", "Specific Domain",
        // Specific Domain
        "Law", "Film and Entertainment", "Fashion", "Game Design",
        "Architecture and Interior Design", "Medical", "Science and Education",
        "History and Culture",
    };
    return vocab;
}

bool is_known_query_tag(std::string_view tag) {
    const auto& v = query_tag_vocabulary();
    return std::find(v.begin(), v.end(), tag) != v.end();
}

void CostLedger::add_round(RoundCost cost) {
    per_round.push_back(cost);
    total_samples += cost.samples;
    wall_clock += cost.seconds;
}

void LoopLimits::validate() const {
    if (min_rounds < 1) throw ValidationError(fmt::format("min_rounds must be >= 1, got {}", min_rounds));
    if (max_rounds < min_rounds)
        throw ValidationError(fmt::format("max_rounds ({}) < min_rounds ({})", max_rounds, min_rounds));
    if (max_total_samples < kMaxPromptsPerRound)
        throw ValidationError(fmt::format("max_total_samples must be >= 9, got {}", max_total_samples));
    if (samples_per_prompt < 1)
        throw ValidationError(fmt::format("samples_per_prompt must be >= 1, got {}", samples_per_prompt));
}

// ---------------------------------------------------------------------------
// Session consistency checks
// ---------------------------------------------------------------------------

namespace {

void check_proposal(const SubAspectProposal& p, const std::string& where, std::vector<std::string>& out) {
    if (p.thought.empty()) out.push_back(where + ": empty thought");
    if (!p.stop && (p.prompt_count < kMinPromptsPerRound || p.prompt_count > kMaxPromptsPerRound)) {
        out.push_back(fmt::format("{}: prompt_count out of 3..9 ({})", where, p.prompt_count));
    }
    if (p.stop && (!p.stop_rationale || p.stop_rationale->empty())) {
        out.push_back(where + ": stop without stop_rationale");
    }
}

void check_prompt(const PromptSpec& p, const std::string& where, std::vector<std::string>& out) {
    if (p.rationale.empty()) out.push_back(fmt::format("{}: prompt {} has empty rationale", where, p.id));
    const bool is_library = p.source == PromptSource::library;
    if (is_library != p.library_ref.has_value()) {
        out.push_back(fmt::format("{}: prompt {} library_ref must be present iff source=library", where, p.id));
    }
    for (const auto& q : p.questions) {
        if (q.text.empty() || q.text.back() != '?') {
            out.push_back(fmt::format("{}: prompt {} question does not end with '?'", where, p.id));
        }
    }
}

void check_score(const ToolScore& s, const std::string& where, std::vector<std::string>& out) {
    if (s.kind == ScoreKind::binary && s.value != 0.0 && s.value != 1.0) {
        out.push_back(fmt::format("{}: binary score for {} not in {{0,1}}", where, s.sample_id));
    }
    if (!(s.value >= 0.0 && s.value <= 1.0)) {
        out.push_back(fmt::format("{}: score for {} outside [0,1]", where, s.sample_id));
    }
}

}  // namespace

std::vector<std::string> validate_session_artifacts(const EvaluationSession& session) {
    std::vector<std::string> out;

    const auto& q = session.query;
    if (q.text.empty()) out.push_back("query: empty text");
    if (q.target_models.empty()) out.push_back("query: no target models");
    for (const auto& tag : q.tags) {
        if (!is_known_query_tag(tag)) out.push_back("query: unknown tag '" + tag + "'");
    }

    const auto& m = session.model;
    if (m.is_mock() != m.mock_profile.has_value()) {
        out.push_back("model: mock_profile must be present iff endpoint is \"mock\"");
    }

    try {
        session.limits.validate();
    } catch (const ValidationError& e) {
        out.push_back(std::string("limits: ") + e.what());
    }

    for (std::size_t i = 0; i < session.rounds.size(); ++i) {
        const auto& r = session.rounds[i];
        const std::string where = fmt::format("round {}", r.index);
        if (r.index != static_cast<int>(i) + 1) {
            out.push_back(fmt::format("{}: index out of sequence (expected {})", where, i + 1));
        }
        check_proposal(r.proposal, where, out);

        std::set<std::string> prompt_ids;
        for (const auto& p : r.prompts) {
            check_prompt(p, where, out);
            prompt_ids.insert(p.id);
        }

        const auto expected = r.prompts.size() * static_cast<std::size_t>(std::max(1, session.limits.samples_per_prompt));
        if (r.samples.size() != expected) {
            out.push_back(fmt::format("{}: {} samples for {} prompts x {} samples_per_prompt", where,
                                      r.samples.size(), r.prompts.size(), session.limits.samples_per_prompt));
        }

        std::set<std::string> sample_ids;
        for (const auto& s : r.samples) {
            sample_ids.insert(s.id);
            if (!prompt_ids.count(s.prompt_id)) out.push_back(where + ": dangling prompt reference");
            if (s.latency < 0.0) out.push_back(where + ": negative latency for " + s.id);
            if (s.uri.empty()) out.push_back(where + ": empty uri for " + s.id);
        }
        for (const auto& s : r.scores) {
            if (!sample_ids.count(s.sample_id)) out.push_back(where + ": dangling sample reference");
            check_score(s, where, out);
        }
        for (const auto& f : r.failures) {
            if (!sample_ids.count(f.sample_id)) out.push_back(where + ": dangling sample reference");
        }
    }

    if (session.report) {
        const auto& rep = *session.report;
        if (rep.per_dimension.empty()) out.push_back("report: per_dimension is empty");
        if (rep.rounds_used > session.limits.max_rounds) out.push_back("report: rounds_used exceeds max_rounds");
        if (rep.rounds_used != static_cast<int>(session.rounds.size())) {
            out.push_back("report: rounds_used does not match recorded rounds");
        }
        int sum = 0;
        for (const auto& c : rep.cost.per_round) {
            sum += c.samples;
            if (c.samples < 0 || c.seconds < 0.0) out.push_back("report: negative cost entry");
        }
        if (sum != rep.cost.total_samples) out.push_back("report: total_samples != sum of per-round samples");
        if (rep.query_id != q.id) out.push_back("report: query_id does not match session query");
    }
    return out;
}

}  // namespace evalagent
