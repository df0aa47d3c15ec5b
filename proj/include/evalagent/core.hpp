// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace evalagent {

// ---------------------------------------------------------------------------
// Enumerations
// ---------------------------------------------------------------------------

enum class QueryMode { closed_domain, open_ended };
enum class Modality { text_to_image, text_to_video };
enum class ScoreKind { continuous, binary };
enum class PromptSource { generated, library };
enum class AnswerForm { yes_no, scale_1_5 };

/// Five ordered performance bands. The numeric value is the tier level.
enum class Tier : int { VeryLow = 1, Low = 2, Moderate = 3, High = 4, VeryHigh = 5 };

constexpr int level(Tier t) noexcept { return static_cast<int>(t); }
constexpr std::strong_ordering operator<=>(Tier a, Tier b) noexcept { return level(a) <=> level(b); }

/// Throws PreconditionError outside 1..5.
Tier tier_from_level(int level);

/// "VeryHigh" style identifier used in JSON.
std::string_view tier_id(Tier t) noexcept;
/// "Very High" style label used in human-readable text.
std::string_view tier_label(Tier t) noexcept;
/// Accepts either the identifier or the label form.
std::optional<Tier> parse_tier(std::string_view text);

std::string_view to_string(QueryMode m) noexcept;
std::string_view to_string(Modality m) noexcept;
std::string_view to_string(ScoreKind k) noexcept;
std::string_view to_string(PromptSource s) noexcept;
std::string_view to_string(AnswerForm f) noexcept;

std::optional<QueryMode> parse_query_mode(std::string_view s);
std::optional<Modality> parse_modality(std::string_view s);
std::optional<ScoreKind> parse_score_kind(std::string_view s);
std::optional<PromptSource> parse_prompt_source(std::string_view s);
std::optional<AnswerForm> parse_answer_form(std::string_view s);

/// The literal endpoint value that selects the deterministic mock backends.
inline constexpr std::string_view kMockEndpoint = "mock";

inline constexpr int kMinPromptsPerRound = 3;
inline constexpr int kMaxPromptsPerRound = 9;

// ---------------------------------------------------------------------------
// Query tags (open-ended query dataset label vocabulary)
// ---------------------------------------------------------------------------

/// Known labels for the Ability, General/Specific and Specific Domain axes.
const std::vector<std::string>& query_tag_vocabulary();
bool is_known_query_tag(std::string_view tag);

// ---------------------------------------------------------------------------
// Domain records
// ---------------------------------------------------------------------------

struct UserQuery {
    std::string id;
    std::string text;
    QueryMode mode = QueryMode::closed_domain;
    std::vector<std::string> target_models;
    std::vector<std::string> tags;

    bool operator==(const UserQuery&) const = default;
};

struct ModelDescriptor {
    std::string id;
    Modality modality = Modality::text_to_image;
    std::string endpoint;
    // Ground-truth tier per dimension; present iff endpoint is "mock".
    std::optional<std::map<std::string, Tier>> mock_profile;

    bool is_mock() const { return endpoint == kMockEndpoint; }
    bool operator==(const ModelDescriptor&) const = default;
};

struct VqaQuestion {
    std::string text;
    AnswerForm expected_form = AnswerForm::yes_no;

    bool operator==(const VqaQuestion&) const = default;
};

struct PromptSpec {
    std::string id;
    std::string text;
    std::string rationale;
    PromptSource source = PromptSource::generated;
    std::optional<std::string> library_ref;
    std::vector<VqaQuestion> questions;

    bool operator==(const PromptSpec&) const = default;
};

struct GeneratedSample {
    std::string id;
    std::string prompt_id;
    std::string model_id;
    std::string uri;
    double latency = 0.0;  // seconds

    bool operator==(const GeneratedSample&) const = default;
};

struct ToolScore {
    std::string sample_id;
    std::string tool_id;
    double value = 0.0;
    ScoreKind kind = ScoreKind::continuous;
    std::optional<std::string> detail;

    bool operator==(const ToolScore&) const = default;
};

struct ToolFailure {
    std::string sample_id;
    std::string reason;

    bool operator==(const ToolFailure&) const = default;
};

struct SubAspectProposal {
    std::string thought;
    std::string sub_aspect;
    std::string tool_id;
    int prompt_count = 0;
    bool stop = false;
    std::optional<std::string> stop_rationale;
    // Set when the planner repeated the previous round after one re-request.
    bool repetition_warning = false;

    bool operator==(const SubAspectProposal&) const = default;
};

struct RoundRecord {
    int index = 0;
    SubAspectProposal proposal;
    std::string dimension_id;
    std::vector<PromptSpec> prompts;
    std::vector<GeneratedSample> samples;
    std::vector<ToolScore> scores;
    std::vector<ToolFailure> failures;
    Tier round_tier = Tier::Moderate;
    std::string observation;

    bool operator==(const RoundRecord&) const = default;
};

struct RoundCost {
    int samples = 0;
    double seconds = 0.0;

    bool operator==(const RoundCost&) const = default;
};

struct CostLedger {
    int total_samples = 0;
    double wall_clock = 0.0;  // seconds
    std::vector<RoundCost> per_round;

    void add_round(RoundCost cost);
    bool operator==(const CostLedger&) const = default;
};

struct DimensionVerdict {
    Tier tier = Tier::Moderate;
    std::string evidence;

    bool operator==(const DimensionVerdict&) const = default;
};

enum class StopReason { planner_stop, max_rounds, sample_budget };
std::string_view to_string(StopReason r) noexcept;
std::optional<StopReason> parse_stop_reason(std::string_view s);

struct FinalReport {
    std::string query_id;
    std::string model_id;
    std::map<std::string, DimensionVerdict> per_dimension;
    std::string narrative;
    CostLedger cost;
    int rounds_used = 0;
    StopReason stop_reason = StopReason::planner_stop;
    // Methodology notes carried into every report header.
    std::vector<std::string> assumptions;

    bool operator==(const FinalReport&) const = default;
};

struct LoopLimits {
    int min_rounds = 2;
    int max_rounds = 5;
    int max_total_samples = 30;
    int samples_per_prompt = 1;

    /// Throws ValidationError when the invariants do not hold.
    void validate() const;
    bool operator==(const LoopLimits&) const = default;
};

/// One user query's full lifecycle.
struct EvaluationSession {
    UserQuery query;
    ModelDescriptor model;
    LoopLimits limits;
    std::uint64_t seed = 0;
    std::vector<RoundRecord> rounds;
    std::optional<FinalReport> report;

    bool operator==(const EvaluationSession&) const = default;
};

/// Returns one description per invariant violation found anywhere in the
/// session; an empty list means the session is internally consistent.
std::vector<std::string> validate_session_artifacts(const EvaluationSession& session);

}  // namespace evalagent
