// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

// The session controller: propose -> design prompts -> generate -> evaluate ->
// tier -> observe, until the planner stops, max_rounds is hit, or the next
// round would exceed the sample budget.
//
// Trace format (one JSON object per line, canonical key order):
//
//   {"type":"header", "format":"evalagent-trace v1", query, model, limits, seed, scales, cost_clock, assumptions}
//   {"type":"round",  "round": RoundRecord, "cost": RoundCost}          one per round
//   {"type":"summary","narrative", "evidence", "stop_reason"}
//   {"type":"report", "report": FinalReport}
//
// An aborted session ends with {"type":"error", "round", "message"} instead.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "evalagent/core.hpp"
#include "evalagent/plan_agent.hpp"
#include "evalagent/promptgen_agent.hpp"
#include "evalagent/sampler.hpp"
#include "evalagent/tiering.hpp"
#include "evalagent/toolkit.hpp"

namespace evalagent {

inline constexpr std::string_view kTraceFormat = "evalagent-trace v1";

/// How per-round time is charged to the cost ledger: the summed generation
/// latency of the round's samples (reproducible), or measured wall time.
enum class CostClock { sample_latency, wall };
std::string_view to_string(CostClock c) noexcept;
std::optional<CostClock> parse_cost_clock(std::string_view s);

/// Everything one session needs. Planner and prompt generator are
/// per-session; the rest may be shared read-only between sessions.
struct SessionDeps {
    PlanAgent& planner;
    PromptGenAgent& promptgen;
    const Sampler& sampler;
    const Toolkit& toolkit;
    const std::map<std::string, TierScale>& scales;        // by dimension_id
    const std::map<std::string, PromptLibrary>& libraries;  // by dimension_id
    const TemplateSet& templates;
    ChatBackend* vlm = nullptr;  // required when a VQA tool is probed
    VqaOptions vqa{};
    CostClock clock = CostClock::sample_latency;
};

struct SessionOutcome {
    EvaluationSession session;
    FinalReport report;
    std::vector<std::string> trace;
};

/// Methodology notes written into every trace header and report.
const std::vector<std::string>& report_assumptions();

/// Runs one session. Trace lines are appended to `trace_out` (when given) as
/// they are produced; a failing session flushes an error line and rethrows.
SessionOutcome run_session(const UserQuery& query, const ModelDescriptor& model, const LoopLimits& limits,
                           SessionDeps deps, std::uint64_t seed, std::ostream* trace_out = nullptr);

/// Deterministic observation text for a completed round.
std::string build_observation(const RoundRecord& round);

/// Per-dimension evidence: the planner's statement followed by the measured
/// statistics of every round on that dimension.
std::string compose_evidence(const std::string& planner_text, const std::string& dimension_id, Tier tier,
                             std::span<const RoundRecord> rounds);

/// Rebuilds the FinalReport from a trace by re-deriving round tiers,
/// per-dimension tiers and costs. When the trace carries a report line, the
/// rebuilt report must equal it. Throws ValidationError.
FinalReport replay_trace(std::span<const std::string> lines);

std::vector<std::string> read_trace_file(const std::filesystem::path& path);

/// <workspace>/<query id>-s<seed>
std::filesystem::path session_directory(const std::filesystem::path& workspace, const std::string& query_id,
                                        std::uint64_t seed);

}  // namespace evalagent
