// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

#include "evalagent/loop_engine.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>

#include <fmt/format.h>

#include "evalagent/error.hpp"
#include "evalagent/json_codec.hpp"

namespace evalagent {

namespace {

constexpr std::size_t kMaxDetailExcerpts = 3;
constexpr std::size_t kMaxDetailChars = 80;

class TraceWriter {
public:
    explicit TraceWriter(std::ostream* out) : out_(out) {}

    void write(const json& line) {
        lines_.push_back(line.dump());
        if (out_) {
            *out_ << lines_.back() << '\n';
            out_->flush();
        }
    }

    std::vector<std::string> take() { return std::move(lines_); }

private:
    std::ostream* out_;
    std::vector<std::string> lines_;
};

std::string stats_text(std::span<const ToolScore> scores) {
    if (scores.empty()) return "no scores";
    if (scores.front().kind == ScoreKind::binary) {
        const auto ones = std::count_if(scores.begin(), scores.end(), [](const auto& s) { return s.value >= 0.5; });
        return fmt::format("proportion {}/{} ({:.3f})", ones, scores.size(),
                           static_cast<double>(ones) / static_cast<double>(scores.size()));
    }
    double lo = scores.front().value, hi = lo, sum = 0.0;
    for (const auto& s : scores) {
        lo = std::min(lo, s.value);
        hi = std::max(hi, s.value);
        sum += s.value;
    }
    return fmt::format("mean {:.3f}, min {:.3f}, max {:.3f}", sum / static_cast<double>(scores.size()), lo, hi);
}

const TierScale& scale_for(const std::map<std::string, TierScale>& scales, const std::string& dimension_id) {
    const auto it = scales.find(dimension_id);
    if (it == scales.end()) throw PreconditionError("no tier scale for dimension " + dimension_id);
    return it->second;
}

const PromptSpec* find_prompt(std::span<const PromptSpec> prompts, const std::string& id) {
    for (const auto& p : prompts) {
        if (p.id == id) return &p;
    }
    return nullptr;
}

FinalReport assemble_report(const UserQuery& query, const ModelDescriptor& model, std::span<const RoundRecord> rounds,
                            const CostLedger& cost, StopReason stop, const SummaryResult& summary,
                            std::vector<std::string> assumptions) {
    FinalReport report;
    report.query_id = query.id;
    report.model_id = model.id;
    for (const auto& [dim, tier] : tiering::aggregate_by_dimension(rounds)) {
        const auto it = summary.evidence.find(dim);
        const std::string planner_text = it == summary.evidence.end() ? std::string{} : it->second;
        report.per_dimension[dim] = {tier, compose_evidence(planner_text, dim, tier, rounds)};
    }
    report.narrative = summary.narrative;
    report.cost = cost;
    report.rounds_used = static_cast<int>(rounds.size());
    report.stop_reason = stop;
    report.assumptions = std::move(assumptions);
    return report;
}

}  // namespace

std::string_view to_string(CostClock c) noexcept {
    return c == CostClock::wall ? "wall" : "sample_latency";
}

std::optional<CostClock> parse_cost_clock(std::string_view s) {
    if (s == "sample_latency") return CostClock::sample_latency;
    if (s == "wall") return CostClock::wall;
    return std::nullopt;
}

const std::vector<std::string>& report_assumptions() {
    static const std::vector<std::string> notes{
        "Tier cut points are equal-mass quintiles (20th/40th/60th/80th percentiles) of the reference scores; "
        "without a calibration file the cut points are 0.2/0.4/0.6/0.8.",
        "A score on a cut point takes the higher tier.",
        "A round's tier comes from the mean score (continuous tools) or the proportion of passes (binary tools).",
        "A dimension's tier is the sample-weighted mode of its round tiers; ties go to the most recent round.",
        "A VQA sample scores the mean of its answers with yes = 1, no = 0 and scale k = (k - 1) / 4.",
    };
    return notes;
}

std::string build_observation(const RoundRecord& round) {
    std::string out = fmt::format("R{} | sub-aspect: {} | tool: {} ({}) | n={} | {} | tier {}", round.index,
                                  round.proposal.sub_aspect, round.proposal.tool_id, round.dimension_id,
                                  round.samples.size(), stats_text(round.scores), tier_label(round.round_tier));
    if (!round.failures.empty()) out += fmt::format(" | {} samples unscored", round.failures.size());
    std::vector<std::string> excerpts;
    for (const auto& s : round.scores) {
        if (excerpts.size() == kMaxDetailExcerpts) break;
        if (!s.detail || s.detail->empty()) continue;
        auto text = *s.detail;
        if (text.size() > kMaxDetailChars) text = text.substr(0, kMaxDetailChars) + "...";
        excerpts.push_back(s.sample_id + ": " + text);
    }
    if (!excerpts.empty()) {
        out += " | details: ";
        for (std::size_t i = 0; i < excerpts.size(); ++i) out += (i ? "; " : "") + excerpts[i];
    }
    return out;
}

std::string compose_evidence(const std::string& planner_text, const std::string& dimension_id, Tier tier,
                             std::span<const RoundRecord> rounds) {
    std::string measured;
    for (const auto& r : rounds) {
        if (r.dimension_id != dimension_id) continue;
        measured += fmt::format("{}R{} {} over {} samples", measured.empty() ? "" : "; ", r.index,
                                stats_text(r.scores), r.scores.size());
    }
    const auto stats = fmt::format("[{}: {}]", tier_label(tier), measured);
    return planner_text.empty() ? stats : planner_text + " " + stats;
}

std::filesystem::path session_directory(const std::filesystem::path& workspace, const std::string& query_id,
                                        std::uint64_t seed) {
    return workspace / fmt::format("{}-s{}", filesystem_safe(query_id), seed);
}

SessionOutcome run_session(const UserQuery& query, const ModelDescriptor& model, const LoopLimits& limits,
                           SessionDeps deps, std::uint64_t seed, std::ostream* trace_out) {
    limits.validate();
    const auto catalog = deps.toolkit.registry().catalog();
    if (catalog.empty()) throw PreconditionError("tool catalog is empty");

    std::map<std::string, TierScale> header_scales;
    for (const auto& tool : catalog) {
        if (tool.modality != model.modality) continue;
        header_scales[tool.dimension_id] = scale_for(deps.scales, tool.dimension_id);
    }

    TraceWriter trace(trace_out);
    trace.write({{"type", "header"},
                 {"format", kTraceFormat},
                 {"query", query},
                 {"model", model},
                 {"limits", limits},
                 {"seed", seed},
                 {"scales", header_scales},
                 {"cost_clock", to_string(deps.clock)},
                 {"assumptions", report_assumptions()}});

    EvaluationSession session{query, model, limits, seed, {}, std::nullopt};
    CostLedger cost;
    int round_index = 0;
    try {
        auto proposal = deps.planner.propose_initial(query, catalog);
        StopReason stop = StopReason::planner_stop;
        for (;;) {
            if (proposal.stop) {
                stop = proposal.stop_rationale && session.rounds.size() >= static_cast<std::size_t>(limits.max_rounds)
                           ? StopReason::max_rounds
                           : StopReason::planner_stop;
                break;
            }
            const int round_samples = proposal.prompt_count * limits.samples_per_prompt;
            if (cost.total_samples + round_samples > limits.max_total_samples) {
                stop = StopReason::sample_budget;
                break;
            }

            round_index = static_cast<int>(session.rounds.size()) + 1;
            const auto started = std::chrono::steady_clock::now();
            const auto& tool = deps.toolkit.registry().at(proposal.tool_id);
            if (tool.modality != model.modality) {
                throw PreconditionError(fmt::format("tool {} handles {} but model {} is {}", tool.tool_id,
                                                    to_string(tool.modality), model.id, to_string(model.modality)));
            }

            RoundRecord round;
            round.index = round_index;
            round.proposal = proposal;
            round.dimension_id = tool.dimension_id;
            const auto lib = deps.libraries.find(tool.dimension_id);
            round.prompts = deps.promptgen.design_prompts(proposal, query.mode, round_index,
                                                          lib == deps.libraries.end() ? nullptr : &lib->second);
            if (tool.is_vqa()) {
                for (auto& p : round.prompts) p.questions = deps.promptgen.design_questions(p, proposal.sub_aspect);
            }

            round.samples = deps.sampler.generate(model, round.prompts, seed);
            for (const auto& s : round.samples) {
                if (!find_prompt(round.prompts, s.prompt_id)) {
                    throw GenerationFailed("sample " + s.id + " refers to unknown prompt " + s.prompt_id);
                }
            }

            ToolResult result;
            if (tool.is_vqa()) {
                if (!deps.vlm) throw PreconditionError("tool " + tool.tool_id + " needs a VQA backend");
                result = deps.toolkit.evaluate_vqa(tool.tool_id, round.samples, round.prompts, *deps.vlm,
                                                   deps.templates, deps.vqa);
            } else {
                result = deps.toolkit.evaluate(tool.tool_id, round.samples, round.prompts);
            }
            round.scores = std::move(result.scores);
            round.failures = std::move(result.failures);
            if (round.scores.empty()) {
                throw ToolUnreachable(fmt::format("round {}: tool {} scored none of the {} samples", round_index,
                                                  tool.tool_id, round.samples.size()));
            }
            round.round_tier = tiering::aggregate_round_tier(round.scores, scale_for(deps.scales, tool.dimension_id));
            round.observation = build_observation(round);

            RoundCost rc;
            rc.samples = static_cast<int>(round.samples.size());
            if (deps.clock == CostClock::wall) {
                rc.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
            } else {
                for (const auto& s : round.samples) rc.seconds += s.latency;
            }
            cost.add_round(rc);
            trace.write({{"type", "round"}, {"round", round}, {"cost", rc}});
            session.rounds.push_back(std::move(round));

            proposal = deps.planner.propose_next(query, session.rounds, limits, catalog,
                                                 limits.max_total_samples - cost.total_samples);
        }

        if (session.rounds.empty()) {
            throw PreconditionError(fmt::format(
                "the first round ({} prompts x {} samples) does not fit the sample budget of {}",
                proposal.prompt_count, limits.samples_per_prompt, limits.max_total_samples));
        }

        round_index = 0;
        const auto tiers = tiering::aggregate_by_dimension(session.rounds);
        const auto summary = deps.planner.summarize(query, session.rounds, tiers);
        trace.write({{"type", "summary"},
                     {"narrative", summary.narrative},
                     {"evidence", summary.evidence},
                     {"stop_reason", to_string(stop)}});

        auto report = assemble_report(query, model, session.rounds, cost, stop, summary, report_assumptions());
        trace.write({{"type", "report"}, {"report", report}});
        session.report = report;
        return {std::move(session), std::move(report), trace.take()};
    } catch (const std::exception& e) {
        json line{{"type", "error"}, {"message", e.what()}};
        if (round_index > 0) line["round"] = round_index;
        trace.write(line);
        throw;
    }
}

FinalReport replay_trace(std::span<const std::string> lines) {
    if (lines.empty()) throw ValidationError("trace is empty");
    const auto header = parse_json(lines.front(), "trace line 1");
    if (header.value("type", "") != "header" || header.value("format", "") != kTraceFormat) {
        throw ValidationError("trace line 1 is not an evalagent-trace v1 header");
    }
    UserQuery query;
    ModelDescriptor model;
    std::map<std::string, TierScale> scales;
    std::vector<std::string> assumptions;
    try {
        query = header.at("query").get<UserQuery>();
        model = header.at("model").get<ModelDescriptor>();
        scales = header.at("scales").get<std::map<std::string, TierScale>>();
        assumptions = header.at("assumptions").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("trace header: ") + e.what());
    }

    std::vector<RoundRecord> rounds;
    CostLedger cost;
    std::optional<SummaryResult> summary;
    std::optional<StopReason> stop;
    std::optional<FinalReport> recorded;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto where = fmt::format("trace line {}", i + 1);
        const auto line = parse_json(lines[i], where);
        const auto type = line.value("type", "");
        if (type == "round") {
            auto round = decode<RoundRecord>(line.at("round"), where);
            const auto rc = decode<RoundCost>(line.at("cost"), where);
            if (round.index != static_cast<int>(rounds.size()) + 1) {
                throw ValidationError(fmt::format("{}: round index {} out of sequence", where, round.index));
            }
            if (rc.samples != static_cast<int>(round.samples.size())) {
                throw ValidationError(fmt::format("{}: cost counts {} samples, round has {}", where, rc.samples,
                                                  round.samples.size()));
            }
            const auto it = scales.find(round.dimension_id);
            if (it == scales.end()) throw ValidationError(where + ": no scale for dimension " + round.dimension_id);
            const auto tier = tiering::aggregate_round_tier(round.scores, it->second);
            if (tier != round.round_tier) {
                throw ValidationError(fmt::format("{}: recorded tier {} but scores give {}", where,
                                                  tier_id(round.round_tier), tier_id(tier)));
            }
            cost.add_round(rc);
            rounds.push_back(std::move(round));
        } else if (type == "summary") {
            SummaryResult s;
            s.narrative = line.at("narrative").get<std::string>();
            s.evidence = line.at("evidence").get<std::map<std::string, std::string>>();
            summary = std::move(s);
            stop = parse_stop_reason(line.at("stop_reason").get<std::string>());
            if (!stop) throw ValidationError(where + ": unknown stop_reason");
        } else if (type == "report") {
            recorded = decode<FinalReport>(line.at("report"), where);
        } else if (type == "error") {
            throw ValidationError(where + ": session aborted: " + line.value("message", ""));
        } else {
            throw ValidationError(where + ": unexpected line type \"" + type + "\"");
        }
    }
    if (rounds.empty()) throw ValidationError("trace has no rounds");
    if (!summary) throw ValidationError("trace has no summary line");

    auto report = assemble_report(query, model, rounds, cost, *stop, *summary, std::move(assumptions));
    if (recorded && !(*recorded == report)) {
        throw ValidationError("recorded report differs from the one rebuilt from the rounds");
    }
    return report;
}

std::vector<std::string> read_trace_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open trace " + path.string());
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

}  // namespace evalagent
