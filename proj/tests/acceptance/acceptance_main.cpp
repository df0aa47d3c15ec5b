// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance checks. One PASS/FAIL line per criterion; exits nonzero when any
// check fails. Every expected value comes from an oracle in this file or in
// oracles.hpp, never from the library under test.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "evalagent/error.hpp"
#include "evalagent/loop_engine.hpp"
#include "evalagent/validation_harness.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace evalagent {
namespace {

using Clock = std::chrono::steady_clock;
using testing::MockWorld;
using testing::mock_model;
using testing::mock_tool;
using testing::proposal;
using testing::summary_reply;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Planner stand-in that answers by request kind: proposals come from
/// `next(i)` for the i-th proposal request, summaries name R1..R`max_rounds`.
class RoleBackend final : public ChatBackend {
public:
    RoleBackend(std::function<json(int)> next, int max_rounds) : next_(std::move(next)), max_rounds_(max_rounds) {}

    ChatResponse complete(const ChatRequest& request) override {
        if (request.schema_hint == schema::kSummary) {
            ++summaries;
            return {summary_reply(max_rounds_, {}).dump(), "role", {}};
        }
        return {next_(proposals++).dump(), "role", {}};
    }
    std::string name() const override { return "role"; }

    int proposals = 0;
    int summaries = 0;

private:
    std::function<json(int)> next_;
    int max_rounds_;
};

SessionOutcome run_with_planner(const MockWorld& world, ChatBackend& planner_llm, std::uint64_t seed,
                                const std::filesystem::path& workspace) {
    const auto& templates = testing::shipped_templates();
    PlanAgent planner(planner_llm, templates);
    auto promptgen_llm = testing::scripted({});
    PromptGenOptions pg;
    pg.seed = seed;
    PromptGenAgent promptgen(*promptgen_llm, templates, pg);
    const auto query = testing::closed_query();
    const auto dir = session_directory(workspace, query.id, seed);
    Sampler sampler({dir, world.limits.samples_per_prompt, std::chrono::seconds(60)});
    Toolkit toolkit(world.registry, dir);
    SessionDeps deps{planner, promptgen, sampler, toolkit, world.scales, world.libraries, templates, nullptr, {},
                     world.clock};
    return run_session(query, world.model, world.limits, deps, seed);
}

/// Runs `f` on a worker; a check still running after `limit` is reported as
/// FAIL and the process exits, since a stuck thread cannot be cancelled.
Outcome with_watchdog(const std::string& name, std::chrono::seconds limit, std::function<Outcome()> f) {
    auto fut = std::async(std::launch::async, std::move(f));
    if (fut.wait_for(limit) == std::future_status::timeout) {
        std::cout << "FAIL " << name << ": still running after " << limit.count() << " s" << std::endl;
        std::_Exit(1);
    }
    return fut.get();
}

// ---------------------------------------------------------------------------

Outcome budget_reproduction() {
    const auto t0 = Clock::now();
    MockWorld world({mock_tool("aesthetic", "aesthetic"), mock_tool("subject", "subject")},
                    mock_model("m1", {{"aesthetic", Tier::High}, {"subject", Tier::Moderate}}));
    const auto fixed = world.run({{proposal("appeal", "aesthetic", 5), proposal("identity", "subject", 9),
                                   proposal("lighting", "aesthetic", 9), testing::stop_reply(),
                                   summary_reply(3, {"aesthetic", "subject"})}},
                                 1, testing::closed_query());
    // Oracle: the sum of the scripted prompt counts at one sample per prompt.
    const int expected = 5 + 9 + 9;
    if (fixed.report.cost.total_samples != expected || fixed.report.per_dimension.empty()) {
        return {false, fmt::format("scripted 5+9+9 session used {} samples", fixed.report.cost.total_samples)};
    }

    std::mt19937_64 rng(424242);
    int worst = 0, reports = 0;
    testing::TempDir scratch;
    for (int s = 0; s < 100; ++s) {
        // Counts outside 3..9 exercise the clamp; stops arrive at random.
        RoleBackend planner(
            [&rng, s](int i) {
                if (i > 0 && rng() % 4 == 0) return testing::stop_reply();
                const int count = 1 + static_cast<int>(rng() % 12);
                return proposal(fmt::format("aspect {}-{}", s, i), rng() % 2 ? "aesthetic" : "subject", count);
            },
            world.limits.max_rounds);
        const auto out = run_with_planner(world, planner, static_cast<std::uint64_t>(s), scratch.path());
        int summed = 0;
        for (const auto& r : out.session.rounds) summed += static_cast<int>(r.samples.size());
        if (summed != out.report.cost.total_samples) {
            return {false, fmt::format("session {}: ledger {} but rounds hold {}", s, out.report.cost.total_samples,
                                       summed)};
        }
        worst = std::max(worst, summed);
        ++reports;
    }
    const double elapsed = seconds_since(t0);
    const bool ok = worst <= 30 && reports == 100 && elapsed < 10.0;
    return {ok, fmt::format("5+9+9 -> {} samples; max over 100 randomized sessions {} (<= 30); {:.2f} s",
                            fixed.report.cost.total_samples, worst, elapsed)};
}

Outcome cost_ratio() {
    FinalReport measured;
    measured.cost.total_samples = 25;
    measured.cost.wall_clock = 15.0 * 60.0;
    const std::vector<TrialOutcome> trials{{1, measured, ""}};
    const auto r = cost_report(trials, {4355, 2557.0});
    // Oracle: the ratios as plain quotients of the table's integers.
    const double samples_ratio = 25.0 / 4355.0;
    const double time_ratio = 15.0 / 2557.0;
    const bool ok = r.samples_ratio == samples_ratio && r.time_ratio == time_ratio && r.samples_ratio <= 0.01;
    return {ok, fmt::format("samples_ratio {:.6f} (25/4355), time_ratio {:.6f} (15/2557)", r.samples_ratio,
                            r.time_ratio)};
}

Outcome accuracy_metric() {
    const std::vector<int> levels{3, 3, 2, 4, 3, 3, 3, 2, 4, 3};
    std::vector<std::optional<Tier>> predictions;
    for (int l : levels) predictions.push_back(tier_from_level(l));
    const int exact = within_range_accuracy(predictions, Tier::Moderate, 0);
    const int within = within_range_accuracy(predictions, Tier::Moderate, 1);
    const int oracle_exact = oracle::accuracy_percent(levels, 3, 0);
    const int oracle_within = oracle::accuracy_percent(levels, 3, 1);
    const auto text = format_accuracy(exact, within);
    const bool ok = exact == 60 && within == 100 && exact == oracle_exact && within == oracle_within &&
                    text == "60% / 100%";
    return {ok, fmt::format("\"{}\" (brute force {} / {})", text, oracle_exact, oracle_within)};
}

Outcome tier_calibration() {
    const auto dists = testing::pinned_distributions();
    double timed = 0.0;
    double worst_gap = 0.0;
    int violations = 0;
    for (const auto& d : dists) {
        const auto t0 = Clock::now();
        const auto scale = tiering::calibrate(d.scores, CalibrationSource::sample_density, d.name);
        int prev = 1;
        for (int i = 0; i <= 10000; ++i) {
            const int lvl = level(tiering::map_score_to_tier(i / 10000.0, scale));
            if (lvl < prev) ++violations;
            prev = lvl;
        }
        timed += seconds_since(t0);
        for (int i = 0; i < 4; ++i) {
            worst_gap = std::max(worst_gap, std::abs(scale.boundaries[i] - oracle::percentile(d.scores, 0.2 * (i + 1))));
        }
    }
    const bool ok = dists.size() == 20 && worst_gap <= 1e-9 && violations == 0 && timed < 5.0;
    return {ok, fmt::format("{} distributions, max |cut - oracle| {:.2e}, {} monotonicity violations, {:.2f} s",
                            dists.size(), worst_gap, violations, timed)};
}

FinalReport single_tool_trial(const ToolDescriptor& tool, Tier truth, std::uint64_t seed, int rounds) {
    MockWorld world({tool}, mock_model("m-" + std::string(tier_label(truth)), {{tool.dimension_id, truth}}));
    std::vector<json> script;
    if (rounds == 1) {
        world.limits.min_rounds = 1;
        world.limits.max_rounds = 1;
        script = {proposal("pass rate", tool.tool_id, 9), summary_reply(1, {tool.dimension_id})};
    } else {
        script = {proposal("appeal", tool.tool_id, 5), proposal("texture", tool.tool_id, 9),
                  proposal("lighting", tool.tool_id, 9), testing::stop_reply(), summary_reply(3, {tool.dimension_id})};
    }
    return world.run({script}, seed, testing::closed_query()).report;
}

Outcome mock_fidelity() {
    const auto t0 = Clock::now();
    std::vector<std::uint64_t> seeds(10);
    for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = i + 1;
    const auto scale = TierScale::uniform("d");

    std::string detail = "continuous exact:";
    bool ok = true;
    const auto continuous = mock_tool("mock_aesthetic", "aesthetic_quality");
    for (int l = 1; l <= 5; ++l) {
        const auto truth = tier_from_level(l);
        const auto trials = run_trials([&](std::uint64_t s) { return single_tool_trial(continuous, truth, s, 3); }, 10,
                                       seeds);
        const auto acc = within_range_accuracy(predictions_for(trials, "aesthetic_quality"), truth, 0);
        detail += fmt::format(" {}={}%", l, acc);
        ok = ok && acc == 100;
    }

    detail += "; binary hits/10 vs 10P:";
    const auto binary = mock_tool("mock_count", "object_count", ScoreKind::binary);
    for (int l = 1; l <= 5; ++l) {
        const auto truth = tier_from_level(l);
        const double center = (2.0 * l - 1.0) / 10.0;
        const auto trials = run_trials([&](std::uint64_t s) { return single_tool_trial(binary, truth, s, 1); }, 10,
                                       seeds);
        int hits = 0;
        for (const auto& p : predictions_for(trials, "object_count")) hits += p && *p == truth;
        // Closed form: enumerate the 2^9 outcomes of one 9-sample round.
        const double expected = 10.0 * oracle::outcome_walk(9, center, scale.boundaries).exact;
        // Context only: a long run shows whether a miss is sampling noise
        // or a bias in the mock. It does not enter the verdict.
        std::vector<std::uint64_t> more(500);
        for (std::size_t i = 0; i < more.size(); ++i) more[i] = 1000 + i;
        const auto long_run = run_trials([&](std::uint64_t s) { return single_tool_trial(binary, truth, s, 1); },
                                         static_cast<int>(more.size()), more);
        int long_hits = 0;
        for (const auto& p : predictions_for(long_run, "object_count")) long_hits += p && *p == truth;
        detail += fmt::format(" {}={}/{:.2f} (500-trial rate {:.3f})", l, hits, expected,
                              long_hits / static_cast<double>(more.size()));
        ok = ok && std::abs(hits - expected) <= 1.0;
    }
    const double elapsed = seconds_since(t0);
    detail += fmt::format("; {:.2f} s", elapsed);
    return {ok && elapsed < 60.0, detail};
}

/// P(tier of k/n == tier of p) by a Pascal-triangle recursion over the
/// binomial distribution, independent of the enumeration in the library.
double pascal_exact(int n, double p, const std::array<double, 4>& b) {
    std::vector<double> dist{1.0};
    for (int i = 0; i < n; ++i) {
        std::vector<double> next(dist.size() + 1, 0.0);
        for (std::size_t k = 0; k < dist.size(); ++k) {
            next[k] += dist[k] * (1.0 - p);
            next[k + 1] += dist[k] * p;
        }
        dist = std::move(next);
    }
    const int truth = oracle::tier_level(p, b);
    double exact = 0.0;
    for (int k = 0; k <= n; ++k) {
        if (oracle::tier_level(static_cast<double>(k) / n, b) == truth) exact += dist[k];
    }
    return exact;
}

Outcome sensitivity() {
    const auto scale = TierScale::uniform("d");
    const std::vector<int> sizes{3, 30};
    bool ok = true;
    std::string detail;
    for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const auto rows = sensitivity_experiment(p, sizes, scale);
        const double small = pascal_exact(3, p, scale.boundaries);
        const double large = pascal_exact(30, p, scale.boundaries);
        ok = ok && rows[1].exact > rows[0].exact &&
             std::abs(rows[0].exact - small) < 1e-12 && std::abs(rows[1].exact - large) < 1e-12;
        detail += fmt::format("{}p={}: {:.3f} -> {:.3f}", detail.empty() ? "" : "; ", p, rows[0].exact, rows[1].exact);
    }
    return {ok, detail};
}

Outcome failure_guards() {
    std::string detail;
    bool ok = true;
    MockWorld world({mock_tool("aesthetic", "aesthetic"), mock_tool("imaging", "imaging")},
                    mock_model("m1", {{"aesthetic", Tier::High}, {"imaging", Tier::Low}}));
    testing::TempDir scratch;
    const auto limit = std::chrono::seconds(30);

    // Wrong tool: the planner keeps naming a tool that is not registered.
    auto wrong = with_watchdog("failure guards (wrong tool)", limit, [&]() -> Outcome {
        RoleBackend planner([](int) { return proposal("identity", "subject_consistency", 5); }, 5);
        try {
            run_with_planner(world, planner, 1, scratch.path());
            return {false, "wrong tool: session completed"};
        } catch (const UnknownTool&) {
            // One call plus three corrective retries.
            return {planner.proposals == 4, fmt::format("wrong tool -> UnknownTool after {} calls", planner.proposals)};
        }
    });

    // Repetition: the planner proposes the same sub-aspect every time.
    auto repeat = with_watchdog("failure guards (repetition)", limit, [&]() -> Outcome {
        RoleBackend planner([](int) { return proposal("overall appeal", "aesthetic", 3); }, 5);
        const auto out = run_with_planner(world, planner, 2, scratch.path());
        int flagged = 0;
        for (const auto& r : out.session.rounds) flagged += r.proposal.repetition_warning;
        // Rounds 2..5 each cost one re-request.
        const bool good = out.report.stop_reason == StopReason::max_rounds && out.report.rounds_used == 5 &&
                          flagged == 4 && planner.proposals == 1 + 2 * 4;
        return {good, fmt::format("repetition -> {} rounds, {} flagged, {} planner calls, stop {}",
                                  out.report.rounds_used, flagged, planner.proposals,
                                  to_string(out.report.stop_reason))};
    });

    // Never stopping: fresh sub-aspects forever.
    auto endless = with_watchdog("failure guards (never stopping)", limit, [&]() -> Outcome {
        RoleBackend small([](int i) { return proposal(fmt::format("aspect {}", i), i % 2 ? "imaging" : "aesthetic", 3); },
                          5);
        const auto a = run_with_planner(world, small, 3, scratch.path());
        RoleBackend large([](int i) { return proposal(fmt::format("aspect {}", i), i % 2 ? "imaging" : "aesthetic", 9); },
                          5);
        const auto b = run_with_planner(world, large, 4, scratch.path());
        const bool good = a.report.stop_reason == StopReason::max_rounds && a.report.rounds_used == 5 &&
                          b.report.stop_reason == StopReason::sample_budget && b.report.cost.total_samples == 27;
        return {good, fmt::format("never stopping -> {} after {} rounds, {} after {} samples",
                                  to_string(a.report.stop_reason), a.report.rounds_used,
                                  to_string(b.report.stop_reason), b.report.cost.total_samples)};
    });

    for (const auto* o : {&wrong, &repeat, &endless}) {
        ok = ok && o->pass;
        detail += (detail.empty() ? "" : "; ") + o->detail;
    }
    return {ok, detail};
}

int run_binary(const std::string& args, const std::filesystem::path& stdout_file) {
    const int status = std::system(fmt::format("{} {} > {} 2>/dev/null", EVALAGENT_CLI_PATH, args,
                                               stdout_file.string()).c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism() {
    testing::TempDir dir;
    const std::filesystem::path data = EVALAGENT_DATA_DIR;
    auto doc = json::parse(slurp(data / "config.mock.json"));
    for (const char* role : {"planner", "promptgen"}) {
        auto& file = doc["gateway"][role]["script_file"];
        file = (data / file.get<std::string>()).string();
    }
    for (auto& lib : doc["registry"]["libraries"]) lib = (data / lib.get<std::string>()).string();
    doc["store"] = (dir.path() / "store.jsonl").string();
    const auto config = dir.path() / "config.json";
    std::ofstream(config) << doc.dump(2);

    std::vector<std::string> traces, reports, stdouts;
    for (const char* run : {"a", "b"}) {
        const auto ws = dir.path() / run;
        const auto out = dir.path() / (std::string(run) + ".out");
        const int code = run_binary(fmt::format("evaluate --query-file {} --model mock-sd --config {} --seed 11 "
                                                "--workspace {} --no-store",
                                                (data / "query.closed.json").string(), config.string(), ws.string()),
                                    out);
        if (code != 0) return {false, fmt::format("evaluate run {} exited {}", run, code)};
        const auto session = ws / "q-closed-1-s11";
        traces.push_back(slurp(session / "trace.jsonl"));
        reports.push_back(slurp(session / "report.json"));
        stdouts.push_back(slurp(out));
    }
    const bool ok = !traces[0].empty() && traces[0] == traces[1] && reports[0] == reports[1] &&
                    stdouts[0] == stdouts[1];
    return {ok, fmt::format("trace {} bytes, report {} bytes; identical: trace {}, report {}", traces[0].size(),
                            reports[0].size(), traces[0] == traces[1], reports[0] == reports[1])};
}

}  // namespace
}  // namespace evalagent

int main() {
    using namespace evalagent;
    const std::vector<std::pair<std::string, std::function<Outcome()>>> checks{
        {"budget reproduction", budget_reproduction},
        {"cost-ratio arithmetic", cost_ratio},
        {"accuracy metric oracle", accuracy_metric},
        {"tier calibration oracle", tier_calibration},
        {"mock end-to-end fidelity", mock_fidelity},
        {"sensitivity monotonicity", sensitivity},
        {"failure-mode guards", failure_guards},
        {"determinism", determinism},
    };
    int failures = 0;
    for (const auto& [name, check] : checks) {
        Outcome o;
        try {
            o = with_watchdog(name, std::chrono::seconds(120), check);
        } catch (const std::exception& e) {
            o = {false, std::string("threw ") + e.what()};
        }
        failures += !o.pass;
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
