// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "evalagent/error.hpp"
#include "evalagent/validation_harness.hpp"
#include "oracles.hpp"

namespace evalagent {
namespace {

std::vector<std::optional<Tier>> tiers(std::initializer_list<int> levels) {
    std::vector<std::optional<Tier>> out;
    for (int l : levels) out.push_back(l == 0 ? std::nullopt : std::optional<Tier>(tier_from_level(l)));
    return out;
}

std::vector<int> levels_of(const std::vector<std::optional<Tier>>& ps) {
    std::vector<int> out;
    for (const auto& p : ps) out.push_back(p ? level(*p) : -10);
    return out;
}

FinalReport report_with(const std::string& dim, Tier t, int samples, double seconds) {
    FinalReport r;
    r.query_id = "q";
    r.model_id = "m";
    r.per_dimension[dim] = {t, "e"};
    r.cost.total_samples = samples;
    r.cost.wall_clock = seconds;
    return r;
}

TEST(WithinRangeAccuracy, SixtyHundredExample) {
    // Truth Moderate; 6 exact, 2 High, 2 Low.
    const auto ps = tiers({3, 3, 3, 3, 3, 3, 4, 4, 2, 2});
    EXPECT_EQ(within_range_accuracy(ps, Tier::Moderate, 0), 60);
    EXPECT_EQ(within_range_accuracy(ps, Tier::Moderate, 1), 100);
    EXPECT_EQ(format_accuracy(60, 100), "60% / 100%");
}

TEST(WithinRangeAccuracy, MissingPredictionIsAMiss) {
    const auto ps = tiers({3, 3, 3, 3, 3, 3, 3, 3, 3, 0});
    EXPECT_EQ(within_range_accuracy(ps, Tier::Moderate, 0), 90);
    EXPECT_EQ(within_range_accuracy(ps, Tier::Moderate, 1), 90);
}

TEST(WithinRangeAccuracy, Preconditions) {
    EXPECT_THROW(within_range_accuracy({}, Tier::High, 0), EmptyPredictions);
    const auto ps = tiers({3});
    EXPECT_THROW(within_range_accuracy(ps, Tier::High, 2), PreconditionError);
}

TEST(WithinRangeAccuracy, AgreesWithBruteForceCounter) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 40);
        std::vector<std::optional<Tier>> ps;
        for (int i = 0; i < n; ++i) {
            const int l = static_cast<int>(rng() % 6);
            ps.push_back(l == 0 ? std::nullopt : std::optional<Tier>(tier_from_level(l)));
        }
        const int truth = 1 + static_cast<int>(rng() % 5);
        for (int margin : {0, 1}) {
            const int got = within_range_accuracy(ps, tier_from_level(truth), margin);
            EXPECT_EQ(got, oracle::accuracy_percent(levels_of(ps), truth, margin));
            auto shuffled = ps;
            std::shuffle(shuffled.begin(), shuffled.end(), rng);
            EXPECT_EQ(within_range_accuracy(shuffled, tier_from_level(truth), margin), got);
        }
    }
}

TEST(RunTrials, SeedCountMustMatch) {
    const TrialRunner runner = [](std::uint64_t) { return FinalReport{}; };
    const std::vector<std::uint64_t> nine(9, 1);
    EXPECT_THROW(run_trials(runner, 10, nine, 1), PreconditionError);
    EXPECT_THROW(run_trials(runner, 0, {}, 1), PreconditionError);
}

TEST(RunTrials, FailuresAreRecordedPerTrialInSeedOrder) {
    const TrialRunner runner = [](std::uint64_t seed) {
        if (seed == 4) throw ToolUnreachable("tool down");
        return report_with("d", Tier::High, static_cast<int>(seed), 60.0);
    };
    std::vector<std::uint64_t> seeds(10);
    for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = i;
    for (int width : {1, 3}) {
        const auto out = run_trials(runner, 10, seeds, width);
        ASSERT_EQ(out.size(), 10u);
        for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i].seed, i);
        EXPECT_FALSE(out[4].report);
        EXPECT_EQ(out[4].error, "ToolUnreachable: tool down");
        const auto ps = predictions_for(out, "d");
        EXPECT_EQ(within_range_accuracy(ps, Tier::High, 0), 90);
        EXPECT_FALSE(predictions_for(out, "other")[0]);
    }
}

TEST(CostReport, RatiosAgainstTheBaseline) {
    std::vector<TrialOutcome> trials;
    for (int i = 0; i < 4; ++i) trials.push_back({static_cast<std::uint64_t>(i), report_with("d", Tier::Low, 25, 600.0), ""});
    trials.push_back({9, std::nullopt, "aborted"});
    const auto r = cost_report(trials, {4355, 3000.0});
    EXPECT_EQ(r.trials.size(), 4u);
    EXPECT_DOUBLE_EQ(r.mean_samples, 25.0);
    EXPECT_DOUBLE_EQ(r.samples_ratio, 25.0 / 4355.0);
    EXPECT_DOUBLE_EQ(r.mean_minutes, 10.0);
    EXPECT_DOUBLE_EQ(r.time_ratio, 10.0 / 3000.0);

    const std::vector<TrialOutcome> other{{1, report_with("d", Tier::Low, 26, 60.0), ""}};
    EXPECT_DOUBLE_EQ(cost_report(other, {12000, 100.0}).samples_ratio, 26.0 / 12000.0);

    EXPECT_NE(r.markdown().find("| ratio | 0.0057 |"), std::string::npos) << r.markdown();
    EXPECT_EQ(r.csv().rfind("seed,samples,minutes\n0,25,10\n", 0), 0u);
}

TEST(CostReport, Preconditions) {
    const std::vector<TrialOutcome> ok{{1, report_with("d", Tier::Low, 25, 60.0), ""}};
    EXPECT_THROW(cost_report(ok, {0, 1.0}), PreconditionError);
    EXPECT_THROW(cost_report(ok, {10, 0.0}), PreconditionError);
    const std::vector<TrialOutcome> failed{{1, std::nullopt, "x"}};
    EXPECT_THROW(cost_report(failed, {10, 1.0}), PreconditionError);
}

TEST(Sensitivity, ThreeSamplesAtOneHalfNeverHitModerate) {
    const auto s = TierScale::uniform("d");
    const auto r = sensitivity_point(3, 0.5, s);
    EXPECT_EQ(r.true_tier, Tier::Moderate);
    EXPECT_DOUBLE_EQ(r.exact, 0.0);
}

TEST(Sensitivity, AgreesWithOutcomeWalk) {
    const auto s = TierScale::uniform("d");
    for (int n = 1; n <= 10; ++n) {
        for (double p : {0.1, 0.3, 0.5, 0.7, 0.9, 0.45}) {
            const auto r = sensitivity_point(n, p, s);
            const auto w = oracle::outcome_walk(n, p, s.boundaries);
            EXPECT_NEAR(r.exact, w.exact, 1e-12) << n << " " << p;
            EXPECT_NEAR(r.within_one, w.within_one, 1e-12) << n << " " << p;
        }
    }
}

TEST(Sensitivity, LargerSamplesAreMoreAccurate) {
    const auto s = TierScale::uniform("d");
    const std::vector<int> sizes{3, 30};
    for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const auto rows = sensitivity_experiment(p, sizes, s);
        ASSERT_EQ(rows.size(), 2u);
        EXPECT_GT(rows[1].exact, rows[0].exact) << p;
    }
}

TEST(Sensitivity, Bounds) {
    const auto s = TierScale::uniform("d");
    EXPECT_THROW(sensitivity_point(0, 0.5, s), PreconditionError);
    EXPECT_THROW(sensitivity_point(33, 0.5, s), EnumerationBoundExceeded);
    EXPECT_THROW(sensitivity_point(5, 1.0, s), PreconditionError);
    EXPECT_NO_THROW(sensitivity_point(32, 0.5, s));
}

}  // namespace
}  // namespace evalagent
