// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

// Repeated-trial validation: runs sessions against a known ground truth and
// reports within-range accuracy and cost next to a fixed-benchmark baseline.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evalagent/core.hpp"
#include "evalagent/tiering.hpp"

namespace evalagent {

/// Runs one full session for the given trial seed. Each call must build its
/// own session state; calls may run concurrently.
using TrialRunner = std::function<FinalReport(std::uint64_t seed)>;

struct TrialOutcome {
    std::uint64_t seed = 0;
    std::optional<FinalReport> report;
    std::string error;  // set when the trial aborted
};

/// Runs `seeds.size()` trials with at most `concurrency` in flight and
/// returns them in seed order. Throws PreconditionError when seeds.size()
/// differs from n or n < 1.
std::vector<TrialOutcome> run_trials(const TrialRunner& runner, int n, std::span<const std::uint64_t> seeds,
                                     int concurrency = 1);

/// Predicted tier of `dimension_id` per trial; aborted trials and trials
/// that never probed the dimension yield nullopt.
std::vector<std::optional<Tier>> predictions_for(std::span<const TrialOutcome> trials,
                                                 const std::string& dimension_id);

/// Integer percent (rounded half up) of predictions within `margin` levels
/// of the truth. A missing prediction is a miss. Throws EmptyPredictions or
/// PreconditionError for a margin other than 0 or 1.
int within_range_accuracy(std::span<const std::optional<Tier>> predictions, Tier truth, int margin);

/// "<exact>% / <within one>%"
std::string format_accuracy(int exact_percent, int within_one_percent);

struct Baseline {
    int samples = 0;
    double minutes = 0.0;
};

struct TrialCost {
    std::uint64_t seed = 0;
    int samples = 0;
    double minutes = 0.0;
};

struct CostReport {
    std::vector<TrialCost> trials;  // completed trials only
    double mean_samples = 0.0;
    double mean_minutes = 0.0;
    Baseline baseline;
    double samples_ratio = 0.0;  // mean_samples / baseline.samples
    double time_ratio = 0.0;     // mean_minutes / baseline.minutes

    std::string markdown() const;
    std::string csv() const;
};

/// Throws PreconditionError for a non-positive baseline or no completed trial.
CostReport cost_report(std::span<const TrialOutcome> trials, const Baseline& baseline);

struct SensitivityResult {
    int n = 0;
    double p = 0.0;
    Tier true_tier = Tier::Moderate;
    double exact = 0.0;       // P(observed tier == true tier)
    double within_one = 0.0;  // P(|observed - true| <= 1)
};

inline constexpr int kMaxEnumeratedTrials = 32;

/// Exact probability, by enumerating k = 0..n successes with binomial
/// weights, that the proportion k/n lands in the tier of `p` under `scale`.
/// Throws PreconditionError for n < 1 or p outside (0,1), and
/// EnumerationBoundExceeded for n > 32.
SensitivityResult sensitivity_point(int n, double p, const TierScale& scale);

/// One row per sample size, in the order given.
std::vector<SensitivityResult> sensitivity_experiment(double true_p, std::span<const int> sample_sizes,
                                                      const TierScale& scale);

}  // namespace evalagent
