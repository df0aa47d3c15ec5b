// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

#include "evalagent/validation_harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <fmt/format.h>

#include "evalagent/error.hpp"
#include "evalagent/tiering.hpp"

namespace evalagent {

std::vector<TrialOutcome> run_trials(const TrialRunner& runner, int n, std::span<const std::uint64_t> seeds,
                                     int concurrency) {
    if (n < 1) throw PreconditionError("at least one trial is required");
    if (seeds.size() != static_cast<std::size_t>(n)) {
        throw PreconditionError(fmt::format("{} trials need {} seeds, got {}", n, n, seeds.size()));
    }
    std::vector<TrialOutcome> out(seeds.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < seeds.size(); i = next++) {
            out[i].seed = seeds[i];
            try {
                out[i].report = runner(seeds[i]);
            } catch (const std::exception& e) {
                out[i].error = e.what();
            }
        }
    };
    const auto width = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(concurrency, 1)), 1, seeds.size());
    if (width == 1) {
        worker();
        return out;
    }
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < width; ++i) pool.emplace_back(worker);
    pool.clear();
    return out;
}

std::vector<std::optional<Tier>> predictions_for(std::span<const TrialOutcome> trials,
                                                 const std::string& dimension_id) {
    std::vector<std::optional<Tier>> out;
    for (const auto& t : trials) {
        if (!t.report) {
            out.emplace_back();
            continue;
        }
        const auto it = t.report->per_dimension.find(dimension_id);
        out.push_back(it == t.report->per_dimension.end() ? std::nullopt : std::optional<Tier>(it->second.tier));
    }
    return out;
}

int within_range_accuracy(std::span<const std::optional<Tier>> predictions, Tier truth, int margin) {
    if (predictions.empty()) throw EmptyPredictions("no predictions to score");
    if (margin != 0 && margin != 1) throw PreconditionError(fmt::format("margin must be 0 or 1, got {}", margin));
    long hits = 0;
    for (const auto& p : predictions) {
        if (p && std::abs(level(*p) - level(truth)) <= margin) ++hits;
    }
    const long total = static_cast<long>(predictions.size());
    // 100 * hits / total, rounded half up, in integer arithmetic.
    return static_cast<int>((200 * hits + total) / (2 * total));
}

std::string format_accuracy(int exact_percent, int within_one_percent) {
    return fmt::format("{}% / {}%", exact_percent, within_one_percent);
}

CostReport cost_report(std::span<const TrialOutcome> trials, const Baseline& baseline) {
    if (baseline.samples <= 0 || !(baseline.minutes > 0.0)) {
        throw PreconditionError("baseline samples and minutes must be positive");
    }
    CostReport r;
    r.baseline = baseline;
    for (const auto& t : trials) {
        if (!t.report) continue;
        r.trials.push_back({t.seed, t.report->cost.total_samples, t.report->cost.wall_clock / 60.0});
    }
    if (r.trials.empty()) throw PreconditionError("no completed trial to report cost for");
    double samples = 0.0, minutes = 0.0;
    for (const auto& t : r.trials) {
        samples += t.samples;
        minutes += t.minutes;
    }
    r.mean_samples = samples / static_cast<double>(r.trials.size());
    r.mean_minutes = minutes / static_cast<double>(r.trials.size());
    r.samples_ratio = r.mean_samples / baseline.samples;
    r.time_ratio = r.mean_minutes / baseline.minutes;
    return r;
}

std::string CostReport::markdown() const {
    std::string out = "| trial seed | samples | minutes |\n|---|---|---|\n";
    for (const auto& t : trials) out += fmt::format("| {} | {} | {:.2f} |\n", t.seed, t.samples, t.minutes);
    out += fmt::format("| mean | {:.2f} | {:.2f} |\n", mean_samples, mean_minutes);
    out += fmt::format("| baseline | {} | {:.2f} |\n", baseline.samples, baseline.minutes);
    out += fmt::format("| ratio | {:.4f} | {:.4f} |\n", samples_ratio, time_ratio);
    return out;
}

std::string CostReport::csv() const {
    std::string out = "seed,samples,minutes\n";
    for (const auto& t : trials) out += fmt::format("{},{},{}\n", t.seed, t.samples, t.minutes);
    out += fmt::format("mean,{},{}\n", mean_samples, mean_minutes);
    out += fmt::format("baseline,{},{}\n", baseline.samples, baseline.minutes);
    out += fmt::format("ratio,{},{}\n", samples_ratio, time_ratio);
    return out;
}

SensitivityResult sensitivity_point(int n, double p, const TierScale& scale) {
    if (n < 1) throw PreconditionError("n must be at least 1");
    if (!(p > 0.0 && p < 1.0)) throw PreconditionError(fmt::format("p must lie in (0,1), got {}", p));
    if (n > kMaxEnumeratedTrials) {
        throw EnumerationBoundExceeded(fmt::format("n = {} exceeds the enumeration bound {}", n, kMaxEnumeratedTrials));
    }
    SensitivityResult r;
    r.n = n;
    r.p = p;
    r.true_tier = tiering::map_score_to_tier(p, scale);
    for (int k = 0; k <= n; ++k) {
        // C(n,k) built incrementally; exact in a double for n <= 32.
        double binom = 1.0;
        for (int i = 1; i <= k; ++i) binom = binom * (n - k + i) / i;
        const double w = binom * std::pow(p, k) * std::pow(1.0 - p, n - k);
        const auto observed = tiering::map_score_to_tier(static_cast<double>(k) / n, scale);
        if (observed == r.true_tier) r.exact += w;
        if (std::abs(level(observed) - level(r.true_tier)) <= 1) r.within_one += w;
    }
    return r;
}

std::vector<SensitivityResult> sensitivity_experiment(double true_p, std::span<const int> sample_sizes,
                                                      const TierScale& scale) {
    std::vector<SensitivityResult> out;
    for (int n : sample_sizes) out.push_back(sensitivity_point(n, true_p, scale));
    return out;
}

}  // namespace evalagent
