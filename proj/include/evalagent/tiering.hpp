// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

// Five-tier performance categorization.
//
// A TierScale holds four strictly ascending cut points b1..b4 in (0,1). A
// score s maps to tier k when b_{k-1} <= s < b_k (b0 = 0, b5 = 1); a score on
// a cut point takes the higher tier and s = 1 is VeryHigh. Cut points come
// from equal-mass quintiles of a reference score list.

#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "evalagent/core.hpp"
#include "evalagent/json_codec.hpp"

namespace evalagent {

enum class CalibrationSource { sample_density, leaderboard };
std::string_view to_string(CalibrationSource s) noexcept;

struct TierScale {
    std::string dimension_id;
    std::array<double, 4> boundaries{0.2, 0.4, 0.6, 0.8};
    CalibrationSource source = CalibrationSource::sample_density;
    std::string provenance;

    /// Equal-width default scale [0.2, 0.4, 0.6, 0.8].
    static TierScale uniform(std::string dimension_id);

    /// Throws ValidationError when boundaries are not strictly ascending in
    /// (0,1) or a leaderboard scale has no provenance.
    void validate() const;
    bool operator==(const TierScale&) const = default;
};

void to_json(json& j, const TierScale& v);
void from_json(const json& j, TierScale& v);

TierScale load_tier_scale(const std::string& path);

namespace tiering {

inline constexpr std::size_t kMinCalibrationScores = 25;
inline constexpr double kSeparationEpsilon = 1e-9;
/// Scores within this distance below a cut point count as on it.
inline constexpr double kBoundaryTolerance = 1e-9;

/// Empirical p-quantile with linear interpolation between order statistics
/// of an ascending-sorted list: h = (n-1)p, x[floor h] + frac(h) * (x[floor h + 1] - x[floor h]).
double interpolated_percentile(std::span<const double> sorted, double p);

/// Cut points at the 20/40/60/80th percentiles of `reference_scores`.
/// Throws PreconditionError for fewer than 25 scores or scores outside [0,1];
/// DegenerateDistribution when the scores are all equal, two cut points
/// coincide within 1e-9, or a cut point falls on 0 or 1.
TierScale calibrate(std::span<const double> reference_scores, CalibrationSource source,
                    std::string dimension_id = {}, std::string provenance = {});

/// Throws PreconditionError when score is outside [0,1].
Tier map_score_to_tier(double score, const TierScale& scale);

/// Mean (continuous) or proportion of ones (binary), as fed to the tier map.
double round_statistic(std::span<const ToolScore> scores);

/// Tier of round_statistic(scores). Throws MixedKinds or PreconditionError.
Tier aggregate_round_tier(std::span<const ToolScore> scores, const TierScale& scale);

/// Sample-count-weighted mode of the round tiers; ties go to the tier seen in
/// the most recent round among the tied ones.
Tier aggregate_final_tier(std::span<const RoundRecord> rounds);

/// Groups rounds by dimension_id and aggregates each group.
std::map<std::string, Tier> aggregate_by_dimension(std::span<const RoundRecord> rounds);

}  // namespace tiering

}  // namespace evalagent
