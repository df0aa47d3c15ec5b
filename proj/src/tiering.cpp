// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

#include "evalagent/tiering.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "evalagent/error.hpp"

namespace evalagent {

std::string_view to_string(CalibrationSource s) noexcept {
    return s == CalibrationSource::leaderboard ? "leaderboard" : "sample_density";
}

TierScale TierScale::uniform(std::string dimension_id) {
    TierScale s;
    s.dimension_id = std::move(dimension_id);
    s.provenance = "default equal-width scale";
    return s;
}

void TierScale::validate() const {
    for (std::size_t i = 0; i < boundaries.size(); ++i) {
        const double b = boundaries[i];
        if (!(b > 0.0 && b < 1.0)) {
            throw ValidationError(fmt::format("{}: boundary b{}={} outside (0,1)", dimension_id, i + 1, b));
        }
        if (i > 0 && !(boundaries[i - 1] < b)) {
            throw ValidationError(fmt::format("{}: boundaries not strictly ascending", dimension_id));
        }
    }
    if (source == CalibrationSource::leaderboard && provenance.empty()) {
        throw ValidationError(dimension_id + ": leaderboard scale needs provenance naming the score list");
    }
}

void to_json(json& j, const TierScale& v) {
    j = json{{"dimension_id", v.dimension_id},
             {"boundaries", v.boundaries},
             {"source", to_string(v.source)},
             {"provenance", v.provenance}};
}

void from_json(const json& j, TierScale& v) {
    j.at("dimension_id").get_to(v.dimension_id);
    const auto b = j.at("boundaries").get<std::vector<double>>();
    if (b.size() != 4) throw json::other_error::create(599, "boundaries must hold 4 values", &j);
    std::copy(b.begin(), b.end(), v.boundaries.begin());
    const auto source = j.at("source").get<std::string>();
    if (source == "sample_density") {
        v.source = CalibrationSource::sample_density;
    } else if (source == "leaderboard") {
        v.source = CalibrationSource::leaderboard;
    } else {
        throw json::other_error::create(599, "invalid source '" + source + "'", &j);
    }
    v.provenance = j.value("provenance", std::string{});
}

TierScale load_tier_scale(const std::string& path) {
    auto scale = decode<TierScale>(read_json_file(path), path);
    scale.validate();
    return scale;
}

namespace tiering {

double interpolated_percentile(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw PreconditionError("percentile of an empty list");
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

TierScale calibrate(std::span<const double> reference_scores, CalibrationSource source, std::string dimension_id,
                    std::string provenance) {
    if (reference_scores.size() < kMinCalibrationScores) {
        throw PreconditionError(fmt::format("calibration needs at least {} scores, got {}", kMinCalibrationScores,
                                            reference_scores.size()));
    }
    std::vector<double> sorted(reference_scores.begin(), reference_scores.end());
    for (double s : sorted) {
        if (!(s >= 0.0 && s <= 1.0)) throw PreconditionError(fmt::format("calibration score {} outside [0,1]", s));
    }
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == sorted.back()) throw DegenerateDistribution("all reference scores are equal");

    TierScale scale;
    scale.dimension_id = std::move(dimension_id);
    scale.source = source;
    scale.provenance = std::move(provenance);
    if (scale.provenance.empty()) {
        scale.provenance = fmt::format("{} reference scores ({})", sorted.size(), to_string(source));
    }
    constexpr std::array<double, 4> kQuantiles{0.2, 0.4, 0.6, 0.8};
    for (std::size_t i = 0; i < 4; ++i) scale.boundaries[i] = interpolated_percentile(sorted, kQuantiles[i]);

    for (std::size_t i = 1; i < 4; ++i) {
        if (scale.boundaries[i] - scale.boundaries[i - 1] <= kSeparationEpsilon) {
            throw DegenerateDistribution(fmt::format("b{} and b{} coincide at {}", i, i + 1, scale.boundaries[i]));
        }
    }
    if (scale.boundaries.front() <= kSeparationEpsilon || scale.boundaries.back() >= 1.0 - kSeparationEpsilon) {
        throw DegenerateDistribution("a cut point falls on the edge of [0,1]");
    }
    return scale;
}

Tier map_score_to_tier(double score, const TierScale& scale) {
    if (!(score >= 0.0 && score <= 1.0)) throw PreconditionError(fmt::format("score {} outside [0,1]", score));
    int lvl = 1;
    for (double b : scale.boundaries) {
        if (score + kBoundaryTolerance >= b) ++lvl;
    }
    return static_cast<Tier>(lvl);
}

double round_statistic(std::span<const ToolScore> scores) {
    if (scores.empty()) throw PreconditionError("no scores to aggregate");
    const auto kind = scores.front().kind;
    double sum = 0.0;
    for (const auto& s : scores) {
        if (s.kind != kind) throw MixedKinds("round mixes continuous and binary scores");
        sum += s.value;
    }
    return sum / static_cast<double>(scores.size());
}

Tier aggregate_round_tier(std::span<const ToolScore> scores, const TierScale& scale) {
    return map_score_to_tier(round_statistic(scores), scale);
}

Tier aggregate_final_tier(std::span<const RoundRecord> rounds) {
    if (rounds.empty()) throw PreconditionError("no rounds to aggregate");
    std::array<std::size_t, 6> weight{};
    for (const auto& r : rounds) weight[level(r.round_tier)] += r.samples.size();
    const auto best = *std::max_element(weight.begin() + 1, weight.end());
    for (auto it = rounds.rbegin(); it != rounds.rend(); ++it) {
        if (weight[level(it->round_tier)] == best) return it->round_tier;
    }
    return rounds.back().round_tier;
}

std::map<std::string, Tier> aggregate_by_dimension(std::span<const RoundRecord> rounds) {
    std::map<std::string, std::vector<RoundRecord>> groups;
    for (const auto& r : rounds) groups[r.dimension_id].push_back(r);
    std::map<std::string, Tier> out;
    for (const auto& [dim, rs] : groups) out[dim] = aggregate_final_tier(rs);
    return out;
}

}  // namespace tiering

}  // namespace evalagent
