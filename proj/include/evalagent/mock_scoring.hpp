// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

// Deterministic mock generation and scoring.
//
// A mock sample is a small text artifact:
//
//   evalagent-mock-sample v1
//   model_id=<id>
//   prompt_id=<id>
//   seed=<u64>
//   replica=<int>
//   profile.<dimension_id>=<tier level 1..5>     (one line per profiled dimension)
//
// Mock tools never look at anything but the artifact bytes. For a tool t and
// artifact bytes a:
//
//   h      = fnv1a64(a + "\x1f" + t)
//   z      = splitmix64(h)
//   u      = (z >> 11) * 2^-53                          in [0,1)
//   c      = (2 * tier - 1) / 10                        band center
//   continuous score = clamp(c + (2u - 1) * 0.08, 0, 1)
//   binary score     = u < c ? 1 : 0
//
// Mock latency uses the same u with t = "latency", scaled to a per-modality base.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "evalagent/core.hpp"

namespace evalagent::mock {

inline constexpr std::string_view kArtifactMagic = "evalagent-mock-sample v1";
inline constexpr double kBandHalfWidth = 0.08;

std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Uniform variate in [0,1) derived from `artifact` and `salt`.
double unit_variate(std::string_view artifact, std::string_view salt) noexcept;

/// (2t-1)/10: 0.1, 0.3, 0.5, 0.7, 0.9.
double band_center(Tier t) noexcept;

double continuous_score(std::string_view artifact, std::string_view tool_id, Tier tier) noexcept;
double binary_score(std::string_view artifact, std::string_view tool_id, Tier tier) noexcept;

/// Simulated generation latency in seconds: base * (0.9 + 0.2u) with base 12 s
/// for images and 36 s for videos.
double latency_seconds(std::string_view artifact, Modality modality) noexcept;

struct Artifact {
    std::string model_id;
    std::string prompt_id;
    std::uint64_t seed = 0;
    int replica = 0;
    std::map<std::string, Tier> profile;

    bool operator==(const Artifact&) const = default;
};

std::string render_artifact(const Artifact& a);
/// Returns nullopt unless `bytes` is a well-formed mock artifact.
std::optional<Artifact> parse_artifact(std::string_view bytes);

}  // namespace evalagent::mock
