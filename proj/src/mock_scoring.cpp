// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

#include "evalagent/mock_scoring.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <vector>

namespace evalagent::mock {

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    std::uint64_t z = x + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double unit_variate(std::string_view artifact, std::string_view salt) noexcept {
    std::string key;
    key.reserve(artifact.size() + salt.size() + 1);
    key.append(artifact);
    key.push_back('\x1f');
    key.append(salt);
    const auto z = splitmix64(fnv1a64(key));
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

double band_center(Tier t) noexcept { return (2.0 * level(t) - 1.0) / 10.0; }

double continuous_score(std::string_view artifact, std::string_view tool_id, Tier tier) noexcept {
    const double u = unit_variate(artifact, tool_id);
    return std::clamp(band_center(tier) + (2.0 * u - 1.0) * kBandHalfWidth, 0.0, 1.0);
}

double binary_score(std::string_view artifact, std::string_view tool_id, Tier tier) noexcept {
    return unit_variate(artifact, tool_id) < band_center(tier) ? 1.0 : 0.0;
}

double latency_seconds(std::string_view artifact, Modality modality) noexcept {
    const double base = modality == Modality::text_to_video ? 36.0 : 12.0;
    return base * (0.9 + 0.2 * unit_variate(artifact, "latency"));
}

std::string render_artifact(const Artifact& a) {
    std::ostringstream out;
    out << kArtifactMagic << '\n'
        << "model_id=" << a.model_id << '\n'
        << "prompt_id=" << a.prompt_id << '\n'
        << "seed=" << a.seed << '\n'
        << "replica=" << a.replica << '\n';
    for (const auto& [dim, tier] : a.profile) out << "profile." << dim << '=' << level(tier) << '\n';
    return out.str();
}

std::optional<Artifact> parse_artifact(std::string_view bytes) {
    std::vector<std::string_view> lines;
    while (!bytes.empty()) {
        const auto nl = bytes.find('\n');
        if (nl == std::string_view::npos) return std::nullopt;  // every line is newline-terminated
        lines.push_back(bytes.substr(0, nl));
        bytes.remove_prefix(nl + 1);
    }
    if (lines.size() < 5 || lines[0] != kArtifactMagic) return std::nullopt;

    auto value_of = [](std::string_view line, std::string_view key) -> std::optional<std::string_view> {
        if (line.size() <= key.size() || line.substr(0, key.size()) != key || line[key.size()] != '=') {
            return std::nullopt;
        }
        return line.substr(key.size() + 1);
    };
    Artifact a;
    auto model = value_of(lines[1], "model_id");
    auto prompt = value_of(lines[2], "prompt_id");
    auto seed = value_of(lines[3], "seed");
    auto replica = value_of(lines[4], "replica");
    if (!model || !prompt || !seed || !replica) return std::nullopt;
    a.model_id = std::string(*model);
    a.prompt_id = std::string(*prompt);
    if (std::from_chars(seed->data(), seed->data() + seed->size(), a.seed).ec != std::errc{}) return std::nullopt;
    if (std::from_chars(replica->data(), replica->data() + replica->size(), a.replica).ec != std::errc{}) {
        return std::nullopt;
    }
    for (std::size_t i = 5; i < lines.size(); ++i) {
        const auto line = lines[i];
        constexpr std::string_view prefix = "profile.";
        const auto eq = line.rfind('=');
        if (line.substr(0, prefix.size()) != prefix || eq == std::string_view::npos || eq <= prefix.size()) {
            return std::nullopt;
        }
        int lvl = 0;
        const auto v = line.substr(eq + 1);
        if (std::from_chars(v.data(), v.data() + v.size(), lvl).ec != std::errc{} || lvl < 1 || lvl > 5) {
            return std::nullopt;
        }
        a.profile[std::string(line.substr(prefix.size(), eq - prefix.size()))] = static_cast<Tier>(lvl);
    }
    return a;
}

}  // namespace evalagent::mock
