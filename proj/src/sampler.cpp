// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

#include "evalagent/sampler.hpp"

#include <fstream>
#include <map>

#include <fmt/format.h>

#include "httplib.h"

#include "evalagent/error.hpp"
#include "evalagent/json_codec.hpp"
#include "evalagent/mock_scoring.hpp"

namespace evalagent {

std::string filesystem_safe(std::string_view id) {
    std::string out(id);
    for (auto& c : out) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
                        c == '_' || c == '-';
        if (!ok) c = '_';
    }
    return out;
}

Sampler::Sampler(SamplerOptions options) : options_(std::move(options)) {
    if (options_.samples_per_prompt < 1) throw ConfigError("samples_per_prompt must be >= 1");
}

std::vector<GeneratedSample> Sampler::generate(const ModelDescriptor& model, std::span<const PromptSpec> prompts,
                                               std::uint64_t seed) const {
    if (prompts.empty()) throw PreconditionError("no prompts to generate from");
    return model.is_mock() ? generate_mock(model, prompts, seed) : generate_remote(model, prompts, seed);
}

namespace {

std::string sample_id(const std::string& prompt_id, int replica) { return fmt::format("{}-s{}", prompt_id, replica); }

}  // namespace

std::vector<GeneratedSample> Sampler::generate_mock(const ModelDescriptor& model, std::span<const PromptSpec> prompts,
                                                    std::uint64_t seed) const {
    if (!model.mock_profile) throw PreconditionError("mock model " + model.id + " has no mock_profile");
    const auto dir = std::filesystem::path("samples") / filesystem_safe(model.id);
    std::filesystem::create_directories(options_.workspace / dir);

    std::vector<GeneratedSample> out;
    out.reserve(prompts.size() * options_.samples_per_prompt);
    for (const auto& p : prompts) {
        for (int r = 0; r < options_.samples_per_prompt; ++r) {
            mock::Artifact artifact{model.id, p.id, seed, r, *model.mock_profile};
            const auto bytes = mock::render_artifact(artifact);
            const auto rel = dir / fmt::format("{}_seed{}_r{}.txt", filesystem_safe(p.id), seed, r);
            std::ofstream file(options_.workspace / rel, std::ios::binary | std::ios::trunc);
            if (!file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()))) {
                throw GenerationFailed("cannot write mock artifact " + (options_.workspace / rel).string());
            }
            out.push_back({sample_id(p.id, r), p.id, model.id, rel.generic_string(),
                           mock::latency_seconds(bytes, model.modality)});
        }
    }
    return out;
}

std::vector<GeneratedSample> Sampler::generate_remote(const ModelDescriptor& model,
                                                      std::span<const PromptSpec> prompts, std::uint64_t seed) const {
    httplib::Client client(model.endpoint);
    client.set_connection_timeout(std::chrono::seconds(10));
    client.set_read_timeout(options_.timeout);

    json prompt_list = json::array();
    for (const auto& p : prompts) prompt_list.push_back({{"id", p.id}, {"text", p.text}});

    // replica -> prompt_id -> sample
    std::vector<std::map<std::string, GeneratedSample>> replicas(options_.samples_per_prompt);
    for (int r = 0; r < options_.samples_per_prompt; ++r) {
        const json body = {{"model_id", model.id}, {"prompts", prompt_list}, {"seed", seed + static_cast<std::uint64_t>(r)}};
        auto res = client.Post("/generate", body.dump(), "application/json");
        if (!res) throw ModelUnreachable(model.endpoint + ": " + httplib::to_string(res.error()));
        if (res->status != 200) throw ModelUnreachable(fmt::format("{}: HTTP {}", model.endpoint, res->status));
        try {
            const auto reply = json::parse(res->body);
            for (const auto& s : reply.at("samples")) {
                GeneratedSample sample;
                sample.prompt_id = s.at("prompt_id").get<std::string>();
                sample.uri = s.at("uri").get<std::string>();
                sample.latency = s.at("latency_s").get<double>();
                if (sample.latency < 0.0) throw GenerationFailed("negative latency for prompt " + sample.prompt_id);
                sample.id = sample_id(sample.prompt_id, r);
                sample.model_id = model.id;
                replicas[r][sample.prompt_id] = std::move(sample);
            }
        } catch (const json::exception& e) {
            throw GenerationFailed(model.endpoint + ": malformed reply: " + e.what());
        }
    }

    std::vector<GeneratedSample> out;
    for (const auto& p : prompts) {
        for (int r = 0; r < options_.samples_per_prompt; ++r) {
            auto it = replicas[r].find(p.id);
            if (it == replicas[r].end()) {
                throw GenerationFailed(fmt::format("{} returned no sample for prompt {} (replica {})", model.id, p.id, r));
            }
            out.push_back(it->second);
        }
    }
    return out;
}

}  // namespace evalagent
