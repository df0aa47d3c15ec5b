// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

// Turns prompts into samples. Mock models write a placeholder artifact under
// the workspace (see mock_scoring.hpp); remote models are reached through
//
//   POST <endpoint>/generate  {"model_id", "prompts": [{"id", "text"}], "seed"}
//   200                       {"samples": [{"prompt_id", "uri", "latency_s"}]}
//
// With samples_per_prompt = k the server is called k times, replica r using
// seed + r.

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "evalagent/core.hpp"

namespace evalagent {

struct SamplerOptions {
    std::filesystem::path workspace;
    int samples_per_prompt = 1;
    std::chrono::seconds timeout{600};
};

class Sampler {
public:
    explicit Sampler(SamplerOptions options);

    /// Throws PreconditionError, ModelUnreachable or GenerationFailed. A
    /// partial batch is never returned.
    std::vector<GeneratedSample> generate(const ModelDescriptor& model, std::span<const PromptSpec> prompts,
                                          std::uint64_t seed) const;

private:
    std::vector<GeneratedSample> generate_mock(const ModelDescriptor& model, std::span<const PromptSpec> prompts,
                                               std::uint64_t seed) const;
    std::vector<GeneratedSample> generate_remote(const ModelDescriptor& model, std::span<const PromptSpec> prompts,
                                                 std::uint64_t seed) const;

    SamplerOptions options_;
};

/// Replaces characters outside [A-Za-z0-9._-] so an id can name a file.
std::string filesystem_safe(std::string_view id);

}  // namespace evalagent
