// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

// Regenerates the tool-protocol golden files:
//
//   evalagent_golden_gen <golden dir>
//
// Each case directory holds descriptor.json (GET /descriptor), request.json
// (POST /evaluate body) and response.json (the expected reply), every file
// being the compact sorted-key JSON followed by one newline. Request URIs are
// relative to the golden directory, where the mock artifacts live.

#include <fstream>
#include <iostream>

#include <fmt/format.h>

#include "evalagent/sampler.hpp"
#include "evalagent/toolkit.hpp"
#include "test_support.hpp"

using namespace evalagent;

namespace {

void write(const std::filesystem::path& p, const json& j) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary | std::ios::trunc) << j.dump() << '\n';
}

std::vector<PromptSpec> prompts(const std::string& round, int n) {
    std::vector<PromptSpec> out;
    for (int i = 1; i <= n; ++i) {
        out.push_back({fmt::format("{}-p{}", round, i), fmt::format("golden prompt {} of {}", i, round), "golden",
                       PromptSource::generated, {}, {}});
    }
    return out;
}

void emit_case(const std::filesystem::path& root, const std::string& name, const ToolDescriptor& tool,
               const std::vector<GeneratedSample>& samples, const std::vector<PromptSpec>& ps) {
    ToolRegistry reg;
    reg.register_tool(tool);
    Toolkit kit(reg, root);
    const auto result = kit.evaluate(tool.tool_id, samples, ps);
    write(root / name / "descriptor.json", json(tool));
    write(root / name / "request.json", make_evaluate_request(tool, samples, ps));
    write(root / name / "response.json", make_evaluate_response(result));
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: evalagent_golden_gen <golden dir>\n";
        return 2;
    }
    const std::filesystem::path root = argv[1];
    Sampler sampler({root, 1, std::chrono::seconds(10)});

    const auto model = testing::mock_model(
        "golden-model", {{"aesthetic", Tier::High}, {"object_count", Tier::Moderate}, {"motion", Tier::VeryLow}});
    const auto video = testing::mock_model("golden-video", {{"motion", Tier::Low}}, Modality::text_to_video);

    {
        const auto ps = prompts("r1", 5);
        emit_case(root, "continuous", testing::mock_tool("mock_aesthetic", "aesthetic"), sampler.generate(model, ps, 7),
                  ps);
    }
    {
        const auto ps = prompts("r2", 9);
        emit_case(root, "binary", testing::mock_tool("mock_count", "object_count", ScoreKind::binary),
                  sampler.generate(model, ps, 11), ps);
    }
    {
        const auto ps = prompts("r3", 4);
        emit_case(root, "video", testing::mock_tool("mock_motion", "motion", ScoreKind::continuous,
                                                    Modality::text_to_video),
                  sampler.generate(video, ps, 3), ps);
    }
    {
        // One scorable sample, one missing artifact, one file that is not a
        // mock artifact, one artifact without a profile for the dimension.
        const auto ps = prompts("r4", 4);
        auto samples = sampler.generate(model, {ps.data(), 1}, 5);
        samples.push_back({"r4-p2-s0", "r4-p2", "golden-model", "samples/golden-model/absent.txt", 12.0});
        std::ofstream(root / "samples" / "not_a_sample.txt", std::ios::binary) << "plain bytes\n";
        samples.push_back({"r4-p3-s0", "r4-p3", "golden-model", "samples/not_a_sample.txt", 12.0});
        const auto other = sampler.generate(video, {ps.data() + 3, 1}, 5);
        samples.push_back(other.front());
        emit_case(root, "failures", testing::mock_tool("mock_aesthetic", "aesthetic"), samples, ps);
    }
    std::cout << "golden files written under " << root << "\n";
    return 0;
}
