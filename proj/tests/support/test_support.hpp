// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "evalagent/core.hpp"
#include "evalagent/json_codec.hpp"
#include "evalagent/llm_gateway.hpp"
#include "evalagent/loop_engine.hpp"
#include "evalagent/prompt_templates.hpp"
#include "evalagent/promptgen_agent.hpp"
#include "evalagent/tiering.hpp"
#include "evalagent/toolkit.hpp"

namespace httplib {
class Server;
}

namespace evalagent::testing {

class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

const TemplateSet& shipped_templates();

json proposal(const std::string& sub_aspect, const std::string& tool_id, int prompt_count,
              const std::string& thought = "probe next");
json stop_reply(const std::string& rationale = "enough evidence");
/// Summary naming R1..Rn, with the progression heading when `open_ended`.
json summary_reply(int rounds, const std::vector<std::string>& dimensions, bool open_ended = false);

ToolDescriptor mock_tool(const std::string& tool_id, const std::string& dimension_id,
                         ScoreKind kind = ScoreKind::continuous, Modality modality = Modality::text_to_image);
ToolDescriptor vqa_tool(const std::string& tool_id, const std::string& dimension_id);
ModelDescriptor mock_model(const std::string& id, std::map<std::string, Tier> profile,
                           Modality modality = Modality::text_to_image);
PromptLibrary synthetic_library(const std::string& dimension_id, int entries = 60);
UserQuery closed_query(const std::string& id = "q1");
UserQuery open_query(const std::string& id = "q-open");

/// Registry, default scales and libraries for a set of mock tools, plus a
/// scratch workspace. `run` builds fresh agents per call.
class MockWorld {
public:
    MockWorld(std::vector<ToolDescriptor> tools, ModelDescriptor model, bool with_libraries = true);

    struct Scripts {
        std::vector<json> planner;
        std::vector<json> promptgen;
        std::vector<json> vlm;
    };

    SessionOutcome run(const Scripts& scripts, std::uint64_t seed, const UserQuery& query,
                       std::ostream* trace = nullptr) const;

    /// Backends of the most recent run, for call-count assertions.
    ScriptedBackend* last_planner() const { return planner_.get(); }

    LoopLimits limits;
    ModelDescriptor model;
    ToolRegistry registry;
    std::map<std::string, TierScale> scales;
    std::map<std::string, PromptLibrary> libraries;
    CostClock clock = CostClock::sample_latency;
    const std::filesystem::path& workspace() const { return dir_.path(); }

private:
    TempDir dir_;
    mutable std::unique_ptr<ScriptedBackend> planner_;
};

std::unique_ptr<ScriptedBackend> scripted(const std::vector<json>& replies);

/// An httplib server on an ephemeral localhost port, served from a thread.
class StubServer {
public:
    explicit StubServer(const std::function<void(httplib::Server&)>& routes);
    ~StubServer();
    StubServer(const StubServer&) = delete;
    StubServer& operator=(const StubServer&) = delete;
    std::string url() const;

private:
    std::unique_ptr<httplib::Server> server_;
    int port_ = 0;
    std::thread thread_;
};

}  // namespace evalagent::testing

namespace evalagent::testing {

struct NamedDistribution {
    std::string name;
    std::vector<double> scores;
};

/// Twenty fixed synthetic score lists in [0,1] (uniform, skewed, bell,
/// bimodal, discrete leaderboard-like, ...), 25 to 2000 points each. Built
/// from mt19937_64 bits with explicit transforms so they are identical on
/// every platform.
std::vector<NamedDistribution> pinned_distributions();

}  // namespace evalagent::testing
