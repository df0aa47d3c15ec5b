// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

// JSON encodings of the core records. These are the encodings written to
// trace files, the results store and the report files; optional fields are
// omitted when absent and object keys are emitted in sorted order, so
// `dump()` output is canonical.

#pragma once

#include <string>

#include "json.hpp"

#include "evalagent/core.hpp"
#include "evalagent/error.hpp"

namespace evalagent {

using json = nlohmann::json;

void to_json(json& j, Tier t);
void from_json(const json& j, Tier& t);

void to_json(json& j, const UserQuery& v);
void from_json(const json& j, UserQuery& v);
void to_json(json& j, const ModelDescriptor& v);
void from_json(const json& j, ModelDescriptor& v);
void to_json(json& j, const VqaQuestion& v);
void from_json(const json& j, VqaQuestion& v);
void to_json(json& j, const PromptSpec& v);
void from_json(const json& j, PromptSpec& v);
void to_json(json& j, const GeneratedSample& v);
void from_json(const json& j, GeneratedSample& v);
void to_json(json& j, const ToolScore& v);
void from_json(const json& j, ToolScore& v);
void to_json(json& j, const ToolFailure& v);
void from_json(const json& j, ToolFailure& v);
void to_json(json& j, const SubAspectProposal& v);
void from_json(const json& j, SubAspectProposal& v);
void to_json(json& j, const RoundRecord& v);
void from_json(const json& j, RoundRecord& v);
void to_json(json& j, const RoundCost& v);
void from_json(const json& j, RoundCost& v);
void to_json(json& j, const CostLedger& v);
void from_json(const json& j, CostLedger& v);
void to_json(json& j, const DimensionVerdict& v);
void from_json(const json& j, DimensionVerdict& v);
void to_json(json& j, const FinalReport& v);
void from_json(const json& j, FinalReport& v);
void to_json(json& j, const LoopLimits& v);
void from_json(const json& j, LoopLimits& v);

/// Decodes `j` as T, converting any library-level type or key error into a
/// ValidationError that names `what`.
template <typename T>
T decode(const json& j, const std::string& what) {
    try {
        return j.get<T>();
    } catch (const json::exception& e) {
        throw ValidationError(what + ": " + e.what());
    }
}

/// Parses text as JSON, raising ValidationError naming `what` on failure.
json parse_json(const std::string& text, const std::string& what);

/// Reads and parses a whole JSON file. Throws ConfigError if it cannot be read.
json read_json_file(const std::string& path);

/// The pretty form used for report files and `replay-trace` output.
std::string render_report(const FinalReport& report);

}  // namespace evalagent
