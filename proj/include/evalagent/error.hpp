// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace evalagent {

/// Base for every domain error raised by the engine. The CLI maps these to
/// exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define EVALAGENT_DEFINE_ERROR(Name)                                  \
    class Name : public Error {                                       \
    public:                                                           \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    }

// Caller broke an operation's precondition.
EVALAGENT_DEFINE_ERROR(PreconditionError);
EVALAGENT_DEFINE_ERROR(ValidationError);
EVALAGENT_DEFINE_ERROR(ConfigError);
EVALAGENT_DEFINE_ERROR(TemplateError);

// llm-gateway
EVALAGENT_DEFINE_ERROR(ProviderUnreachable);
EVALAGENT_DEFINE_ERROR(RateLimited);
EVALAGENT_DEFINE_ERROR(ScriptExhausted);

// agents
EVALAGENT_DEFINE_ERROR(UnknownTool);
EVALAGENT_DEFINE_ERROR(LibraryExhausted);

// sampler
EVALAGENT_DEFINE_ERROR(ModelUnreachable);
EVALAGENT_DEFINE_ERROR(GenerationFailed);

// toolkit
EVALAGENT_DEFINE_ERROR(DuplicateToolId);
EVALAGENT_DEFINE_ERROR(ToolUnreachable);
EVALAGENT_DEFINE_ERROR(ProtocolViolation);

// tiering
EVALAGENT_DEFINE_ERROR(DegenerateDistribution);
EVALAGENT_DEFINE_ERROR(MixedKinds);

// validation harness
EVALAGENT_DEFINE_ERROR(EnumerationBoundExceeded);
EVALAGENT_DEFINE_ERROR(EmptyPredictions);

// results store
EVALAGENT_DEFINE_ERROR(StorageFailure);
EVALAGENT_DEFINE_ERROR(MissingEvaluation);

#undef EVALAGENT_DEFINE_ERROR

/// Raised when a structured completion never satisfied its schema. `code`
/// carries the machine-readable reason of the last rejected attempt so callers
/// can translate it (for example "unknown_tool" into UnknownTool).
class StructuredOutputFailure : public Error {
public:
    StructuredOutputFailure(const std::string& what, std::string code, int attempts)
        : Error("StructuredOutputFailure: " + what), code_(std::move(code)), attempts_(attempts) {}

    const std::string& code() const noexcept { return code_; }
    int attempts() const noexcept { return attempts_; }

private:
    std::string code_;
    int attempts_;
};

}  // namespace evalagent
