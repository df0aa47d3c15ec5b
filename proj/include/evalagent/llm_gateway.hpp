// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

// Provider-agnostic chat completion. Agents talk to a `ChatBackend`; the
// scripted backend replays a fixed transcript for offline runs and tests, the
// remote backend speaks a small JSON-over-HTTP protocol:
//
//   POST <url>  {"system": str, "turns": [{"role","text"}], "temperature": num}
//   200         {"text": str, "usage": {"prompt_tokens": int, "completion_tokens": int}}

#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "evalagent/json_codec.hpp"

namespace evalagent {

enum class ChatRole { user, assistant };
std::string_view to_string(ChatRole r) noexcept;

struct ChatTurn {
    ChatRole role = ChatRole::user;
    std::string text;

    bool operator==(const ChatTurn&) const = default;
};

inline constexpr double kDefaultTemperature = 0.7;

struct ChatRequest {
    std::string system_prompt;
    std::vector<ChatTurn> turns;
    double temperature = kDefaultTemperature;
    std::string schema_hint;

    /// Throws PreconditionError unless temperature is in [0,2] and turns is
    /// non-empty.
    void validate() const;
};

struct TokenUsage {
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;
};

struct ChatResponse {
    std::string text;
    std::string provider;
    TokenUsage usage;
};

class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual ChatResponse complete(const ChatRequest& request) = 0;
    virtual std::string name() const = 0;
};

/// Replays a fixed queue of replies, one per call, ignoring temperature.
/// Consumption is serialized so a script can be shared between threads.
class ScriptedBackend final : public ChatBackend {
public:
    explicit ScriptedBackend(std::vector<std::string> replies, std::string name = "scripted");

    /// Entries that are JSON strings are used verbatim; any other JSON value
    /// is used in its compact dump form.
    static std::unique_ptr<ScriptedBackend> from_json(const json& script, std::string name = "scripted");
    static std::unique_ptr<ScriptedBackend> from_file(const std::string& path);

    ChatResponse complete(const ChatRequest& request) override;
    std::string name() const override { return name_; }

    std::size_t calls() const;
    std::size_t remaining() const;
    /// Every request received, in order.
    std::vector<ChatRequest> requests() const;

private:
    mutable std::mutex mutex_;
    std::deque<std::string> replies_;
    std::vector<ChatRequest> received_;
    std::string name_;
};

struct RemoteBackendConfig {
    std::string url;
    // Name of the environment variable holding a bearer credential; empty
    // disables the Authorization header.
    std::string credential_env;
    int max_attempts = 3;
    std::chrono::milliseconds initial_backoff{200};
    std::chrono::seconds timeout{120};
};

class RemoteBackend final : public ChatBackend {
public:
    explicit RemoteBackend(RemoteBackendConfig config);

    ChatResponse complete(const ChatRequest& request) override;
    std::string name() const override { return "remote:" + config_.url; }

    /// HTTP attempts made by the most recent complete() call.
    int last_attempts() const { return last_attempts_; }

private:
    RemoteBackendConfig config_;
    int last_attempts_ = 0;
};

/// Validates the request and forwards it to the backend verbatim.
ChatResponse complete(const ChatRequest& request, ChatBackend& backend);

// ---------------------------------------------------------------------------
// Structured output
// ---------------------------------------------------------------------------

/// Why a parsed completion was rejected. `code` is machine-readable
/// ("parse_error", "schema", "unknown_tool", ...), `message` is quoted back to
/// the model in the corrective turn.
struct ValidationIssue {
    std::string code;
    std::string message;
};

using JsonValidator = std::function<std::optional<ValidationIssue>(const json&)>;

/// Registry of structured-output schemas keyed by ChatRequest::schema_hint.
class SchemaRegistry {
public:
    void add(std::string schema_hint, JsonValidator validator);
    bool contains(const std::string& schema_hint) const;
    const JsonValidator& get(const std::string& schema_hint) const;

    /// Registry holding every schema the engine's agents use.
    static const SchemaRegistry& builtin();

private:
    std::map<std::string, JsonValidator> validators_;
};

namespace schema {
inline constexpr const char* kProposal = "proposal";
inline constexpr const char* kPrompts = "prompts";
inline constexpr const char* kQuestions = "questions";
inline constexpr const char* kSummary = "summary";
inline constexpr const char* kVqaAnswer = "vqa_answer";
}  // namespace schema

/// The fixed corrective turn appended after a rejected completion.
std::string corrective_turn_text(const ValidationIssue& issue);

/// Extracts the JSON value from a completion, tolerating a surrounding
/// markdown code fence. Returns nullopt when the text is not JSON.
std::optional<json> extract_json_payload(const std::string& text);

struct StructuredResult {
    json value;
    int attempts = 0;  // total completions issued
};

/// Completes `request` and parses the reply as JSON against the registered
/// schema for request.schema_hint, then against `extra` when given. Each
/// rejected reply triggers a re-issue with exactly one corrective turn
/// appended, up to `max_parse_retries` re-issues. Throws
/// StructuredOutputFailure once retries are spent.
StructuredResult complete_structured(ChatRequest request, ChatBackend& backend, int max_parse_retries,
                                     const JsonValidator& extra = {},
                                     const SchemaRegistry& registry = SchemaRegistry::builtin());

}  // namespace evalagent
