// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

#include "evalagent/llm_gateway.hpp"

#include <cstdlib>
#include <thread>

#include <fmt/format.h>

#include "httplib.h"

#include "evalagent/error.hpp"

namespace evalagent {

std::string_view to_string(ChatRole r) noexcept { return r == ChatRole::user ? "user" : "assistant"; }

void ChatRequest::validate() const {
    if (!(temperature >= 0.0 && temperature <= 2.0)) {
        throw PreconditionError(fmt::format("temperature {} outside [0,2]", temperature));
    }
    if (turns.empty()) throw PreconditionError("chat request has no turns");
}

// ---------------------------------------------------------------------------
// ScriptedBackend
// ---------------------------------------------------------------------------

ScriptedBackend::ScriptedBackend(std::vector<std::string> replies, std::string name)
    : replies_(replies.begin(), replies.end()), name_(std::move(name)) {}

std::unique_ptr<ScriptedBackend> ScriptedBackend::from_json(const json& script, std::string name) {
    if (!script.is_array()) throw ConfigError("script must be a JSON array of replies");
    std::vector<std::string> replies;
    replies.reserve(script.size());
    for (const auto& entry : script) {
        replies.push_back(entry.is_string() ? entry.get<std::string>() : entry.dump());
    }
    return std::make_unique<ScriptedBackend>(std::move(replies), std::move(name));
}

std::unique_ptr<ScriptedBackend> ScriptedBackend::from_file(const std::string& path) {
    return from_json(read_json_file(path), "scripted:" + path);
}

ChatResponse ScriptedBackend::complete(const ChatRequest& request) {
    std::lock_guard lock(mutex_);
    received_.push_back(request);
    if (replies_.empty()) {
        throw ScriptExhausted(fmt::format("{} has no reply for call #{}", name_, received_.size()));
    }
    ChatResponse resp;
    resp.text = std::move(replies_.front());
    replies_.pop_front();
    resp.provider = name_;
    return resp;
}

std::size_t ScriptedBackend::calls() const {
    std::lock_guard lock(mutex_);
    return received_.size();
}

std::size_t ScriptedBackend::remaining() const {
    std::lock_guard lock(mutex_);
    return replies_.size();
}

std::vector<ChatRequest> ScriptedBackend::requests() const {
    std::lock_guard lock(mutex_);
    return received_;
}

// ---------------------------------------------------------------------------
// RemoteBackend
// ---------------------------------------------------------------------------

namespace {

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

SplitUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("url without scheme: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

RemoteBackend::RemoteBackend(RemoteBackendConfig config) : config_(std::move(config)) {
    if (config_.max_attempts < 1) throw ConfigError("max_attempts must be >= 1");
    split_url(config_.url);
}

ChatResponse RemoteBackend::complete(const ChatRequest& request) {
    const auto [origin, path] = split_url(config_.url);

    json body = {{"system", request.system_prompt}, {"temperature", request.temperature}};
    body["turns"] = json::array();
    for (const auto& t : request.turns) body["turns"].push_back({{"role", to_string(t.role)}, {"text", t.text}});
    const std::string payload = body.dump();

    httplib::Headers headers;
    if (!config_.credential_env.empty()) {
        if (const char* cred = std::getenv(config_.credential_env.c_str())) {
            headers.emplace("Authorization", std::string("Bearer ") + cred);
        }
    }

    httplib::Client client(origin);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);

    bool last_was_rate_limit = false;
    std::string last_error;
    auto backoff = config_.initial_backoff;
    last_attempts_ = 0;
    for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
        last_attempts_ = attempt;
        if (attempt > 1) {
            std::this_thread::sleep_for(backoff);
            backoff *= 2;
        }
        auto res = client.Post(path, headers, payload, "application/json");
        if (!res) {
            last_was_rate_limit = false;
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 429) {
            last_was_rate_limit = true;
            last_error = "HTTP 429";
            continue;
        }
        last_was_rate_limit = false;
        if (res->status != 200) {
            last_error = fmt::format("HTTP {}", res->status);
            continue;
        }
        try {
            const auto reply = json::parse(res->body);
            ChatResponse out;
            out.text = reply.at("text").get<std::string>();
            out.provider = name();
            if (auto it = reply.find("usage"); it != reply.end() && it->is_object()) {
                out.usage.prompt_tokens = it->value("prompt_tokens", std::int64_t{0});
                out.usage.completion_tokens = it->value("completion_tokens", std::int64_t{0});
            }
            if (out.usage.prompt_tokens < 0 || out.usage.completion_tokens < 0) {
                throw json::other_error::create(599, "negative token usage", &reply);
            }
            return out;
        } catch (const json::exception& e) {
            last_error = std::string("malformed reply: ") + e.what();
        }
    }
    const auto msg = fmt::format("{} failed after {} attempts ({})", config_.url, last_attempts_, last_error);
    if (last_was_rate_limit) throw RateLimited(msg);
    throw ProviderUnreachable(msg);
}

ChatResponse complete(const ChatRequest& request, ChatBackend& backend) {
    request.validate();
    return backend.complete(request);
}

// ---------------------------------------------------------------------------
// Schemas
// ---------------------------------------------------------------------------

namespace {

std::optional<ValidationIssue> schema_issue(std::string message) {
    return ValidationIssue{"schema", std::move(message)};
}

bool non_empty_string(const json& j, const char* key) {
    auto it = j.find(key);
    return it != j.end() && it->is_string() && !it->get<std::string>().empty();
}

std::optional<ValidationIssue> validate_proposal(const json& j) {
    if (!j.is_object()) return schema_issue("expected a JSON object");
    if (!non_empty_string(j, "thought")) return schema_issue("\"thought\" must be a non-empty string");
    auto stop = j.find("stop");
    if (stop == j.end() || !stop->is_boolean()) return schema_issue("\"stop\" must be a boolean");
    if (stop->get<bool>()) {
        if (!non_empty_string(j, "stop_rationale")) {
            return schema_issue("\"stop_rationale\" must be a non-empty string when stop is true");
        }
        return std::nullopt;
    }
    if (!non_empty_string(j, "sub_aspect")) return schema_issue("\"sub_aspect\" must be a non-empty string");
    if (!non_empty_string(j, "tool_id")) return schema_issue("\"tool_id\" must be a non-empty string");
    auto count = j.find("prompt_count");
    if (count == j.end() || !count->is_number_integer()) return schema_issue("\"prompt_count\" must be an integer");
    return std::nullopt;
}

std::optional<ValidationIssue> validate_prompts(const json& j) {
    if (!j.is_object()) return schema_issue("expected a JSON object");
    auto it = j.find("prompts");
    if (it == j.end() || !it->is_array() || it->empty()) return schema_issue("\"prompts\" must be a non-empty array");
    for (const auto& p : *it) {
        if (!p.is_object() || !non_empty_string(p, "text") || !non_empty_string(p, "rationale")) {
            return schema_issue("each prompt needs non-empty \"text\" and \"rationale\"");
        }
    }
    return std::nullopt;
}

std::optional<ValidationIssue> validate_questions(const json& j) {
    if (!j.is_object()) return schema_issue("expected a JSON object");
    auto it = j.find("questions");
    if (it == j.end() || !it->is_array() || it->empty() || it->size() > 3) {
        return schema_issue("\"questions\" must be an array of 1 to 3 entries");
    }
    for (const auto& q : *it) {
        if (!q.is_object() || !non_empty_string(q, "text")) return schema_issue("each question needs \"text\"");
        const auto text = q.at("text").get<std::string>();
        if (text.back() != '?') return schema_issue("question \"" + text + "\" does not end with '?'");
        auto form = q.find("expected_form");
        if (form == q.end() || !form->is_string() || !parse_answer_form(form->get<std::string>())) {
            return schema_issue("\"expected_form\" must be \"yes_no\" or \"scale_1_5\"");
        }
    }
    return std::nullopt;
}

std::optional<ValidationIssue> validate_summary(const json& j) {
    if (!j.is_object()) return schema_issue("expected a JSON object");
    if (!non_empty_string(j, "narrative")) return schema_issue("\"narrative\" must be a non-empty string");
    auto ev = j.find("evidence");
    if (ev == j.end() || !ev->is_object()) return schema_issue("\"evidence\" must be an object");
    for (const auto& [k, v] : ev->items()) {
        if (!v.is_string()) return schema_issue("evidence for \"" + k + "\" must be a string");
    }
    return std::nullopt;
}

std::optional<ValidationIssue> validate_vqa_answer(const json& j) {
    if (!j.is_object()) return schema_issue("expected a JSON object");
    auto it = j.find("answer");
    if (it == j.end()) return schema_issue("missing \"answer\"");
    if (it->is_string()) {
        const auto a = it->get<std::string>();
        if (a == "yes" || a == "no") return std::nullopt;
    } else if (it->is_number_integer()) {
        const auto k = it->get<int>();
        if (k >= 1 && k <= 5) return std::nullopt;
    }
    return schema_issue("\"answer\" must be \"yes\", \"no\" or an integer 1..5");
}

}  // namespace

void SchemaRegistry::add(std::string schema_hint, JsonValidator validator) {
    validators_[std::move(schema_hint)] = std::move(validator);
}

bool SchemaRegistry::contains(const std::string& schema_hint) const { return validators_.count(schema_hint) > 0; }

const JsonValidator& SchemaRegistry::get(const std::string& schema_hint) const {
    auto it = validators_.find(schema_hint);
    if (it == validators_.end()) throw PreconditionError("schema \"" + schema_hint + "\" is not registered");
    return it->second;
}

const SchemaRegistry& SchemaRegistry::builtin() {
    static const SchemaRegistry registry = [] {
        SchemaRegistry r;
        r.add(schema::kProposal, validate_proposal);
        r.add(schema::kPrompts, validate_prompts);
        r.add(schema::kQuestions, validate_questions);
        r.add(schema::kSummary, validate_summary);
        r.add(schema::kVqaAnswer, validate_vqa_answer);
        return r;
    }();
    return registry;
}

std::string corrective_turn_text(const ValidationIssue& issue) {
    return fmt::format(
        "Your previous reply was rejected ({}): {}\n"
        "Reply again with a single JSON object that satisfies the required format and nothing else.",
        issue.code, issue.message);
}

std::optional<json> extract_json_payload(const std::string& text) {
    std::string_view body = text;
    auto trim = [](std::string_view s) {
        const auto first = s.find_first_not_of(" \t\r\n");
        if (first == std::string_view::npos) return std::string_view{};
        const auto last = s.find_last_not_of(" \t\r\n");
        return s.substr(first, last - first + 1);
    };
    body = trim(body);
    if (body.substr(0, 3) == "```") {
        const auto newline = body.find('\n');
        const auto close = body.rfind("```");
        if (newline != std::string_view::npos && close != std::string_view::npos && close > newline) {
            body = trim(body.substr(newline + 1, close - newline - 1));
        }
    }
    try {
        return json::parse(body);
    } catch (const json::parse_error&) {
        return std::nullopt;
    }
}

StructuredResult complete_structured(ChatRequest request, ChatBackend& backend, int max_parse_retries,
                                     const JsonValidator& extra, const SchemaRegistry& registry) {
    if (max_parse_retries < 0) throw PreconditionError("max_parse_retries must be >= 0");
    const auto& validator = registry.get(request.schema_hint);

    ValidationIssue last;
    const int max_attempts = max_parse_retries + 1;
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        const auto response = complete(request, backend);
        std::optional<ValidationIssue> issue;
        auto parsed = extract_json_payload(response.text);
        if (!parsed) {
            issue = ValidationIssue{"parse_error", "reply is not valid JSON"};
        } else {
            issue = validator(*parsed);
            if (!issue && extra) issue = extra(*parsed);
        }
        if (!issue) return {std::move(*parsed), attempt};
        last = *issue;
        if (attempt < max_attempts) request.turns.push_back({ChatRole::user, corrective_turn_text(last)});
    }
    throw StructuredOutputFailure(
        fmt::format("schema \"{}\" not satisfied after {} attempts: {}", request.schema_hint, max_attempts,
                    last.message),
        last.code, max_attempts);
}

}  // namespace evalagent
