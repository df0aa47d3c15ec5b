// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

namespace evalagent {

/// A template rendered into the two parts of a chat request.
struct RenderedPrompt {
    std::string system;
    std::string user;
};

/// Editable agent prompt templates, one `<id>.txt` file per template. Each
/// file holds a `[system]` section followed by a `[user]` section; `{{name}}`
/// placeholders are substituted at render time.
class TemplateSet {
public:
    static const std::vector<std::string>& required_ids();

    /// Loads every required template from `dir`. Throws TemplateError when a
    /// file is missing or lacks either section.
    static TemplateSet load(const std::string& dir);

    /// The directory shipped with the project.
    static std::string default_dir();

    void set(const std::string& id, std::string system, std::string user);

    /// Throws TemplateError for an unknown id or a placeholder with no value.
    RenderedPrompt render(const std::string& id, const std::map<std::string, std::string>& vars) const;

private:
    std::map<std::string, RenderedPrompt> templates_;
};

}  // namespace evalagent
