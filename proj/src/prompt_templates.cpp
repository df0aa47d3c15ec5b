// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

#include "evalagent/prompt_templates.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "evalagent/error.hpp"

namespace evalagent {

namespace {

std::string substitute(const std::string& text, const std::map<std::string, std::string>& vars,
                       const std::string& id) {
    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    while (true) {
        const auto open = text.find("{{", pos);
        if (open == std::string::npos) {
            out.append(text, pos, std::string::npos);
            break;
        }
        const auto close = text.find("}}", open + 2);
        if (close == std::string::npos) throw TemplateError(id + ": unterminated placeholder");
        out.append(text, pos, open - pos);
        const auto name = text.substr(open + 2, close - open - 2);
        auto it = vars.find(name);
        if (it == vars.end()) throw TemplateError(id + ": no value for {{" + name + "}}");
        out += it->second;
        pos = close + 2;
    }
    return out;
}

std::string trim_newlines(std::string s) {
    while (!s.empty() && (s.front() == '\n' || s.front() == '\r')) s.erase(s.begin());
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
}

}  // namespace

const std::vector<std::string>& TemplateSet::required_ids() {
    static const std::vector<std::string> ids = {
        "plan_initial", "plan_next", "plan_summarize", "promptgen_design", "promptgen_questions", "vqa_answer",
    };
    return ids;
}

std::string TemplateSet::default_dir() {
#ifdef EVALAGENT_DEFAULT_TEMPLATE_DIR
    return EVALAGENT_DEFAULT_TEMPLATE_DIR;
#else
    return "templates";
#endif
}

TemplateSet TemplateSet::load(const std::string& dir) {
    TemplateSet set;
    for (const auto& id : required_ids()) {
        const auto path = std::filesystem::path(dir) / (id + ".txt");
        std::ifstream in(path);
        if (!in) throw TemplateError("missing template file " + path.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        const std::string text = buf.str();
        const auto sys = text.find("[system]");
        const auto usr = text.find("[user]");
        if (sys == std::string::npos || usr == std::string::npos || usr < sys) {
            throw TemplateError(path.string() + ": expected [system] then [user] sections");
        }
        set.set(id, trim_newlines(text.substr(sys + 8, usr - sys - 8)), trim_newlines(text.substr(usr + 6)));
    }
    return set;
}

void TemplateSet::set(const std::string& id, std::string system, std::string user) {
    templates_[id] = RenderedPrompt{std::move(system), std::move(user)};
}

RenderedPrompt TemplateSet::render(const std::string& id, const std::map<std::string, std::string>& vars) const {
    auto it = templates_.find(id);
    if (it == templates_.end()) throw TemplateError("unknown template " + id);
    return {substitute(it->second.system, vars, id), substitute(it->second.user, vars, id)};
}

}  // namespace evalagent
