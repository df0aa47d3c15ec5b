// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

#include "evalagent/results_store.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "evalagent/error.hpp"
#include "evalagent/json_codec.hpp"

namespace evalagent {

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::a_better: return "a_better";
        case Verdict::b_better: return "b_better";
        case Verdict::tie: return "tie";
    }
    return "tie";
}

std::vector<Requirement> load_requirements(const std::string& path) {
    const auto j = read_json_file(path);
    if (!j.is_array()) throw ValidationError(path + ": requirements must be a JSON list");
    std::vector<Requirement> out;
    try {
        for (const auto& item : j) {
            out.push_back({item.at("dimension").get<std::string>(), item.at("min_tier").get<Tier>()});
        }
    } catch (const json::exception& e) {
        throw ValidationError(path + ": " + e.what());
    }
    return out;
}

std::string report_id(const FinalReport& report) {
    const auto canonical = json(report).dump();
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(canonical.data(), canonical.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw StorageFailure("SHA-256 digest failed");
    }
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

ResultsStore::ResultsStore(std::filesystem::path path) : path_(std::move(path)) {}

ResultsStore::ResultsStore(ResultsStore&& other) noexcept
    : path_(std::move(other.path_)), by_id_(std::move(other.by_id_)), latest_(std::move(other.latest_)) {}

ResultsStore ResultsStore::open(std::filesystem::path path) {
    ResultsStore store(std::move(path));
    std::error_code ec;
    if (!std::filesystem::exists(store.path_, ec)) return store;
    std::ifstream in(store.path_, std::ios::binary);
    if (!in) throw StorageFailure("cannot read " + store.path_.string());
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty()) continue;
        const bool terminated = !in.eof();
        try {
            if (!terminated) throw std::runtime_error("last line is not newline-terminated");
            const auto j = json::parse(line);
            const auto id = j.at("id").get<std::string>();
            const auto report = j.at("report").get<FinalReport>();
            if (report_id(report) != id) throw std::runtime_error("id does not match content");
            store.index(id, report);
        } catch (const std::exception& e) {
            throw StorageFailure(fmt::format("{}: line {}: {}", store.path_.string(), number, e.what()));
        }
    }
    return store;
}

void ResultsStore::index(const std::string& id, const FinalReport& report) {
    by_id_[id] = report;
    for (const auto& [dim, verdict] : report.per_dimension) latest_[{report.model_id, dim}] = verdict.tier;
}

std::string ResultsStore::record(const FinalReport& report) {
    if (report.model_id.empty() || report.per_dimension.empty()) {
        throw ValidationError("a stored report needs a model id and at least one dimension");
    }
    const auto id = report_id(report);
    std::lock_guard lock(mu_);
    if (by_id_.count(id)) return id;
    if (path_.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path_.parent_path(), ec);
    }
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    const json line{{"id", id}, {"report", report}};
    out << line.dump() << '\n';
    out.flush();
    if (!out) throw StorageFailure("cannot append to " + path_.string());
    index(id, report);
    return id;
}

std::optional<FinalReport> ResultsStore::fetch(const std::string& id) const {
    std::lock_guard lock(mu_);
    const auto it = by_id_.find(id);
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
}

std::optional<Tier> ResultsStore::tier(const std::string& model_id, const std::string& dimension_id) const {
    std::lock_guard lock(mu_);
    const auto it = latest_.find({model_id, dimension_id});
    if (it == latest_.end()) return std::nullopt;
    return it->second;
}

Comparison ResultsStore::compare(const std::string& model_a, const std::string& model_b,
                                 const std::string& dimension_id) const {
    const auto a = tier(model_a, dimension_id);
    if (!a) throw MissingEvaluation(fmt::format("no evaluation of {} on {}", model_a, dimension_id));
    const auto b = tier(model_b, dimension_id);
    if (!b) throw MissingEvaluation(fmt::format("no evaluation of {} on {}", model_b, dimension_id));
    Comparison c{Verdict::tie, *a, *b};
    if (*a > *b) c.verdict = Verdict::a_better;
    if (*a < *b) c.verdict = Verdict::b_better;
    return c;
}

std::vector<std::string> ResultsStore::models() const {
    std::lock_guard lock(mu_);
    std::set<std::string> ids;
    for (const auto& [key, tier] : latest_) ids.insert(key.first);
    return {ids.begin(), ids.end()};
}

std::vector<Recommendation> ResultsStore::recommend(std::span<const Requirement> requirements,
                                                    std::span<const std::string> candidates) const {
    if (requirements.empty()) throw PreconditionError("recommend needs at least one requirement");
    std::vector<std::string> pool(candidates.begin(), candidates.end());
    if (pool.empty()) pool = models();
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

    std::vector<Recommendation> out;
    for (const auto& model : pool) {
        Recommendation r{model, 0, 0.0};
        bool meets = true;
        for (const auto& req : requirements) {
            const auto t = tier(model, req.dimension_id);
            if (!t || *t < req.min_tier) {
                meets = false;
                break;
            }
            if (*t > req.min_tier) ++r.exceeding;
            r.mean_level += level(*t);
        }
        if (!meets) continue;
        r.mean_level /= static_cast<double>(requirements.size());
        out.push_back(r);
    }
    std::sort(out.begin(), out.end(), [](const Recommendation& a, const Recommendation& b) {
        if (a.exceeding != b.exceeding) return a.exceeding > b.exceeding;
        if (a.mean_level != b.mean_level) return a.mean_level > b.mean_level;
        return a.model_id < b.model_id;
    });
    return out;
}

}  // namespace evalagent
