// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

// Append-only store of final reports. Each line of the store file is
// {"id": <sha256 hex of the canonical report JSON>, "report": FinalReport};
// the (model, dimension) index is rebuilt when the store is opened and the
// latest report for a pair wins.

#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "evalagent/core.hpp"

namespace evalagent {

enum class Verdict { a_better, b_better, tie };
std::string_view to_string(Verdict v) noexcept;

struct Comparison {
    Verdict verdict = Verdict::tie;
    Tier tier_a = Tier::Moderate;
    Tier tier_b = Tier::Moderate;
};

struct Requirement {
    std::string dimension_id;
    Tier min_tier = Tier::Moderate;
};

/// Reads a requirements file: [{"dimension": str, "min_tier": tier}, ...].
std::vector<Requirement> load_requirements(const std::string& path);

struct Recommendation {
    std::string model_id;
    int exceeding = 0;  // dimensions strictly above their minimum
    double mean_level = 0.0;
};

/// Hex SHA-256 of the report's canonical JSON.
std::string report_id(const FinalReport& report);

class ResultsStore {
public:
    /// Opens (creating when absent) the store at `path`. Throws StorageFailure
    /// naming the path when a line cannot be read back.
    static ResultsStore open(std::filesystem::path path);

    ResultsStore(ResultsStore&& other) noexcept;

    /// Appends the report unless identical content is already stored; returns
    /// its id either way. Throws StorageFailure or ValidationError.
    std::string record(const FinalReport& report);

    std::optional<FinalReport> fetch(const std::string& id) const;

    /// Latest stored tier for (model, dimension).
    std::optional<Tier> tier(const std::string& model_id, const std::string& dimension_id) const;

    /// Throws MissingEvaluation naming the absent (model, dimension).
    Comparison compare(const std::string& model_a, const std::string& model_b, const std::string& dimension_id) const;

    /// Candidates meeting every minimum, ranked by exceeding count (desc),
    /// mean tier level over the required dimensions (desc), then id. An
    /// empty candidate list means every model in the store. Throws
    /// PreconditionError for empty requirements.
    std::vector<Recommendation> recommend(std::span<const Requirement> requirements,
                                          std::span<const std::string> candidates = {}) const;

    std::vector<std::string> models() const;
    const std::filesystem::path& path() const { return path_; }

private:
    explicit ResultsStore(std::filesystem::path path);
    void index(const std::string& id, const FinalReport& report);

    std::filesystem::path path_;
    mutable std::mutex mu_;
    std::map<std::string, FinalReport> by_id_;
    std::map<std::pair<std::string, std::string>, Tier> latest_;
};

}  // namespace evalagent
