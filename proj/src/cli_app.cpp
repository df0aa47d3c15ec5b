// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

#include "evalagent/cli_app.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "evalagent/config.hpp"
#include "evalagent/error.hpp"
#include "evalagent/json_codec.hpp"
#include "evalagent/results_store.hpp"
#include "evalagent/tiering.hpp"
#include "evalagent/validation_harness.hpp"

namespace evalagent {

namespace {

struct EvaluateArgs {
    std::string query_file, model, config, workspace;
    std::uint64_t seed = 0;
    bool no_store = false;
};

struct ValidateArgs {
    std::string query_file, model, config, workspace, seeds, csv;
    std::vector<std::string> truths;
    int trials = 10;
    int baseline_samples = 0;
    double baseline_minutes = 0.0;
};

struct CalibrateArgs {
    std::string scores_file, dimension, source = "sample_density", provenance, out;
};

struct StoreArgs {
    std::string store, config;
};

struct CompareArgs {
    std::string a, b, dimension;
    StoreArgs store;
};

struct RecommendArgs {
    std::string requirements_file, candidates;
    StoreArgs store;
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::filesystem::path store_path(const StoreArgs& a) {
    if (!a.store.empty()) return a.store;
    if (!a.config.empty()) return load_config(a.config).store;
    throw ConfigError("pass --store or --config to locate the results store");
}

UserQuery load_query(const std::string& path) {
    auto q = decode<UserQuery>(read_json_file(path), path);
    if (q.id.empty() || q.text.empty()) throw ValidationError(path + ": query needs id and text");
    return q;
}

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
    const auto cfg = load_config(a.config);
    const auto templates = TemplateSet::load(cfg.templates.string());
    const auto query = load_query(a.query_file);
    const auto& model = cfg.model(a.model);
    const auto workspace = a.workspace.empty() ? cfg.workspace : std::filesystem::path(a.workspace);
    const auto outcome = run_configured_session(cfg, templates, query, model, a.seed, workspace);
    const auto dir = session_directory(workspace, query.id, a.seed);
    if (!a.no_store) {
        auto store = ResultsStore::open(cfg.store);
        err << "stored report " << store.record(outcome.report) << "\n";
    }
    err << "trace: " << (dir / "trace.jsonl").string() << "\nreport: " << (dir / "report.json").string() << "\n";
    out << render_report(outcome.report);
    return kExitOk;
}

int cmd_validate(const ValidateArgs& a, std::ostream& out, std::ostream& err) {
    const auto cfg = load_config(a.config);
    const auto templates = TemplateSet::load(cfg.templates.string());
    const auto query = load_query(a.query_file);
    const auto& model = cfg.model(a.model);
    const auto workspace =
        (a.workspace.empty() ? cfg.workspace : std::filesystem::path(a.workspace)) / ("validate-" + model.id);

    std::vector<std::uint64_t> seeds;
    if (a.seeds.empty()) {
        for (int i = 1; i <= a.trials; ++i) seeds.push_back(static_cast<std::uint64_t>(i));
    } else {
        for (const auto& s : split_list(a.seeds)) seeds.push_back(std::stoull(s));
    }

    std::map<std::string, Tier> truth;
    if (model.mock_profile) truth = *model.mock_profile;
    for (const auto& t : a.truths) {
        const auto eq = t.find('=');
        const auto tier = eq == std::string::npos ? std::nullopt : parse_tier(t.substr(eq + 1));
        if (!tier) throw ConfigError("--truth expects dimension=Tier, got " + t);
        truth[t.substr(0, eq)] = *tier;
    }
    if (truth.empty()) throw ConfigError("no ground truth: use a mock model or pass --truth dimension=Tier");

    const TrialRunner runner = [&](std::uint64_t seed) {
        return run_configured_session(cfg, templates, query, model, seed, workspace).report;
    };
    const auto trials = run_trials(runner, a.trials, seeds, cfg.trial_concurrency);
    for (const auto& t : trials) {
        if (!t.report) err << "trial seed " << t.seed << " failed: " << t.error << "\n";
    }

    out << "| dimension | truth | exact / within one |\n|---|---|---|\n";
    for (const auto& [dim, tier] : truth) {
        const auto preds = predictions_for(trials, dim);
        if (std::none_of(preds.begin(), preds.end(), [](const auto& p) { return p.has_value(); })) continue;
        out << fmt::format("| {} | {} | {} |\n", dim, tier_label(tier),
                           format_accuracy(within_range_accuracy(preds, tier, 0), within_range_accuracy(preds, tier, 1)));
    }
    if (a.baseline_samples > 0 || a.baseline_minutes > 0.0) {
        const auto report = cost_report(trials, {a.baseline_samples, a.baseline_minutes});
        out << "\n" << report.markdown();
        if (!a.csv.empty()) {
            std::ofstream csv(a.csv, std::ios::binary | std::ios::trunc);
            csv << report.csv();
            if (!csv) throw StorageFailure("cannot write " + a.csv);
        }
    }
    return kExitOk;
}

std::vector<double> read_scores(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const auto text = buffer.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') {
        return decode<std::vector<double>>(parse_json(text, path), path);
    }
    std::vector<double> out;
    std::stringstream lines(text);
    for (std::string line; std::getline(lines, line);) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(line, &used));
            if (line.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(line);
        } catch (const std::logic_error&) {
            throw ValidationError(path + ": not a number: " + line);
        }
    }
    return out;
}

int cmd_calibrate(const CalibrateArgs& a, std::ostream& out) {
    CalibrationSource source = CalibrationSource::sample_density;
    if (a.source == "leaderboard") {
        source = CalibrationSource::leaderboard;
    } else if (a.source != "sample_density") {
        throw ConfigError("--source must be sample_density or leaderboard");
    }
    const auto scores = read_scores(a.scores_file);
    const auto provenance = a.provenance.empty() ? a.scores_file : a.provenance;
    const auto scale = tiering::calibrate(scores, source, a.dimension, provenance);
    const auto text = json(scale).dump(2) + "\n";
    if (!a.out.empty()) {
        std::ofstream f(a.out, std::ios::binary | std::ios::trunc);
        f << text;
        if (!f) throw StorageFailure("cannot write " + a.out);
    }
    out << text;
    return kExitOk;
}

int cmd_compare(const CompareArgs& a, std::ostream& out) {
    const auto store = ResultsStore::open(store_path(a.store));
    const auto c = store.compare(a.a, a.b, a.dimension);
    out << json{{"dimension", a.dimension},
                {"a", {{"model", a.a}, {"tier", c.tier_a}}},
                {"b", {{"model", a.b}, {"tier", c.tier_b}}},
                {"verdict", to_string(c.verdict)}}
               .dump(2)
        << "\n";
    return kExitOk;
}

int cmd_recommend(const RecommendArgs& a, std::ostream& out) {
    const auto store = ResultsStore::open(store_path(a.store));
    const auto requirements = load_requirements(a.requirements_file);
    const auto candidates = split_list(a.candidates);
    json ranked = json::array();
    for (const auto& r : store.recommend(requirements, candidates)) {
        ranked.push_back({{"model", r.model_id}, {"exceeding", r.exceeding}, {"mean_level", r.mean_level}});
    }
    out << ranked.dump(2) << "\n";
    return kExitOk;
}

int cmd_replay(const std::string& trace, std::ostream& out) {
    out << render_report(replay_trace(read_trace_file(trace)));
    return kExitOk;
}

void add_store_options(CLI::App* cmd, StoreArgs& s) {
    cmd->add_option("--store", s.store, "Results store file");
    cmd->add_option("--config", s.config, "Config file naming the store");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Adaptive, query-driven evaluation of visual generative models", "evalagent"};
    app.require_subcommand(1);

    EvaluateArgs ev;
    auto* evaluate = app.add_subcommand("evaluate", "Run one evaluation session");
    evaluate->add_option("--query-file", ev.query_file, "Query JSON")->required();
    evaluate->add_option("--model", ev.model, "Model id from the config")->required();
    evaluate->add_option("--config", ev.config, "Config JSON")->required();
    evaluate->add_option("--seed", ev.seed, "Session seed");
    evaluate->add_option("--workspace", ev.workspace, "Override the configured workspace");
    evaluate->add_flag("--no-store", ev.no_store, "Do not record the report in the results store");

    ValidateArgs va;
    auto* validate = app.add_subcommand("validate", "Repeated-trial accuracy and cost validation");
    validate->add_option("--query-file", va.query_file, "Query JSON")->required();
    validate->add_option("--model", va.model, "Model id from the config")->required();
    validate->add_option("--config", va.config, "Config JSON")->required();
    validate->add_option("--trials", va.trials, "Number of trials")->check(CLI::PositiveNumber);
    validate->add_option("--seeds", va.seeds, "Comma-separated trial seeds (default 1..trials)");
    validate->add_option("--truth", va.truths, "dimension=Tier ground truth (repeatable)");
    validate->add_option("--baseline-samples", va.baseline_samples, "Baseline sample count");
    validate->add_option("--baseline-minutes", va.baseline_minutes, "Baseline minutes");
    validate->add_option("--csv", va.csv, "Write the cost table as CSV");
    validate->add_option("--workspace", va.workspace, "Override the configured workspace");

    CalibrateArgs ca;
    auto* calibrate = app.add_subcommand("calibrate-tiers", "Derive tier cut points from reference scores");
    calibrate->add_option("--scores-file", ca.scores_file, "JSON list or one score per line")->required();
    calibrate->add_option("--dimension", ca.dimension, "Dimension id")->required();
    calibrate->add_option("--source", ca.source, "sample_density or leaderboard");
    calibrate->add_option("--provenance", ca.provenance, "Where the scores came from");
    calibrate->add_option("--out", ca.out, "Write the scale JSON here");

    CompareArgs co;
    auto* compare = app.add_subcommand("compare", "Compare two models on one dimension");
    compare->add_option("--a", co.a, "First model")->required();
    compare->add_option("--b", co.b, "Second model")->required();
    compare->add_option("--dimension", co.dimension, "Dimension id")->required();
    add_store_options(compare, co.store);

    RecommendArgs re;
    auto* recommend = app.add_subcommand("recommend", "Rank models meeting minimum tiers");
    recommend->add_option("--requirements-file", re.requirements_file, "JSON list of {dimension, min_tier}")
        ->required();
    recommend->add_option("--candidates", re.candidates, "Comma-separated model ids (default: all stored)");
    add_store_options(recommend, re.store);

    std::string trace;
    auto* replay = app.add_subcommand("replay-trace", "Rebuild the final report from a session trace");
    replay->add_option("--trace", trace, "trace.jsonl")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (*evaluate) return cmd_evaluate(ev, out, err);
        if (*validate) return cmd_validate(va, out, err);
        if (*calibrate) return cmd_calibrate(ca, out);
        if (*compare) return cmd_compare(co, out);
        if (*recommend) return cmd_recommend(re, out);
        if (*replay) return cmd_replay(trace, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitDomainError;
    }
    err << app.help();
    return kExitUsage;
}

}  // namespace evalagent
