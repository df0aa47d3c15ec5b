// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>

#include <gtest/gtest.h>

#include "evalagent/core.hpp"
#include "evalagent/error.hpp"
#include "test_support.hpp"

namespace evalagent {
namespace {

using testing::closed_query;
using testing::mock_model;
using testing::mock_tool;
using testing::MockWorld;
using testing::proposal;
using testing::summary_reply;

bool mentions(const std::vector<std::string>& issues, const std::string& needle) {
    return std::any_of(issues.begin(), issues.end(),
                       [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

EvaluationSession three_round_session() {
    MockWorld world({mock_tool("aes", "aesthetic")}, mock_model("m1", {{"aesthetic", Tier::High}}));
    world.limits.min_rounds = 3;
    const auto out = world.run({{proposal("a", "aes", 5), proposal("b", "aes", 9), proposal("c", "aes", 9),
                                 testing::stop_reply(), summary_reply(3, {"aesthetic"})}},
                               11, closed_query());
    return out.session;
}

TEST(Tier, OrderingAndLevels) {
    EXPECT_LT(Tier::VeryLow, Tier::Low);
    EXPECT_GT(Tier::VeryHigh, Tier::High);
    EXPECT_EQ(level(Tier::Moderate), 3);
    EXPECT_EQ(tier_from_level(5), Tier::VeryHigh);
    EXPECT_THROW(tier_from_level(0), PreconditionError);
    EXPECT_THROW(tier_from_level(6), PreconditionError);
}

TEST(Tier, IdAndLabelForms) {
    EXPECT_EQ(tier_id(Tier::VeryHigh), "VeryHigh");
    EXPECT_EQ(tier_label(Tier::VeryHigh), "Very High");
    EXPECT_EQ(parse_tier("Very Low"), Tier::VeryLow);
    EXPECT_EQ(parse_tier("Moderate"), Tier::Moderate);
    EXPECT_FALSE(parse_tier("Medium").has_value());
}

TEST(Enums, RoundTripThroughStrings) {
    for (auto m : {QueryMode::closed_domain, QueryMode::open_ended}) EXPECT_EQ(parse_query_mode(to_string(m)), m);
    for (auto m : {Modality::text_to_image, Modality::text_to_video}) EXPECT_EQ(parse_modality(to_string(m)), m);
    for (auto k : {ScoreKind::continuous, ScoreKind::binary}) EXPECT_EQ(parse_score_kind(to_string(k)), k);
    for (auto s : {StopReason::planner_stop, StopReason::max_rounds, StopReason::sample_budget}) {
        EXPECT_EQ(parse_stop_reason(to_string(s)), s);
    }
}

TEST(QueryTags, VocabularyCoversAllAxes) {
    for (const char* tag : {"Prompt Following", "Visual Quality", "Creativity", "Knowledge", "Others", "General",
                            "Specific Domain", "Medical", "History and Culture"}) {
        EXPECT_TRUE(is_known_query_tag(tag)) << tag;
    }
    EXPECT_FALSE(is_known_query_tag("Speed"));
}

TEST(LoopLimits, DefaultsAreValid) {
    LoopLimits l;
    EXPECT_NO_THROW(l.validate());
    EXPECT_EQ(l.max_total_samples, 30);
}

TEST(LoopLimits, RejectsBrokenInvariants) {
    EXPECT_THROW((LoopLimits{0, 5, 30, 1}.validate()), ValidationError);
    EXPECT_THROW((LoopLimits{3, 2, 30, 1}.validate()), ValidationError);
    EXPECT_THROW((LoopLimits{2, 5, 8, 1}.validate()), ValidationError);
    EXPECT_THROW((LoopLimits{2, 5, 30, 0}.validate()), ValidationError);
}

TEST(ValidateSessionArtifacts, WellFormedThreeRoundSessionHasNoIssues) {
    const auto session = three_round_session();
    ASSERT_EQ(session.rounds.size(), 3u);
    EXPECT_EQ(validate_session_artifacts(session), std::vector<std::string>{});
}

TEST(ValidateSessionArtifacts, FlagsPromptCountOutOfBounds) {
    auto session = three_round_session();
    session.rounds[0].proposal.prompt_count = 12;
    const auto issues = validate_session_artifacts(session);
    EXPECT_TRUE(mentions(issues, "prompt_count out of 3..9")) << ::testing::PrintToString(issues);
}

TEST(ValidateSessionArtifacts, FlagsDanglingSampleReference) {
    auto session = three_round_session();
    session.rounds[1].scores[0].sample_id = "no-such-sample";
    EXPECT_TRUE(mentions(validate_session_artifacts(session), "dangling sample reference"));
}

TEST(ValidateSessionArtifacts, FlagsReportInconsistencies) {
    auto session = three_round_session();
    session.report->cost.total_samples += 1;
    session.report->rounds_used = 2;
    const auto issues = validate_session_artifacts(session);
    EXPECT_TRUE(mentions(issues, "total_samples"));
    EXPECT_TRUE(mentions(issues, "rounds_used"));
}

TEST(ValidateSessionArtifacts, FlagsLibraryPromptWithoutReference) {
    auto session = three_round_session();
    session.rounds[0].prompts[0].library_ref.reset();
    EXPECT_FALSE(validate_session_artifacts(session).empty());
}

TEST(CostLedger, AddRoundAccumulates) {
    CostLedger c;
    c.add_round({5, 60.0});
    c.add_round({9, 100.5});
    EXPECT_EQ(c.total_samples, 14);
    EXPECT_DOUBLE_EQ(c.wall_clock, 160.5);
    EXPECT_EQ(c.per_round.size(), 2u);
}

}  // namespace
}  // namespace evalagent
