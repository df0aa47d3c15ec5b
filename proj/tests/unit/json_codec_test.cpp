// Copyright 2026 The EvalAgent Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <gtest/gtest.h>

#include "evalagent/error.hpp"
#include "evalagent/json_codec.hpp"
#include "test_support.hpp"

namespace evalagent {
namespace {

template <typename T>
T round_trip(const T& v) {
    return json::parse(json(v).dump()).get<T>();
}

TEST(JsonCodec, TierEncodesAsIdAndAcceptsLevels) {
    EXPECT_EQ(json(Tier::VeryHigh), "VeryHigh");
    EXPECT_EQ(json(4).get<Tier>(), Tier::High);
    EXPECT_EQ(json("Very Low").get<Tier>(), Tier::VeryLow);
    EXPECT_THROW(json("Great").get<Tier>(), json::exception);
    EXPECT_THROW(json(9).get<Tier>(), json::exception);
}

TEST(JsonCodec, OptionalFieldsAreOmittedWhenAbsent) {
    PromptSpec p{"r1-p1", "a fox", "why", PromptSource::generated, std::nullopt, {}};
    const json j = p;
    EXPECT_FALSE(j.contains("library_ref"));
    ToolScore s{"s1", "t", 0.5, ScoreKind::continuous, std::nullopt};
    EXPECT_FALSE(json(s).contains("detail"));
}

TEST(JsonCodec, DecodeWrapsErrorsAsValidationError) {
    EXPECT_THROW(decode<UserQuery>(json{{"id", "q"}}, "query"), ValidationError);
    EXPECT_THROW(decode<UserQuery>(json{{"id", "q"}, {"text", "t"}, {"mode", "sideways"}}, "query"),
                 ValidationError);
}

TEST(JsonCodec, ParseJsonReportsValidationError) {
    EXPECT_THROW(parse_json("{oops", "input"), ValidationError);
}

// Property: every record produced by a real session survives a JSON round trip.
TEST(JsonCodec, SessionRecordsRoundTrip) {
    using namespace testing;
    MockWorld world({mock_tool("aes", "aesthetic"), mock_tool("cnt", "count", ScoreKind::binary)},
                    mock_model("m1", {{"aesthetic", Tier::High}, {"count", Tier::Low}}));
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        std::uniform_int_distribution<int> count(3, 9);
        const auto out = world.run({{proposal("a", "aes", count(rng)), proposal("b", "cnt", count(rng)), stop_reply(),
                                     summary_reply(2, {"aesthetic", "count"})}},
                                   static_cast<std::uint64_t>(trial), closed_query());
        EXPECT_EQ(round_trip(out.report), out.report);
        EXPECT_EQ(round_trip(out.session.query), out.session.query);
        EXPECT_EQ(round_trip(out.session.model), out.session.model);
        for (const auto& r : out.session.rounds) EXPECT_EQ(round_trip(r), r);
    }
}

TEST(JsonCodec, ReportRenderingIsStableAndSorted) {
    FinalReport r;
    r.query_id = "q";
    r.model_id = "m";
    r.per_dimension["b"] = {Tier::Low, "e"};
    r.per_dimension["a"] = {Tier::High, "e"};
    const auto text = render_report(r);
    EXPECT_EQ(text.back(), '\n');
    EXPECT_LT(text.find("\"a\""), text.find("\"b\""));
    EXPECT_EQ(text, render_report(round_trip(r)));
}

}  // namespace
}  // namespace evalagent
