#include <gtest/gtest.h>

#include "arena/adjudicate.hpp"
#include "checks.hpp"
#include "support.hpp"

namespace arena {
namespace {

const std::string kRoundFiveReasoning =
    "Agent B correctly identified the 'Sega Game Gear'... Agent A incorrectly identified the "
    "'NEC TurboExpress'. The failure to identify the correct core entity is a critical logic "
    "failure.";

Task judge_task() {
  Task t;
  t.question =
      "Identify the dominant 8-bit console and its two main competitors (1989 & 1991). Compare "
      "battery requirements. Describe the 1996 'Pocket' revision changes.";
  t.word_limit_instruction = "Maximum 520 words";
  t.checklist_width = {"Battery life comparison", "Pocket revision: AAA batteries"};
  t.checklist_depth = {"Game Boy", "Sega Game Gear"};
  return t;
}

// ---- Verdict parsing -----------------------------------------------------------

TEST(ParseVerdict, RoundFivePayload) {
  const Verdict v = parse_verdict(fx::verdict_reply("[[B_MUCH_BETTER]]", "N/A", "DEEP", kRoundFiveReasoning));
  EXPECT_EQ(v.outcome, Outcome::kBMuchBetter);
  EXPECT_EQ(v.tie_quality, TieQuality::kNA);
  EXPECT_EQ(v.loser_failure_type, FailureType::kDeep);
  EXPECT_EQ(v.reasoning, kRoundFiveReasoning);
}

TEST(ParseVerdict, EveryOutcomeToken) {
  const std::pair<const char*, Outcome> cases[] = {
      {"[[A_MUCH_BETTER]]", Outcome::kAMuchBetter}, {"[[A_BETTER]]", Outcome::kABetter},
      {"[[B_BETTER]]", Outcome::kBBetter},          {"[[B_MUCH_BETTER]]", Outcome::kBMuchBetter},
      {"a_better", Outcome::kABetter},              {" [[b_better]] ", Outcome::kBBetter}};
  for (const auto& [token, outcome] : cases)
    EXPECT_EQ(parse_verdict(fx::verdict_reply(token, "N/A", "WIDE")).outcome, outcome) << token;
}

TEST(ParseVerdict, TieWithQuality) {
  const Verdict high = parse_verdict(fx::verdict_reply("[[Tie]]", "HIGH", "NONE"));
  EXPECT_TRUE(high.is_tie());
  EXPECT_EQ(high.tie_quality, TieQuality::kHigh);
  EXPECT_EQ(parse_verdict(fx::verdict_reply("[[TIE]]", "low", "none")).tie_quality, TieQuality::kLow);
}

TEST(ParseVerdict, InconsistentFields) {
  EXPECT_ARENA_ERROR(parse_verdict(fx::verdict_reply("[[Tie]]", "N/A", "NONE")),
                     ErrorCode::kInconsistentFields);
  EXPECT_ARENA_ERROR(parse_verdict(fx::verdict_reply("[[Tie]]", "HIGH", "DEEP")),
                     ErrorCode::kInconsistentFields);
  EXPECT_ARENA_ERROR(parse_verdict(fx::verdict_reply("[[A_BETTER]]", "LOW", "WIDE")),
                     ErrorCode::kInconsistentFields);
}

TEST(ParseVerdict, DefaultsForOptionalFields) {
  const Verdict v = parse_verdict(R"({"verdict": "[[A_BETTER]]"})");
  EXPECT_EQ(v.tie_quality, TieQuality::kNA);
  EXPECT_EQ(v.loser_failure_type, FailureType::kNone);
  EXPECT_EQ(v.reasoning, "");
  // A bare tie has no quality and so cannot stand.
  EXPECT_ARENA_ERROR(parse_verdict(R"({"verdict": "[[Tie]]"})"), ErrorCode::kInconsistentFields);
}

TEST(ParseVerdict, Rejections) {
  EXPECT_ARENA_ERROR(parse_verdict(""), ErrorCode::kMalformedJson);
  EXPECT_ARENA_ERROR(parse_verdict("A is better."), ErrorCode::kMalformedJson);
  EXPECT_ARENA_ERROR(parse_verdict(R"({"tie_quality": "N/A"})"), ErrorCode::kMissingField);
  EXPECT_ARENA_ERROR(parse_verdict(R"({"verdict": 3})"), ErrorCode::kUnknownEnum);
  EXPECT_ARENA_ERROR(parse_verdict(R"({"verdict": "[[C_BETTER]]"})"), ErrorCode::kUnknownEnum);
  EXPECT_ARENA_ERROR(parse_verdict(R"({"verdict": "[[A_BETTER]]", "loser_failure_type": "SHALLOW"})"),
                     ErrorCode::kUnknownEnum);
  EXPECT_ARENA_ERROR(parse_verdict(R"({"verdict": "[[Tie]]", "tie_quality": "MEDIUM"})"),
                     ErrorCode::kUnknownEnum);
}

TEST(ParseVerdict, JsonAmidProse) {
  const Verdict v = parse_verdict(
      "After careful review:\n{\"verdict\": \"[[A_BETTER]]\", \"tie_quality\": \"N/A\", "
      "\"loser_failure_type\": \"WIDE\", \"reasoning\": \"B missed {two} facts\"}\nThanks.");
  EXPECT_EQ(v.outcome, Outcome::kABetter);
  EXPECT_EQ(v.reasoning, "B missed {two} facts");
}

TEST(ParseVerdict, RoundTripProperty) {
  const Outcome outcomes[] = {Outcome::kAMuchBetter, Outcome::kABetter, Outcome::kTie,
                              Outcome::kBBetter, Outcome::kBMuchBetter};
  const FailureType failures[] = {FailureType::kDeep, FailureType::kWide, FailureType::kBoth,
                                  FailureType::kNone};
  int checked = 0;
  for (Outcome o : outcomes) {
    for (TieQuality q : {TieQuality::kHigh, TieQuality::kLow, TieQuality::kNA}) {
      for (FailureType f : failures) {
        Verdict v{o, q, f, "why"};
        bool consistent = true;
        try {
          validate(v);
        } catch (const Error&) {
          consistent = false;
        }
        if (!consistent) continue;
        EXPECT_EQ(parse_verdict(v.to_json().dump()), v);
        EXPECT_EQ(parse_verdict("```json\n" + v.to_json().dump(2) + "\n```"), v);
        ++checked;
      }
    }
  }
  // 4 decisive outcomes x 4 failure types + tie x {HIGH, LOW}.
  EXPECT_EQ(checked, 18);
}

TEST(Outcome, MirrorIsAnInvolution) {
  for (Outcome o : {Outcome::kAMuchBetter, Outcome::kABetter, Outcome::kTie, Outcome::kBBetter,
                    Outcome::kBMuchBetter}) {
    EXPECT_EQ(mirrored(mirrored(o)), o);
    const auto [a, b] = score_delta(Verdict{o, TieQuality::kNA, FailureType::kNone, ""});
    const auto [ma, mb] = score_delta(Verdict{mirrored(o), TieQuality::kNA, FailureType::kNone, ""});
    EXPECT_EQ(a, mb);
    EXPECT_EQ(b, ma);
  }
  EXPECT_EQ(outcome_from_string(to_string(Outcome::kBMuchBetter)), Outcome::kBMuchBetter);
  EXPECT_EQ(to_string(Outcome::kTie), "[[Tie]]");
}

// ---- Scoring and citations -----------------------------------------------------------

TEST(ScoreDelta, RubricPoints) {
  auto delta = [](Outcome o) { return score_delta(Verdict{o, TieQuality::kNA, FailureType::kNone, ""}); };
  EXPECT_EQ(delta(Outcome::kAMuchBetter), std::make_pair(2.0, 0.0));
  EXPECT_EQ(delta(Outcome::kABetter), std::make_pair(1.0, 0.0));
  EXPECT_EQ(delta(Outcome::kTie), std::make_pair(0.0, 0.0));
  EXPECT_EQ(delta(Outcome::kBBetter), std::make_pair(0.0, 1.0));
  EXPECT_EQ(delta(Outcome::kBMuchBetter), std::make_pair(0.0, 2.0));
}

TEST(CountCitations, MarkersAndUrls) {
  EXPECT_EQ(count_citations("The Game Boy [1] outsold the Game Gear [2]; see [1] again."), 2);
  EXPECT_EQ(count_citations("No sources given."), 0);
  EXPECT_EQ(count_citations("See https://a.org/x. Also https://a.org/x, and http://b.net/y"), 2);
  EXPECT_EQ(count_citations("[a] [] [12345] [7]"), 1);
  EXPECT_EQ(make_response("Per [3] and (https://c.io/z)").citation_count, 2);
}

TEST(AgentResponse, JsonRoundTrip) {
  const AgentResponse r = make_response("Text [1]");
  EXPECT_EQ(AgentResponse::from_json(r.to_json()), r);
  EXPECT_ARENA_ERROR(AgentResponse::from_json({{"text", "x"}}), ErrorCode::kMissingField);
}

// ---- Judge prompt ----------------------------------------------------------------------

TEST(JudgePrompt, WordLimitValue) {
  EXPECT_EQ(word_limit_value("Maximum 360 words"), "360");
  EXPECT_EQ(word_limit_value("Keep it brief"), "Keep it brief");
}

TEST(JudgePrompt, Golden) {
  const std::string prompt =
      assemble_judge_prompt(judge_task(), make_response("**Game Boy** [1]\n- Game Gear [2]"),
                            make_response("Answer: TurboExpress."));
  EXPECT_EQ(fx::golden_mismatch("judge_prompt.txt", prompt), "");
  EXPECT_NE(prompt.find("Constraint: **Maximum 520 words**."), std::string::npos);
  EXPECT_NE(prompt.find("[DEPTH-Logic]: [\"Game Boy\",\"Sega Game Gear\"]"), std::string::npos);
  EXPECT_NE(prompt.find("=== Agent A ===\n(Citation Count: 2)\n**Game Boy** [1]"), std::string::npos);
  EXPECT_NE(prompt.find("=== Agent B ===\n(Citation Count: 0)\nAnswer: TurboExpress."),
            std::string::npos);
  EXPECT_EQ(prompt.find("{{"), std::string::npos);
}

TEST(JudgePrompt, EmptyChecklistRejected) {
  Task t = judge_task();
  t.checklist_depth.clear();
  EXPECT_ARENA_ERROR(assemble_judge_prompt(t, make_response("a"), make_response("b")),
                     ErrorCode::kEmptyChecklist);
}

// ---- Judge calls -------------------------------------------------------------------------

TEST(Judge, FixedOrder) {
  ScriptedChatClient examiner;
  examiner.set_default(fx::verdict_reply("[[A_BETTER]]", "N/A", "WIDE"));
  const auto a = make_response("first answer");
  const auto b = make_response("second answer");
  const Verdict v = judge(examiner, judge_task(), a, b);
  EXPECT_EQ(v.outcome, Outcome::kABetter);
  const std::string& prompt = examiner.prompts().at(0);
  EXPECT_LT(prompt.find("first answer"), prompt.find("second answer"));
}

TEST(Judge, SwappedOrderIsMappedBack) {
  ScriptedChatClient examiner;
  // The examiner prefers whatever sits in slot A, which is the caller's B.
  examiner.set_default(fx::verdict_reply("[[A_MUCH_BETTER]]", "N/A", "DEEP"));
  JudgeOptions options;
  options.order = OrderPolicy::kSwapped;
  const Verdict v = judge(examiner, judge_task(), make_response("first answer"),
                          make_response("second answer"), options);
  EXPECT_EQ(v.outcome, Outcome::kBMuchBetter);
  EXPECT_EQ(v.loser_failure_type, FailureType::kDeep);
  const std::string& prompt = examiner.prompts().at(0);
  EXPECT_LT(prompt.find("second answer"), prompt.find("first answer"));
}

TEST(Judge, RepromptsOnceThenSucceeds) {
  ScriptedChatClient examiner;
  examiner.push_sequence("I think A is better overall.");
  examiner.push_sequence(fx::verdict_reply("[[Tie]]", "LOW", "NONE"));
  const Verdict v = judge(examiner, judge_task(), make_response("x"), make_response("y"));
  EXPECT_EQ(v.tie_quality, TieQuality::kLow);
  EXPECT_EQ(examiner.calls(), 2u);
}

TEST(Judge, GarbageTwiceIsParseFailure) {
  ScriptedChatClient examiner;
  examiner.set_default("garbage");
  EXPECT_ARENA_ERROR(judge(examiner, judge_task(), make_response("x"), make_response("y")),
                     ErrorCode::kParseFailure);
  EXPECT_EQ(examiner.calls(), 2u);
}

}  // namespace
}  // namespace arena
