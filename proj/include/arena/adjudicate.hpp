#pragma once

#include <string>
#include <string_view>
#include <utility>

#include "arena/chat.hpp"
#include "arena/taskgen.hpp"

namespace arena {

enum class Outcome { kAMuchBetter, kABetter, kTie, kBBetter, kBMuchBetter };
enum class TieQuality { kHigh, kLow, kNA };
enum class FailureType { kDeep, kWide, kBoth, kNone };

// "[[A_MUCH_BETTER]]" ... "[[Tie]]" ... "[[B_MUCH_BETTER]]"
std::string_view to_string(Outcome outcome);
std::string_view to_string(TieQuality quality);  // HIGH, LOW, N/A
std::string_view to_string(FailureType failure);  // DEEP, WIDE, BOTH, NONE

Outcome outcome_from_string(std::string_view text);
TieQuality tie_quality_from_string(std::string_view text);
FailureType failure_type_from_string(std::string_view text);

// Outcome with the A/B roles exchanged.
Outcome mirrored(Outcome outcome);

struct Verdict {
  Outcome outcome = Outcome::kTie;
  TieQuality tie_quality = TieQuality::kHigh;
  FailureType loser_failure_type = FailureType::kNone;
  std::string reasoning;

  bool operator==(const Verdict&) const = default;

  bool is_tie() const { return outcome == Outcome::kTie; }
  json to_json() const;
};

// Throws kInconsistentFields when the tie/failure fields contradict the outcome.
void validate(const Verdict& verdict);

// Throws kMalformedJson, kMissingField, kUnknownEnum or kInconsistentFields.
// A missing tie_quality reads as N/A and a missing loser_failure_type as NONE.
Verdict parse_verdict(const std::string& raw);

// Winner gets +2 (MUCH_BETTER) or +1 (BETTER); a tie scores nothing.
std::pair<double, double> score_delta(const Verdict& verdict);

// Distinct [n] markers plus distinct http(s) URLs.
int count_citations(std::string_view text);

struct AgentResponse {
  std::string text;
  int citation_count = 0;

  bool operator==(const AgentResponse&) const = default;

  json to_json() const;
  static AgentResponse from_json(const json& doc);
};

AgentResponse make_response(std::string text);

const std::string& judge_prompt_template();

// Pulls the integer out of "Maximum 360 words"; the whole instruction is
// used when it holds no number.
std::string word_limit_value(const std::string& instruction);

std::string assemble_judge_prompt(const Task& task, const AgentResponse& a,
                                  const AgentResponse& b);

enum class OrderPolicy { kFixed, kSwapped };

struct JudgeOptions {
  OrderPolicy order = OrderPolicy::kFixed;
  int reprompts = 1;
  Decoding decoding;
};

// With kSwapped, B is shown in the A slot and the parsed verdict is mapped
// back so the result always refers to the caller's A and B.
Verdict judge(ChatClient& examiner, const Task& task, const AgentResponse& a,
              const AgentResponse& b, const JudgeOptions& options = {});

}  // namespace arena
