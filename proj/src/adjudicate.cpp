#include "arena/adjudicate.hpp"

#include <cctype>
#include <regex>
#include <set>

#include "arena/error.hpp"
#include "spdlog/spdlog.h"

namespace arena {
namespace {

const char* const kJudgeTemplate = R"TPL(### Role: Super-User Evaluator (Simulating Human Preference)
Compare Response A and Response B to identify which search agent provides a better USER EXPERIENCE.
While accuracy is paramount, you must also heavily weigh **comprehensiveness, formatting, and helpfulness** -- traits that human users value in search engines like Perplexity, Gemini, or SearchGPT.

--- 1. QUERY & CONSTRAINT ---
Query: {{question}}
Constraint: **Maximum {{word_limit}} words**. (Note: Do not penalize slightly going over if the quality is high. Only penalize extreme verbosity).

--- 2. GROUND TRUTH CHECKLIST ---
[WIDTH-Completeness]: {{checklist_width}}
[DEPTH-Logic]: {{checklist_depth}}

--- 3. RESPONSES ---
=== Agent A ===
(Citation Count: {{count_a}})
{{answer_a}}
=== Agent B ===
(Citation Count: {{count_b}})
{{answer_b}}

--- 4. EVALUATION CRITERIA (Aligned with Human Preference) ---
**Dimension 1: Accuracy (The Foundation)**
- **Core Entity Check**: Determine if each agent passes the DEEP Logic (Found the right entity?). (If BOTH fail this, it's a LOW TIE).
- **Sub-Point Accuracy**: Did the agent answer *all* parts of the prompt correctly? Determine if each agent passes the WIDE Aggregation (Found the specific details?).
- If BOTH agents have significant hallucinations (even on different parts), consider a **Low Quality Tie**.

**Dimension 2: User Utility & Completeness (The Experience)**
- **Helpfulness**: Is the answer easy to read? Does it actually solve the user's underlying intent?
- **Information Density**: Unlike simple chatbots, Search Agents should provide **rich context**.
- **Helpful Recovery**: If the exact answer isn't in the context, did the agent try to synthesize *related* useful info?
- **Citation Density**: A higher citation count is generally preferred as it indicates better groundedness.

**Dimension 3: Presentation & Structure **
- **Markdown Mastery**: REWARD the use of **Bold** headers, Bullet points, and Tables.
- **Scannability** & **Directness**: Can a user find the specific answer in 2 seconds? (BLUF - Bottom Line Up Front)?

--- 4. SCORING RUBRIC ---
- **[[A/B_MUCH_BETTER]] (+2)**:
    - The winner found the correct Entity AND answered sub-points correctly (No Hallucinations).
    - The loser failed the Deep Logic (Wrong Entity) or missed major Checklists.
    - *Note: Do not give MUCH_BETTER if the winner has a factual error in a sub-point.*
- **[[A/B_BETTER]] (+1)**:
    If winner has errors, cap at BETTER.
    - **The "Flawed Winner"**: The winner got the Main Entity right, but missed a detail or hallucinated on a minor sub-point. The loser failed the Main Entity.
    - **The "Style Winner"**: Both are factually accurate, but one has significantly better formatting/comprehensiveness.
    - **The "Nuance Winner"**: Both failed slightly, but the winner's failure was less catastrophic than the loser's.
- **[[Tie]]**:
    - *High Quality*: Both gave perfect, well-formatted, accurate answers.
    - *Low Quality*: Both failed to find the core entity or both hallucinated significantly.

**Error Diagnosis**
- If there is a loser, identify WHY they lost.
- **DEEP**: Failed logic/identity (Wrong Entity).
- **WIDE**: Failed detail aggregation (Missing Facts).
- **BOTH**: Failed both deep logic and wide details.
- **NONE**: No hard checklist failures, when the winner won solely on Soft Filters like citations/formatting.

--- 5. OUTPUT FORMAT (JSON) ---
{
    "verdict": "[[A_MUCH_BETTER]]" OR "[[A_BETTER]]" OR "[[Tie]]" ... ,
    "tie_quality": "HIGH" OR "LOW" OR "N/A",
    "loser_failure_type": "DEEP" OR "WIDE" OR "BOTH" OR "NONE",
    "reasoning": "First, verify Deep Logic for both. Then, compare Width/Completeness..."
}
)TPL";

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string trimmed(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string required_string(const json& doc, const char* name) {
  if (!doc.contains(name)) throw Error(ErrorCode::kMissingField, std::string("verdict lacks '") + name + "'");
  if (!doc[name].is_string())
    throw Error(ErrorCode::kUnknownEnum, std::string("'") + name + "' is not a string");
  return doc[name].get<std::string>();
}

}  // namespace

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::kAMuchBetter: return "[[A_MUCH_BETTER]]";
    case Outcome::kABetter: return "[[A_BETTER]]";
    case Outcome::kTie: return "[[Tie]]";
    case Outcome::kBBetter: return "[[B_BETTER]]";
    case Outcome::kBMuchBetter: return "[[B_MUCH_BETTER]]";
  }
  return "?";
}

std::string_view to_string(TieQuality quality) {
  switch (quality) {
    case TieQuality::kHigh: return "HIGH";
    case TieQuality::kLow: return "LOW";
    case TieQuality::kNA: return "N/A";
  }
  return "?";
}

std::string_view to_string(FailureType failure) {
  switch (failure) {
    case FailureType::kDeep: return "DEEP";
    case FailureType::kWide: return "WIDE";
    case FailureType::kBoth: return "BOTH";
    case FailureType::kNone: return "NONE";
  }
  return "?";
}

Outcome outcome_from_string(std::string_view text) {
  std::string token = upper(trimmed(text));
  if (token.starts_with("[[") && token.ends_with("]]")) token = token.substr(2, token.size() - 4);
  if (token == "A_MUCH_BETTER") return Outcome::kAMuchBetter;
  if (token == "A_BETTER") return Outcome::kABetter;
  if (token == "TIE") return Outcome::kTie;
  if (token == "B_BETTER") return Outcome::kBBetter;
  if (token == "B_MUCH_BETTER") return Outcome::kBMuchBetter;
  throw Error(ErrorCode::kUnknownEnum, "unknown verdict '" + std::string(text) + "'");
}

TieQuality tie_quality_from_string(std::string_view text) {
  const std::string token = upper(trimmed(text));
  if (token == "HIGH") return TieQuality::kHigh;
  if (token == "LOW") return TieQuality::kLow;
  if (token == "N/A") return TieQuality::kNA;
  throw Error(ErrorCode::kUnknownEnum, "unknown tie_quality '" + std::string(text) + "'");
}

FailureType failure_type_from_string(std::string_view text) {
  const std::string token = upper(trimmed(text));
  if (token == "DEEP") return FailureType::kDeep;
  if (token == "WIDE") return FailureType::kWide;
  if (token == "BOTH") return FailureType::kBoth;
  if (token == "NONE") return FailureType::kNone;
  throw Error(ErrorCode::kUnknownEnum, "unknown loser_failure_type '" + std::string(text) + "'");
}

Outcome mirrored(Outcome outcome) {
  switch (outcome) {
    case Outcome::kAMuchBetter: return Outcome::kBMuchBetter;
    case Outcome::kABetter: return Outcome::kBBetter;
    case Outcome::kTie: return Outcome::kTie;
    case Outcome::kBBetter: return Outcome::kABetter;
    case Outcome::kBMuchBetter: return Outcome::kAMuchBetter;
  }
  return outcome;
}

json Verdict::to_json() const {
  return {{"verdict", std::string(to_string(outcome))},
          {"tie_quality", std::string(to_string(tie_quality))},
          {"loser_failure_type", std::string(to_string(loser_failure_type))},
          {"reasoning", reasoning}};
}

void validate(const Verdict& v) {
  if (v.is_tie()) {
    if (v.tie_quality == TieQuality::kNA)
      throw Error(ErrorCode::kInconsistentFields, "a tie needs tie_quality HIGH or LOW");
    if (v.loser_failure_type != FailureType::kNone)
      throw Error(ErrorCode::kInconsistentFields, "a tie has no loser failure type");
  } else if (v.tie_quality != TieQuality::kNA) {
    throw Error(ErrorCode::kInconsistentFields, "tie_quality must be N/A when a side wins");
  }
}

Verdict parse_verdict(const std::string& raw) {
  const json doc = extract_json_object(raw);
  Verdict v;
  v.outcome = outcome_from_string(required_string(doc, "verdict"));
  v.tie_quality = doc.contains("tie_quality")
                      ? tie_quality_from_string(required_string(doc, "tie_quality"))
                      : TieQuality::kNA;
  v.loser_failure_type =
      doc.contains("loser_failure_type")
          ? failure_type_from_string(required_string(doc, "loser_failure_type"))
          : FailureType::kNone;
  if (doc.contains("reasoning") && doc["reasoning"].is_string())
    v.reasoning = doc["reasoning"].get<std::string>();
  validate(v);
  return v;
}

std::pair<double, double> score_delta(const Verdict& verdict) {
  switch (verdict.outcome) {
    case Outcome::kAMuchBetter: return {2.0, 0.0};
    case Outcome::kABetter: return {1.0, 0.0};
    case Outcome::kTie: return {0.0, 0.0};
    case Outcome::kBBetter: return {0.0, 1.0};
    case Outcome::kBMuchBetter: return {0.0, 2.0};
  }
  return {0.0, 0.0};
}

int count_citations(std::string_view text) {
  static const std::regex marker(R"(\[(\d{1,4})\])");
  static const std::regex url(R"(https?://[^\s<>"'\)\]]+)");
  std::set<std::string> markers;
  std::set<std::string> urls;
  const std::string s(text);
  for (std::sregex_iterator it(s.begin(), s.end(), marker), end; it != end; ++it)
    markers.insert((*it)[1].str());
  for (std::sregex_iterator it(s.begin(), s.end(), url), end; it != end; ++it) {
    std::string u = it->str();
    while (!u.empty() && std::string_view(".,;:!?").find(u.back()) != std::string_view::npos)
      u.pop_back();
    urls.insert(u);
  }
  return static_cast<int>(markers.size() + urls.size());
}

json AgentResponse::to_json() const {
  return {{"text", text}, {"citation_count", citation_count}};
}

AgentResponse AgentResponse::from_json(const json& doc) {
  try {
    return {doc.at("text").get<std::string>(), doc.at("citation_count").get<int>()};
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMissingField, std::string("response record: ") + e.what());
  }
}

AgentResponse make_response(std::string text) {
  const int count = count_citations(text);
  return {std::move(text), count};
}

const std::string& judge_prompt_template() {
  static const std::string tmpl = kJudgeTemplate;
  return tmpl;
}

std::string word_limit_value(const std::string& instruction) {
  static const std::regex number(R"(\d+)");
  std::smatch m;
  if (std::regex_search(instruction, m, number)) return m.str();
  return instruction;
}

std::string assemble_judge_prompt(const Task& task, const AgentResponse& a,
                                  const AgentResponse& b) {
  if (task.checklist_width.empty() || task.checklist_depth.empty())
    throw Error(ErrorCode::kEmptyChecklist, "task checklists must be non-empty");
  auto list = [](const std::vector<std::string>& items) {
    return json(items).dump(-1, ' ', false, json::error_handler_t::replace);
  };
  return render_template(judge_prompt_template(),
                         {{"question", task.question},
                          {"word_limit", word_limit_value(task.word_limit_instruction)},
                          {"checklist_width", list(task.checklist_width)},
                          {"checklist_depth", list(task.checklist_depth)},
                          {"count_a", std::to_string(a.citation_count)},
                          {"answer_a", a.text},
                          {"count_b", std::to_string(b.citation_count)},
                          {"answer_b", b.text}});
}

Verdict judge(ChatClient& examiner, const Task& task, const AgentResponse& a,
              const AgentResponse& b, const JudgeOptions& options) {
  const bool swapped = options.order == OrderPolicy::kSwapped;
  const std::string prompt =
      swapped ? assemble_judge_prompt(task, b, a) : assemble_judge_prompt(task, a, b);
  std::string last_error;
  for (int attempt = 0; attempt <= options.reprompts; ++attempt) {
    const auto reply = examiner.chat({prompt, options.decoding});
    try {
      Verdict v = parse_verdict(reply.text);
      if (swapped) v.outcome = mirrored(v.outcome);
      return v;
    } catch (const Error& e) {
      last_error = e.what();
      spdlog::debug("judge attempt {} unparseable: {}", attempt + 1, e.what());
    }
  }
  throw Error(ErrorCode::kParseFailure, "judge reply unparseable: " + last_error);
}

}  // namespace arena
