#include "arena/sim_examiner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "arena/adjudicate.hpp"
#include "arena/error.hpp"
#include "fmt/format.h"

namespace arena {
namespace {

constexpr std::string_view kTopicMarker = "**OVERALL DOMAIN/TOPIC**: \"";
constexpr std::string_view kReasoningMarker = "**A. Reasoning Chain (Background/Context)**:\n";
constexpr std::string_view kTargetMarker = "**B. Target Answers (The Facts to Retrieve)**:\n";
constexpr std::string_view kStepsMarker = "\n--- 2. QUESTION GENERATION STEPS";
constexpr std::string_view kWidthMarker = "[WIDTH-Completeness]: ";
constexpr std::string_view kDepthMarker = "[DEPTH-Logic]: ";
constexpr std::string_view kAgentA = "=== Agent A ===\n";
constexpr std::string_view kAgentB = "\n=== Agent B ===\n";
constexpr std::string_view kCriteria = "\n\n--- 4. EVALUATION CRITERIA";

std::string between(const std::string& text, std::string_view open, std::string_view close,
                    std::size_t from = 0) {
  const auto b = text.find(open, from);
  if (b == std::string::npos)
    throw Error(ErrorCode::kMalformedResponse, "prompt lacks '" + std::string(open) + "'");
  const auto start = b + open.size();
  const auto e = text.find(close, start);
  if (e == std::string::npos)
    throw Error(ErrorCode::kMalformedResponse, "prompt lacks '" + std::string(close) + "'");
  return text.substr(start, e - start);
}

std::string first_fact(const std::string& content) {
  auto pos = content.find("Fact: ");
  std::size_t start = pos == std::string::npos ? 0 : pos + 6;
  auto end = content.find(". ", start);
  if (end == std::string::npos) end = content.find('.', start);
  std::string sentence = content.substr(start, end == std::string::npos ? 160 : end - start);
  if (sentence.size() > 160) sentence.resize(160);
  return sentence;
}

std::vector<std::string> json_list_line(const std::string& prompt, std::string_view marker) {
  const std::string line = between(prompt, marker, "\n");
  auto doc = json::parse(line, nullptr, false);
  if (doc.is_discarded() || !doc.is_array())
    throw Error(ErrorCode::kMalformedResponse, "checklist line is not a JSON list");
  return doc.get<std::vector<std::string>>();
}

struct Assessment {
  bool depth_pass = false;
  double width_fraction = 0.0;
  double soft = 0.0;
  bool perfect() const { return depth_pass && width_fraction >= 1.0; }
};

Assessment assess(const std::string& body, int citations,
                  const std::vector<std::string>& depth_items,
                  const std::vector<std::string>& width_items) {
  Assessment a;
  a.depth_pass = std::all_of(depth_items.begin(), depth_items.end(), [&](const auto& item) {
    return body.find(item) != std::string::npos;
  });
  const auto hits = std::count_if(width_items.begin(), width_items.end(), [&](const auto& item) {
    return body.find(item) != std::string::npos;
  });
  a.width_fraction = width_items.empty() ? 1.0 : static_cast<double>(hits) / width_items.size();
  const bool formatted = body.find("**") != std::string::npos || body.find("\n- ") != std::string::npos;
  a.soft = (formatted ? 1.0 : 0.0) + std::min(citations, 6) / 6.0;
  return a;
}

std::string verdict_json(Outcome outcome, TieQuality quality, FailureType failure,
                         std::string reasoning) {
  return Verdict{outcome, quality, failure, std::move(reasoning)}.to_json().dump();
}

Outcome win_for(bool a_wins, bool much) {
  if (a_wins) return much ? Outcome::kAMuchBetter : Outcome::kABetter;
  return much ? Outcome::kBMuchBetter : Outcome::kBBetter;
}

}  // namespace

std::vector<SerializedNode> parse_serialized_nodes(const std::string& section) {
  std::vector<SerializedNode> nodes;
  std::istringstream in(section);
  std::string line;
  while (std::getline(in, line)) {
    if (line.starts_with("[Node ")) {
      SerializedNode node;
      const auto close = line.find("] ");
      if (close == std::string::npos) continue;
      node.id = std::atoi(line.substr(6, close - 6).c_str());
      node.title = line.substr(close + 2);
      nodes.push_back(std::move(node));
    } else if (!nodes.empty()) {
      auto& node = nodes.back();
      if (line.starts_with("URL: ")) {
        node.url = line.substr(5);
      } else if (line.starts_with("Relation: ")) {
        node.relation = line.substr(10);
      } else if (line.starts_with("Content: ")) {
        node.content = line.substr(9);
      } else if (!line.empty()) {
        node.content += "\n" + line;
      }
    }
  }
  return nodes;
}

ChatResponse SimulatedExaminer::chat(const ChatRequest& request) {
  const auto& p = request.prompt;
  if (p.find(kTargetMarker) != std::string::npos) return {generate_task_reply(p), {}};
  if (p.find(kWidthMarker) != std::string::npos) return {judge_reply(p), {}};
  if (p.starts_with("You are annotating hyperlinks")) {
    const auto count = std::stoul(between(p, "with exactly ", " labels"));
    return {json{{"labels", std::vector<std::string>(count, "related")}}.dump(), {}};
  }
  throw Error(ErrorCode::kMalformedResponse, "simulated examiner does not recognize the prompt");
}

std::string SimulatedExaminer::generate_task_reply(const std::string& prompt) const {
  const std::string topic = between(prompt, kTopicMarker, "\"\n");
  const auto chain = parse_serialized_nodes(between(prompt, kReasoningMarker, kTargetMarker));
  const auto targets = parse_serialized_nodes(between(prompt, kTargetMarker, kStepsMarker));
  if (targets.empty()) throw Error(ErrorCode::kMalformedResponse, "no target nodes in prompt");

  std::vector<std::string> depth_items;
  for (std::size_t i = 1; i < chain.size(); ++i)
    depth_items.push_back(fmt::format("Hop {}: {}", i, chain[i].title));
  depth_items.push_back("Entity: " + targets.front().title);

  std::vector<std::string> width_items;
  for (const auto& t : targets) width_items.push_back(t.title + ": " + first_fact(t.content));

  const std::string relation = targets.front().relation;
  const int hops = static_cast<int>(chain.size());
  json reply = {
      {"question",
       fmt::format("Within {}, follow a chain of {} linked reference step{} down to one "
                   "group of {} entries classed as {}. Name every entry in that group and "
                   "give, for each, the first documented fact recorded about it.",
                   topic, hops, hops == 1 ? "" : "s", targets.size(), relation)},
      {"checklist_width", width_items},
      {"checklist_depth", depth_items},
      {"rationale", fmt::format("Deep: {} hop(s) identify the group without naming it. "
                                "Wide: {} entries must each be researched.",
                                hops, targets.size())}};
  return reply.dump();
}

std::string SimulatedExaminer::judge_reply(const std::string& prompt) const {
  const auto width_items = json_list_line(prompt, kWidthMarker);
  const auto depth_items = json_list_line(prompt, kDepthMarker);
  const auto a_start = prompt.find(kAgentA);
  const auto b_start = prompt.find(kAgentB, a_start == std::string::npos ? 0 : a_start);
  const auto end = prompt.rfind(kCriteria);
  if (a_start == std::string::npos || b_start == std::string::npos || end == std::string::npos ||
      end < b_start)
    throw Error(ErrorCode::kMalformedResponse, "judge prompt lacks response blocks");
  auto parse_block = [](const std::string& block) {
    const auto open = block.find("(Citation Count: ");
    const auto close = block.find(")\n", open);
    int count = 0;
    std::string body = block;
    if (open != std::string::npos && close != std::string::npos) {
      count = std::atoi(block.substr(open + 17, close - open - 17).c_str());
      body = block.substr(close + 2);
    }
    return std::pair{count, body};
  };
  const auto [count_a, body_a] =
      parse_block(prompt.substr(a_start + kAgentA.size(), b_start - a_start - kAgentA.size()));
  const auto [count_b, body_b] =
      parse_block(prompt.substr(b_start + kAgentB.size(), end - b_start - kAgentB.size()));
  const Assessment a = assess(body_a, count_a, depth_items, width_items);
  const Assessment b = assess(body_b, count_b, depth_items, width_items);

  if (a.perfect() && b.perfect()) {
    const double diff = a.soft - b.soft;
    if (std::abs(diff) < 0.5)
      return verdict_json(Outcome::kTie, TieQuality::kHigh, FailureType::kNone,
                          "Both answers pass every checklist item with comparable presentation.");
    return verdict_json(win_for(diff > 0, false), TieQuality::kNA, FailureType::kNone,
                        "Both are accurate; the winner is better formatted and cited.");
  }
  if (!a.depth_pass && !b.depth_pass)
    return verdict_json(Outcome::kTie, TieQuality::kLow, FailureType::kNone,
                        "Neither answer identifies the core entities.");
  if (a.depth_pass != b.depth_pass) {
    const bool a_wins = a.depth_pass;
    const Assessment& w = a_wins ? a : b;
    const Assessment& l = a_wins ? b : a;
    return verdict_json(win_for(a_wins, w.perfect()), TieQuality::kNA,
                        l.width_fraction >= 1.0 ? FailureType::kDeep : FailureType::kBoth,
                        "Only the winner follows the reasoning chain to the right entities.");
  }
  if (a.width_fraction == b.width_fraction)
    return verdict_json(Outcome::kTie, TieQuality::kLow, FailureType::kNone,
                        "Both identify the entities but miss the same share of details.");
  const bool a_wins = a.width_fraction > b.width_fraction;
  const Assessment& w = a_wins ? a : b;
  const Assessment& l = a_wins ? b : a;
  return verdict_json(win_for(a_wins, w.perfect() && l.width_fraction < 0.5), TieQuality::kNA,
                      FailureType::kWide, "The winner covers more of the requested details.");
}

}  // namespace arena
