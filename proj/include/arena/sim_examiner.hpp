#pragma once

#include <string>
#include <vector>

#include "arena/chat.hpp"

namespace arena {

// Offline stand-in for the examiner model. It reads the same prompts a real
// model would receive and answers deterministically:
//   * task prompts: depth items name the reasoning hops and the focal
//     entity, width items pair each target with its first "Fact:" sentence,
//     and the question never quotes titles or URLs;
//   * judge prompts: an answer passes depth when it contains every depth
//     item; width is the fraction of width items present; ties between
//     flawless answers are broken by formatting and citations.
class SimulatedExaminer : public ChatClient {
 public:
  ChatResponse chat(const ChatRequest& request) override;

  std::string generate_task_reply(const std::string& prompt) const;
  std::string judge_reply(const std::string& prompt) const;
};

// Node blocks recovered from a serialized context section.
struct SerializedNode {
  int id = 0;
  std::string title;
  std::string url;
  std::string relation;
  std::string content;
};

std::vector<SerializedNode> parse_serialized_nodes(const std::string& section);

}  // namespace arena
