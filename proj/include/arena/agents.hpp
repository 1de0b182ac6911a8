#pragma once

#include <memory>
#include <string>

#include "arena/adjudicate.hpp"
#include "arena/chat.hpp"
#include "arena/rng.hpp"
#include "arena/taskgen.hpp"

namespace arena {

// A research agent under evaluation. Implementations must tolerate
// concurrent calls from different matches.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual const std::string& name() const = 0;
  virtual AgentResponse respond(const Task& task, Rng& rng) = 0;
};

// Skill model for simulated agents: each depth item is recovered with
// probability p_deep and each width item with p_wide; misses come out as
// fabricated statements.
struct AgentProfile {
  std::string name;
  double p_deep = 0.8;
  double p_wide = 0.8;
  double style = 0.5;          // chance of a markdown-formatted answer
  double citation_rate = 3.0;  // mean number of [n] markers

  json to_json() const;
  static AgentProfile from_json(const json& doc);
};

AgentResponse scripted_agent_respond(const AgentProfile& profile, const Task& task,
                                     Rng& rng);

class ScriptedAgent : public Agent {
 public:
  explicit ScriptedAgent(AgentProfile profile) : profile_(std::move(profile)) {}

  const std::string& name() const override { return profile_.name; }
  const AgentProfile& profile() const { return profile_; }
  AgentResponse respond(const Task& task, Rng& rng) override;

 private:
  AgentProfile profile_;
};

// Sends the question and word limit to a chat model; sees no checklist.
class ChatAgent : public Agent {
 public:
  ChatAgent(std::string name, std::shared_ptr<ChatClient> client,
            Decoding decoding = {});

  const std::string& name() const override { return name_; }
  AgentResponse respond(const Task& task, Rng& rng) override;

 private:
  std::string name_;
  std::shared_ptr<ChatClient> client_;
  Decoding decoding_;
};

std::string agent_prompt(const Task& task);

}  // namespace arena
