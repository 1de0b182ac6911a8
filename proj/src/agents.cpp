#include "arena/agents.hpp"

#include "arena/error.hpp"
#include "fmt/format.h"

namespace arena {

json AgentProfile::to_json() const {
  return {{"name", name},
          {"p_deep", p_deep},
          {"p_wide", p_wide},
          {"style", style},
          {"citation_rate", citation_rate}};
}

AgentProfile AgentProfile::from_json(const json& doc) {
  AgentProfile p;
  try {
    p.name = doc.at("name").get<std::string>();
    p.p_deep = doc.value("p_deep", p.p_deep);
    p.p_wide = doc.value("p_wide", p.p_wide);
    p.style = doc.value("style", p.style);
    p.citation_rate = doc.value("citation_rate", p.citation_rate);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("agent profile: ") + e.what());
  }
  auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!unit(p.p_deep) || !unit(p.p_wide) || !unit(p.style) || p.citation_rate < 0)
    throw Error(ErrorCode::kConfigError, "profile '" + p.name + "' has out-of-range values");
  return p;
}

AgentResponse scripted_agent_respond(const AgentProfile& profile, const Task& task,
                                     Rng& rng) {
  const bool markdown = rng.bernoulli(profile.style);
  std::vector<std::string> lines;
  auto recall = [&](const std::vector<std::string>& items, double p) {
    for (const auto& item : items) {
      if (rng.bernoulli(p)) {
        lines.push_back(item);
      } else {
        lines.push_back(fmt::format("Unconfirmed claim {:04x}", rng.next() & 0xffff));
      }
    }
  };
  recall(task.checklist_depth, profile.p_deep);
  recall(task.checklist_width, profile.p_wide);

  const unsigned citations = rng.poisson(profile.citation_rate);
  for (unsigned i = 0; i < citations && !lines.empty(); ++i)
    lines[i % lines.size()] += fmt::format(" [{}]", i + 1);

  std::string text;
  if (markdown) {
    text = "**Answer**\n";
    for (const auto& line : lines) text += "- " + line + "\n";
  } else {
    text = "Answer: ";
    for (std::size_t i = 0; i < lines.size(); ++i) text += (i ? "; " : "") + lines[i];
    text += ".";
  }
  return make_response(std::move(text));
}

AgentResponse ScriptedAgent::respond(const Task& task, Rng& rng) {
  return scripted_agent_respond(profile_, task, rng);
}

std::string agent_prompt(const Task& task) {
  return task.question + "\n\n" + task.word_limit_instruction + ".";
}

ChatAgent::ChatAgent(std::string name, std::shared_ptr<ChatClient> client,
                     Decoding decoding)
    : name_(std::move(name)), client_(std::move(client)), decoding_(decoding) {
  if (!client_) throw Error(ErrorCode::kConfigError, "agent '" + name_ + "' has no client");
}

AgentResponse ChatAgent::respond(const Task& task, Rng&) {
  return make_response(client_->chat({agent_prompt(task), decoding_}).text);
}

}  // namespace arena
