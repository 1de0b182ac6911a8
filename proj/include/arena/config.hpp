#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "arena/agents.hpp"
#include "arena/chat.hpp"
#include "arena/evolve.hpp"
#include "arena/tournament.hpp"

namespace arena {

// Endpoint configs are JSON objects (see EndpointConfig). Relative paths in
// "extra" fields resolve against `base_dir`, normally the config's folder.
//
// Agents:
//   { "kind": "scripted", "name": "alpha", "profile": { "p_deep": .9, ... } }
//   { "kind": "http-chat", "name": "beta", "base_url": ..., "model": ...,
//     "api_key_env": "BETA_KEY" }
// Examiners:
//   { "kind": "scripted" }                       simulated examiner
//   { "kind": "scripted", "script": {...} }      canned replies
//   { "kind": "scripted", "replies_file": "x.json" }
//   { "kind": "http-chat", ... }
EndpointConfig load_endpoint(const std::filesystem::path& path);

std::shared_ptr<Agent> make_agent(const EndpointConfig& config,
                                  const std::filesystem::path& base_dir = {});
std::shared_ptr<ChatClient> make_examiner(const EndpointConfig& config,
                                          const std::filesystem::path& base_dir = {});

// { "threshold", "max_rounds", "width_cap", "randomize_order",
//   "parallel_agents" }, all optional.
MatchConfig match_config_from_json(const json& doc, MatchConfig base = {});

// Tree sources:
//   { "kind": "synthetic", "count": 30 }
//   { "kind": "files", "files": ["t1.json", ...], "fixture_dir": "web/" }
std::unique_ptr<TreeSource> make_tree_source(const json& doc, std::uint64_t seed,
                                             const std::filesystem::path& base_dir = {});

// A whole tournament:
//   { "players": [endpoint...], "examiner": endpoint, "rounds": 4,
//     "trees_per_pairing": 30, "seed": 7, "match": {...}, "trees": {...} }
struct ArenaConfig {
  std::vector<EndpointConfig> players;
  EndpointConfig examiner;
  TournamentConfig tournament;
  bool has_seed = false;
  json trees;
  std::filesystem::path base_dir;

  static ArenaConfig from_json(const json& doc, const std::filesystem::path& base_dir = {});
  static ArenaConfig load(const std::filesystem::path& path);
};

std::vector<AgentProfile> load_profiles(const std::filesystem::path& path);

}  // namespace arena
