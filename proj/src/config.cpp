#include "arena/config.hpp"

#include <set>

#include "arena/error.hpp"
#include "arena/fixture_web.hpp"
#include "arena/sim_examiner.hpp"
#include "fmt/format.h"

namespace arena {
namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_absolute() || base.empty()) return path;
  return base / path;
}

template <typename T>
T field(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kConfigError, fmt::format("'{}' has the wrong type", key));
  }
}

json load_config_json(const std::filesystem::path& path) {
  try {
    return read_json_file(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfigError, fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace

EndpointConfig load_endpoint(const std::filesystem::path& path) {
  return EndpointConfig::from_json(load_config_json(path));
}

std::shared_ptr<Agent> make_agent(const EndpointConfig& config,
                                  const std::filesystem::path& base_dir) {
  if (config.kind == "scripted") {
    json doc = json::object();
    if (config.extra.contains("profile")) {
      doc = config.extra.at("profile");
    } else if (config.extra.contains("profile_file")) {
      doc = load_config_json(resolve(base_dir, config.extra.at("profile_file").get<std::string>()));
    }
    if (!doc.is_object()) throw Error(ErrorCode::kConfigError, "agent profile must be an object");
    if (!config.name.empty()) doc["name"] = config.name;
    if (!doc.contains("name")) throw Error(ErrorCode::kConfigError, "agent needs a name");
    return std::make_shared<ScriptedAgent>(AgentProfile::from_json(doc));
  }
  if (config.kind == "http-chat") {
    if (config.name.empty()) throw Error(ErrorCode::kConfigError, "agent needs a name");
    if (config.api_key_env.empty())
      throw Error(ErrorCode::kConfigError, "http-chat agent needs api_key_env");
    return std::make_shared<ChatAgent>(config.name, std::make_shared<HttpChatClient>(config));
  }
  throw Error(ErrorCode::kConfigError,
              fmt::format("endpoint kind '{}' cannot act as an agent", config.kind));
}

std::shared_ptr<ChatClient> make_examiner(const EndpointConfig& config,
                                          const std::filesystem::path& base_dir) {
  if (config.kind == "scripted") {
    if (config.extra.contains("script"))
      return std::make_shared<ScriptedChatClient>(config.extra.at("script"));
    if (config.extra.contains("replies_file")) {
      const auto path = resolve(base_dir, config.extra.at("replies_file").get<std::string>());
      return std::make_shared<ScriptedChatClient>(load_config_json(path));
    }
    return std::make_shared<SimulatedExaminer>();
  }
  if (config.kind == "http-chat") {
    if (config.api_key_env.empty())
      throw Error(ErrorCode::kConfigError, "http-chat examiner needs api_key_env");
    return std::make_shared<HttpChatClient>(config);
  }
  throw Error(ErrorCode::kConfigError,
              fmt::format("endpoint kind '{}' cannot act as an examiner", config.kind));
}

MatchConfig match_config_from_json(const json& doc, MatchConfig base) {
  if (doc.is_null()) return base;
  if (!doc.is_object()) throw Error(ErrorCode::kConfigError, "match config must be an object");
  base.threshold = field(doc, "threshold", base.threshold);
  base.max_rounds = field(doc, "max_rounds", base.max_rounds);
  base.width_cap = field(doc, "width_cap", base.width_cap);
  base.randomize_order = field(doc, "randomize_order", base.randomize_order);
  base.parallel_agents = field(doc, "parallel_agents", base.parallel_agents);
  base.validate();
  return base;
}

std::unique_ptr<TreeSource> make_tree_source(const json& doc, std::uint64_t seed,
                                             const std::filesystem::path& base_dir) {
  const json source = doc.is_null() ? json{{"kind", "synthetic"}} : doc;
  if (!source.is_object()) throw Error(ErrorCode::kConfigError, "trees config must be an object");
  const std::string kind = field<std::string>(source, "kind", "synthetic");
  if (kind == "synthetic") {
    const int count = field(source, "count", 30);
    if (count < 1) throw Error(ErrorCode::kConfigError, "trees.count must be >= 1");
    return std::make_unique<SyntheticTreeSource>(static_cast<std::size_t>(count), seed);
  }
  if (kind == "files") {
    const auto files = field<std::vector<std::string>>(source, "files", {});
    if (files.empty()) throw Error(ErrorCode::kConfigError, "trees.files is empty");
    std::vector<InfoTree> trees;
    for (const auto& f : files) trees.push_back(InfoTree::from_json(load_config_json(resolve(base_dir, f))));
    std::shared_ptr<const Fetcher> fetcher;
    if (source.contains("fixture_dir")) {
      fetcher = std::make_shared<FixtureWeb>(
          FixtureWeb::load_dir(resolve(base_dir, source.at("fixture_dir").get<std::string>())));
    } else {
      fetcher = std::make_shared<FixtureWeb>();
    }
    return std::make_unique<FixedTreeSource>(std::move(trees), std::move(fetcher));
  }
  throw Error(ErrorCode::kConfigError, fmt::format("unknown tree source '{}'", kind));
}

ArenaConfig ArenaConfig::from_json(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw Error(ErrorCode::kConfigError, "tournament config must be an object");
  ArenaConfig c;
  c.base_dir = base_dir;
  if (!doc.contains("players") || !doc["players"].is_array())
    throw Error(ErrorCode::kConfigError, "tournament config needs a 'players' array");
  std::set<std::string> names;
  for (const auto& p : doc["players"]) {
    auto endpoint = EndpointConfig::from_json(p);
    if (endpoint.name.empty()) throw Error(ErrorCode::kConfigError, "every player needs a name");
    if (!names.insert(endpoint.name).second)
      throw Error(ErrorCode::kConfigError, fmt::format("duplicate player '{}'", endpoint.name));
    c.players.push_back(std::move(endpoint));
  }
  c.examiner = doc.contains("examiner") ? EndpointConfig::from_json(doc["examiner"])
                                        : EndpointConfig::from_json({{"kind", "scripted"}});
  auto& t = c.tournament;
  t.rounds = field(doc, "rounds", t.rounds);
  t.trees_per_pairing = field(doc, "trees_per_pairing", t.trees_per_pairing);
  t.jobs = field(doc, "jobs", t.jobs);
  if (doc.contains("seed")) {
    t.seed = field<std::uint64_t>(doc, "seed", 0);
    c.has_seed = true;
  }
  t.match = match_config_from_json(doc.value("match", json()));
  c.trees = doc.value("trees", json());
  return c;
}

ArenaConfig ArenaConfig::load(const std::filesystem::path& path) {
  return from_json(load_config_json(path), path.parent_path());
}

std::vector<AgentProfile> load_profiles(const std::filesystem::path& path) {
  const json doc = load_config_json(path);
  const json& list = doc.is_object() && doc.contains("profiles") ? doc["profiles"] : doc;
  if (!list.is_array()) throw Error(ErrorCode::kConfigError, "profiles must be a JSON array");
  std::vector<AgentProfile> out;
  std::set<std::string> names;
  for (const auto& p : list) {
    out.push_back(AgentProfile::from_json(p));
    if (!names.insert(out.back().name).second)
      throw Error(ErrorCode::kConfigError, fmt::format("duplicate profile '{}'", out.back().name));
  }
  if (out.size() < 2) throw Error(ErrorCode::kConfigError, "need at least two profiles");
  return out;
}

}  // namespace arena
