#include "arena/chat.hpp"

#include <cstdlib>
#include <set>
#include <thread>

#include "arena/rng.hpp"
#include "arena/web.hpp"
#include "fmt/format.h"
#include "httplib.h"

namespace arena {

Clock::Duration SteadyClock::now() const {
  return std::chrono::duration_cast<Duration>(
      std::chrono::steady_clock::now().time_since_epoch());
}

void SteadyClock::sleep_for(Duration d) { std::this_thread::sleep_for(d); }

Clock& system_clock() {
  static SteadyClock clock;
  return clock;
}

RateLimiter::RateLimiter(double requests_per_second, Clock& clock)
    : interval_(requests_per_second > 0
                    ? std::chrono::duration_cast<Clock::Duration>(
                          std::chrono::duration<double>(1.0 / requests_per_second))
                    : Clock::Duration::zero()),
      clock_(clock) {}

Clock::Duration RateLimiter::acquire() {
  Clock::Duration slot;
  Clock::Duration now;
  {
    std::lock_guard lock(mutex_);
    now = clock_.now();
    slot = last_ ? std::max(now, *last_ + interval_) : now;
    last_ = slot;
  }
  if (slot > now) clock_.sleep_for(slot - now);
  return slot;
}

// ---- EndpointConfig ----------------------------------------------------------

EndpointConfig EndpointConfig::from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::kConfigError, "endpoint config must be an object");
  EndpointConfig c;
  try {
    c.kind = doc.at("kind").get<std::string>();
    c.name = doc.value("name", "");
    c.base_url = doc.value("base_url", "");
    c.model = doc.value("model", "");
    c.api_key_env = doc.value("api_key_env", "");
    c.rps = doc.value("rps", 1.0);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("endpoint config: ") + e.what());
  }
  if (c.kind != "http-chat" && c.kind != "scripted" && c.kind != "fixture-web")
    throw Error(ErrorCode::kConfigError, "unknown endpoint kind '" + c.kind + "'");
  if (c.kind == "http-chat" && c.base_url.empty())
    throw Error(ErrorCode::kConfigError, "http-chat endpoint needs base_url");
  if (c.rps <= 0) throw Error(ErrorCode::kConfigError, "rps must be positive");
  c.extra = json::object();
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    static const std::set<std::string> kKnown = {"kind", "name", "base_url", "model",
                                                 "api_key_env", "rps"};
    if (!kKnown.count(it.key())) c.extra[it.key()] = it.value();
  }
  return c;
}

json EndpointConfig::to_json() const {
  json doc = extra.is_object() ? extra : json::object();
  doc["kind"] = kind;
  if (!name.empty()) doc["name"] = name;
  doc["base_url"] = base_url;
  doc["model"] = model;
  doc["api_key_env"] = api_key_env;
  doc["rps"] = rps;
  return doc;
}

std::string read_api_key(const EndpointConfig& config) {
  if (config.api_key_env.empty())
    throw Error(ErrorCode::kAuthError, "endpoint has no api_key_env");
  const char* value = std::getenv(config.api_key_env.c_str());
  if (value == nullptr || *value == '\0')
    throw Error(ErrorCode::kAuthError,
                "environment variable " + config.api_key_env + " is not set");
  return value;
}

// ---- ScriptedChatClient ------------------------------------------------------

std::string prompt_hash(const std::string& prompt) {
  return fmt::format("{:016x}", fnv1a64(prompt));
}

ScriptedChatClient::ScriptedChatClient(const json& script) {
  try {
    if (script.contains("replies")) {
      for (auto it = script["replies"].begin(); it != script["replies"].end(); ++it)
        replies_[it.key()] = it.value().get<std::string>();
    }
    if (script.contains("sequence"))
      sequence_ = script["sequence"].get<std::vector<std::string>>();
    if (script.contains("default")) default_ = script["default"].get<std::string>();
    max_prompt_chars_ = script.value("max_prompt_chars", max_prompt_chars_);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("scripted replies: ") + e.what());
  }
}

void ScriptedChatClient::add_reply(const std::string& prompt, std::string reply) {
  replies_[prompt_hash(prompt)] = std::move(reply);
}

void ScriptedChatClient::push_sequence(std::string reply) {
  sequence_.push_back(std::move(reply));
}

ChatResponse ScriptedChatClient::chat(const ChatRequest& request) {
  std::lock_guard lock(mutex_);
  ++calls_;
  prompts_.push_back(request.prompt);
  if (request.prompt.size() > max_prompt_chars_)
    throw Error(ErrorCode::kPromptTooLarge,
                fmt::format("{} chars exceeds cap {}", request.prompt.size(), max_prompt_chars_));
  if (auto it = replies_.find(prompt_hash(request.prompt)); it != replies_.end())
    return {it->second, {}};
  if (next_ < sequence_.size()) return {sequence_[next_++], {}};
  if (default_) return {*default_, {}};
  throw Error(ErrorCode::kMalformedResponse, "no scripted reply for prompt " +
                                                 prompt_hash(request.prompt));
}

// ---- HttpChatClient ------------------------------------------------------------

HttpChatClient::HttpChatClient(EndpointConfig config, HttpChatOptions options,
                               Clock& clock)
    : config_(std::move(config)),
      options_(options),
      clock_(clock),
      limiter_(config_.rps, clock) {}

ChatResponse HttpChatClient::chat(const ChatRequest& request) {
  if (request.prompt.size() > options_.max_prompt_chars)
    throw Error(ErrorCode::kPromptTooLarge,
                fmt::format("{} chars exceeds cap {}", request.prompt.size(),
                            options_.max_prompt_chars));
  const std::string key = read_api_key(config_);
  return with_retry(options_.retry, clock_, [&] {
    limiter_.acquire();
    return call_once(request, key);
  });
}

ChatResponse HttpChatClient::call_once(const ChatRequest& request,
                                       const std::string& key) {
  auto parts = split_url(config_.base_url);
  if (!parts) throw Error(ErrorCode::kConfigError, "bad base_url " + config_.base_url);
  std::string path = parts->path;
  while (!path.empty() && path.back() == '/') path.pop_back();
  path += "/chat/completions";

  httplib::Client client(parts->scheme + "://" + parts->host);
  client.set_connection_timeout(std::chrono::seconds(10));
  client.set_read_timeout(options_.timeout);
  client.set_write_timeout(options_.timeout);

  json body = {{"model", config_.model},
               {"messages", json::array({{{"role", "user"}, {"content", request.prompt}}})},
               {"temperature", request.decoding.temperature},
               {"max_tokens", request.decoding.max_output_tokens}};
  httplib::Headers headers = {{"Authorization", "Bearer " + key}};

  const auto start = std::chrono::steady_clock::now();
  auto res = client.Post(path, headers, body.dump(), "application/json");
  const auto latency = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  if (!res) {
    const auto err = res.error();
    if (err == httplib::Error::Read || err == httplib::Error::Write)
      throw Error(ErrorCode::kTimeout, httplib::to_string(err));
    throw Error(ErrorCode::kNetworkFailure, httplib::to_string(err));
  }
  if (res->status == 401 || res->status == 403)
    throw Error(ErrorCode::kAuthError, fmt::format("status {}", res->status));
  if (res->status == 429) throw Error(ErrorCode::kRateLimited, "status 429");
  if (res->status >= 500)
    throw Error(ErrorCode::kProviderError, fmt::format("status {}", res->status));
  if (res->status != 200)
    throw Error(ErrorCode::kHttpError, fmt::format("status {}: {}", res->status, res->body));

  auto doc = json::parse(res->body, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::kMalformedResponse, "body is not JSON");
  try {
    std::string text = doc.at("choices").at(0).at("message").at("content").get<std::string>();
    if (text.empty()) throw Error(ErrorCode::kMalformedResponse, "empty completion");
    return {std::move(text), latency};
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedResponse, e.what());
  }
}

}  // namespace arena
