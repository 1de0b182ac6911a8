#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "arena/error.hpp"
#include "arena/json_canon.hpp"

namespace arena {

struct Decoding {
  double temperature = 0.2;
  int max_output_tokens = 2048;
};

struct ChatRequest {
  std::string prompt;
  Decoding decoding;
};

struct ChatResponse {
  std::string text;
  std::chrono::milliseconds latency{0};
};

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  // Raw model text. Throws Error (auth-error, rate-limited,
  // malformed-response, prompt-too-large, provider-error).
  virtual ChatResponse chat(const ChatRequest& request) = 0;
};

// ---- Time -----------------------------------------------------------------

class Clock {
 public:
  using Duration = std::chrono::nanoseconds;
  virtual ~Clock() = default;
  virtual Duration now() const = 0;
  virtual void sleep_for(Duration d) = 0;
};

class SteadyClock : public Clock {
 public:
  Duration now() const override;
  void sleep_for(Duration d) override;
};

// Time only advances through sleep_for, so tests observe exact schedules.
class FakeClock : public Clock {
 public:
  Duration now() const override { return Duration(now_.load()); }
  void sleep_for(Duration d) override { now_.fetch_add(d.count()); }
  void advance(Duration d) { now_.fetch_add(d.count()); }

 private:
  std::atomic<std::int64_t> now_{0};
};

Clock& system_clock();

// Spaces acquisitions at least 1/rps apart; callers block until their slot.
class RateLimiter {
 public:
  RateLimiter(double requests_per_second, Clock& clock);

  // Returns the slot time granted to this caller.
  Clock::Duration acquire();

 private:
  Clock::Duration interval_;
  Clock& clock_;
  std::mutex mutex_;
  std::optional<Clock::Duration> last_;
};

struct RetryPolicy {
  int attempts = 3;
  std::chrono::milliseconds base_delay{500};
};

// Runs `op`, retrying transient Errors with exponential backoff on `clock`.
template <typename Fn>
auto with_retry(const RetryPolicy& policy, Clock& clock, Fn&& op) -> decltype(op());

// ---- Endpoint configuration ------------------------------------------------

struct EndpointConfig {
  std::string kind;  // "http-chat" | "scripted" | "fixture-web"
  std::string name;
  std::string base_url;
  std::string model;
  std::string api_key_env;
  double rps = 1.0;
  json extra;  // kind-specific fields (profile, replies_file, fixture_dir...)

  static EndpointConfig from_json(const json& doc);
  json to_json() const;
};

// ---- Implementations -------------------------------------------------------

// Replies keyed by FNV-1a hash of the prompt (16 hex digits), with an
// optional queue of sequential replies consumed before the default.
//   { "replies": { "<hash>": "text" }, "sequence": ["text", ...],
//     "default": "text", "max_prompt_chars": n }
class ScriptedChatClient : public ChatClient {
 public:
  ScriptedChatClient() = default;
  explicit ScriptedChatClient(const json& script);

  void add_reply(const std::string& prompt, std::string reply);
  void push_sequence(std::string reply);
  void set_default(std::string reply) { default_ = std::move(reply); }
  void set_max_prompt_chars(std::size_t n) { max_prompt_chars_ = n; }

  ChatResponse chat(const ChatRequest& request) override;

  std::size_t calls() const { return calls_; }
  const std::vector<std::string>& prompts() const { return prompts_; }

 private:
  std::map<std::string, std::string> replies_;
  std::vector<std::string> sequence_;
  std::size_t next_ = 0;
  std::optional<std::string> default_;
  std::size_t max_prompt_chars_ = 200000;
  std::size_t calls_ = 0;
  std::vector<std::string> prompts_;
  std::mutex mutex_;
};

std::string prompt_hash(const std::string& prompt);

struct HttpChatOptions {
  std::size_t max_prompt_chars = 200000;
  std::chrono::seconds timeout{120};
  RetryPolicy retry;
  Decoding defaults;
};

// OpenAI-compatible chat completions: POST {base_url}/chat/completions.
class HttpChatClient : public ChatClient {
 public:
  HttpChatClient(EndpointConfig config, HttpChatOptions options = {},
                 Clock& clock = system_clock());

  ChatResponse chat(const ChatRequest& request) override;

 private:
  ChatResponse call_once(const ChatRequest& request, const std::string& key);

  EndpointConfig config_;
  HttpChatOptions options_;
  Clock& clock_;
  RateLimiter limiter_;
};

std::string read_api_key(const EndpointConfig& config);

template <typename Fn>
auto with_retry(const RetryPolicy& policy, Clock& clock, Fn&& op) -> decltype(op()) {
  auto delay = std::chrono::duration_cast<Clock::Duration>(policy.base_delay);
  for (int attempt = 1;; ++attempt) {
    try {
      return op();
    } catch (const Error& e) {
      if (!is_transient(e.code()) || attempt >= policy.attempts) throw;
      clock.sleep_for(delay);
      delay *= 2;
    }
  }
}

}  // namespace arena
