#pragma once

#include <chrono>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "arena/chat.hpp"
#include "arena/web.hpp"

namespace arena {

struct HttpWebOptions {
  std::chrono::seconds timeout{20};
  int max_redirects = 5;
  std::size_t context_chars = 200;
  std::string user_agent = "arena-crawler/1.0";
  bool respect_robots = true;
  RetryPolicy retry;
};

// Live page fetcher: follows redirects itself so the returned URL is the
// normalized final location, and honors robots.txt Disallow rules for "*".
class HttpFetcher : public Fetcher {
 public:
  explicit HttpFetcher(HttpWebOptions options = {}, double rps = 2.0,
                       Clock& clock = system_clock());

  FetchedPage fetch(const std::string& url) const override;

 private:
  bool allowed_by_robots(const UrlParts& parts) const;

  HttpWebOptions options_;
  Clock& clock_;
  mutable RateLimiter limiter_;
  mutable std::mutex robots_mutex_;
  mutable std::map<std::string, std::vector<std::string>> robots_;
};

// Parses Disallow prefixes that apply to user-agent "*".
std::vector<std::string> parse_robots(const std::string& robots_txt);

// Generic JSON search endpoint:
//   GET {base_url}?q=<query>&num=<k>  ->  { "results": [ { "url": ... } ] }
// The API key, when configured, is sent as "Authorization: Bearer".
class HttpSearcher : public Searcher {
 public:
  explicit HttpSearcher(EndpointConfig config, HttpWebOptions options = {},
                        Clock& clock = system_clock());

  std::vector<std::string> search(const std::string& query,
                                  std::size_t k) const override;

 private:
  EndpointConfig config_;
  HttpWebOptions options_;
  Clock& clock_;
  mutable RateLimiter limiter_;
};

}  // namespace arena
