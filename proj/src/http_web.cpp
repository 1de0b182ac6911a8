#include "arena/http_web.hpp"

#include <sstream>

#include "arena/error.hpp"
#include "fmt/format.h"
#include "httplib.h"

namespace arena {
namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

httplib::Client make_client(const UrlParts& parts, const HttpWebOptions& options) {
  httplib::Client client(parts.scheme + "://" + parts.host);
  client.set_connection_timeout(std::chrono::seconds(10));
  client.set_read_timeout(options.timeout);
  client.set_follow_location(false);
  client.set_default_headers({{"User-Agent", options.user_agent}});
  return client;
}

std::string target_of(const UrlParts& parts) {
  std::string target = parts.path.empty() ? "/" : parts.path;
  if (!parts.query.empty()) target += "?" + parts.query;
  return target;
}

[[noreturn]] void throw_transport(httplib::Error err, const std::string& url) {
  if (err == httplib::Error::Read || err == httplib::Error::Write ||
      err == httplib::Error::ConnectionTimeout)
    throw Error(ErrorCode::kTimeout, url + ": " + httplib::to_string(err));
  throw Error(ErrorCode::kNetworkFailure, url + ": " + httplib::to_string(err));
}

}  // namespace

std::vector<std::string> parse_robots(const std::string& robots_txt) {
  std::vector<std::string> disallow;
  std::istringstream in(robots_txt);
  std::string line;
  bool applies = false;
  bool in_agent_block = false;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    std::string key = lower(line.substr(0, colon));
    std::string value = line.substr(colon + 1);
    auto trim = [](std::string& s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
    };
    trim(key);
    trim(value);
    if (key == "user-agent") {
      if (!in_agent_block) applies = false;
      in_agent_block = true;
      if (value == "*") applies = true;
    } else {
      in_agent_block = false;
      if (applies && key == "disallow" && !value.empty()) disallow.push_back(value);
    }
  }
  return disallow;
}

HttpFetcher::HttpFetcher(HttpWebOptions options, double rps, Clock& clock)
    : options_(std::move(options)), clock_(clock), limiter_(rps, clock) {}

bool HttpFetcher::allowed_by_robots(const UrlParts& parts) const {
  const std::string origin = lower(parts.scheme) + "://" + lower(parts.host);
  std::vector<std::string> rules;
  {
    std::lock_guard lock(robots_mutex_);
    auto it = robots_.find(origin);
    if (it != robots_.end()) {
      rules = it->second;
    } else {
      auto client = make_client(parts, options_);
      auto res = client.Get("/robots.txt");
      if (res && res->status == 200) rules = parse_robots(res->body);
      robots_.emplace(origin, rules);
    }
  }
  const std::string path = parts.path.empty() ? "/" : parts.path;
  for (const auto& prefix : rules)
    if (path.starts_with(prefix)) return false;
  return true;
}

FetchedPage HttpFetcher::fetch(const std::string& url) const {
  if (!is_valid_url(url)) throw Error(ErrorCode::kInvalidArgument, "bad url " + url);
  std::string current = normalize_url(url);
  for (int hop = 0; hop <= options_.max_redirects; ++hop) {
    auto parts = *split_url(current);
    if (options_.respect_robots && !allowed_by_robots(parts))
      throw Error(ErrorCode::kRobotsExcluded, current);
    auto res = with_retry(options_.retry, clock_, [&] {
      limiter_.acquire();
      auto client = make_client(parts, options_);
      auto r = client.Get(target_of(parts));
      if (!r) throw_transport(r.error(), current);
      if (r->status == 429) throw Error(ErrorCode::kRateLimited, current);
      if (r->status >= 500)
        throw Error(ErrorCode::kProviderError, fmt::format("{} {}", r->status, current));
      return r;
    });
    if (res->status >= 300 && res->status < 400 && res->has_header("Location")) {
      auto next = resolve_url(current, res->get_header_value("Location"));
      if (!next) throw Error(ErrorCode::kHttpError, "bad redirect from " + current);
      current = *next;
      continue;
    }
    if (res->status != 200)
      throw Error(ErrorCode::kHttpError, fmt::format("{} {}", res->status, current));
    FetchedPage page;
    page.url = current;
    page.html = res->body;
    auto parsed = parse_html(page.html, page.url, options_.context_chars);
    page.title = parsed.title;
    page.text = std::move(parsed.text);
    return page;
  }
  throw Error(ErrorCode::kHttpError, "too many redirects from " + url);
}

HttpSearcher::HttpSearcher(EndpointConfig config, HttpWebOptions options,
                           Clock& clock)
    : config_(std::move(config)),
      options_(std::move(options)),
      clock_(clock),
      limiter_(config_.rps, clock) {}

std::vector<std::string> HttpSearcher::search(const std::string& query,
                                              std::size_t k) const {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  auto parts = split_url(config_.base_url);
  if (!parts) throw Error(ErrorCode::kConfigError, "bad search base_url");
  httplib::Headers headers;
  if (!config_.api_key_env.empty())
    headers.emplace("Authorization", "Bearer " + read_api_key(config_));
  httplib::Params params = {{"q", query}, {"num", std::to_string(k)}};
  auto res = with_retry(options_.retry, clock_, [&] {
    limiter_.acquire();
    auto client = make_client(*parts, options_);
    auto r = client.Get(parts->path.empty() ? "/" : parts->path, params, headers);
    if (!r) throw_transport(r.error(), config_.base_url);
    if (r->status == 401 || r->status == 403) throw Error(ErrorCode::kAuthError, "search auth");
    if (r->status == 429) throw Error(ErrorCode::kRateLimited, "search rate limited");
    if (r->status != 200)
      throw Error(ErrorCode::kProviderError, fmt::format("search status {}", r->status));
    return r;
  });
  auto doc = json::parse(res->body, nullptr, false);
  if (doc.is_discarded() || !doc.contains("results") || !doc["results"].is_array())
    throw Error(ErrorCode::kMalformedResponse, "search body lacks results[]");
  std::vector<std::string> urls;
  for (const auto& hit : doc["results"]) {
    if (urls.size() >= k) break;
    if (hit.is_object() && hit.contains("url") && hit["url"].is_string()) {
      const auto u = hit["url"].get<std::string>();
      if (is_valid_url(u)) urls.push_back(normalize_url(u));
    }
  }
  return urls;
}

}  // namespace arena
