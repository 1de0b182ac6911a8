#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace arena {

// One outbound hyperlink. `relation` is an optional annotation carried by
// fixture corpora; live pages leave it empty.
struct Link {
  std::string anchor;
  std::string url;
  std::string context;
  std::string relation;

  bool operator==(const Link&) const = default;
};

struct FetchedPage {
  std::string url;  // normalized, post-redirect
  std::string title;
  std::string text;
  std::string html;  // raw markup when available
  std::vector<Link> links;
};

class Searcher {
 public:
  virtual ~Searcher() = default;
  // Ranked result URLs, at most k. Throws Error on provider failure.
  virtual std::vector<std::string> search(const std::string& query,
                                          std::size_t k) const = 0;
};

class Fetcher {
 public:
  virtual ~Fetcher() = default;
  // Throws Error (http-error, timeout, robots-excluded, network-failure).
  virtual FetchedPage fetch(const std::string& url) const = 0;
};

// ---- URLs ---------------------------------------------------------------

struct UrlParts {
  std::string scheme;
  std::string host;  // includes ":port" when present
  std::string path;  // begins with '/' or is empty
  std::string query;  // without '?'
};

std::optional<UrlParts> split_url(std::string_view url);

bool is_valid_url(std::string_view url);

// Lowercases scheme and host, strips the fragment and any trailing slash.
std::string normalize_url(std::string_view url);

// Resolves `href` against `base`. Returns nullopt for non-http targets
// (mailto:, javascript:, pure fragments).
std::optional<std::string> resolve_url(std::string_view base,
                                       std::string_view href);

std::string url_host(std::string_view url);

// Non-empty, percent-decoded path segments.
std::vector<std::string> url_path_segments(std::string_view url);

// ---- Markup ---------------------------------------------------------------

struct ParsedHtml {
  std::string title;
  std::string text;
  std::vector<Link> links;  // resolved, not deduplicated
};

// Best-effort scanner: tolerates unclosed tags and broken attributes.
ParsedHtml parse_html(std::string_view html, std::string_view base_url,
                      std::size_t context_chars = 200);

// Absolute, fragment-free, deduplicated links of a page (first occurrence
// wins). Annotated links come first, then anchors found in the markup.
// Self-links are dropped.
std::vector<Link> extract_links(const FetchedPage& page,
                                std::size_t context_chars = 200);

}  // namespace arena
