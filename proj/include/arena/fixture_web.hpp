#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "arena/json_canon.hpp"
#include "arena/web.hpp"

namespace arena {

// A recorded corpus: search index, pages, redirects and failure lists.
//
//   { "search":    { "<query>": ["url", ...] },
//     "pages":     [ { "url", "title", "text", "html"?, "links"?: [
//                      { "anchor", "url", "context", "relation"? } ] } ],
//     "redirects": { "<from>": "<to>" },
//     "excluded":  ["url"],      // robots-excluded
//     "timeouts":  ["url"] }
class FixtureWeb : public Searcher, public Fetcher {
 public:
  FixtureWeb() = default;
  explicit FixtureWeb(const json& doc);

  // Reads `<dir>/web.json`.
  static FixtureWeb load_dir(const std::filesystem::path& dir);

  void add_page(FetchedPage page);
  void add_search(const std::string& query, std::vector<std::string> urls);
  void add_redirect(const std::string& from, const std::string& to);

  std::vector<std::string> search(const std::string& query,
                                  std::size_t k) const override;
  FetchedPage fetch(const std::string& url) const override;

  const std::map<std::string, FetchedPage>& pages() const { return pages_; }

 private:
  std::map<std::string, std::vector<std::string>> search_;
  std::map<std::string, FetchedPage> pages_;
  std::map<std::string, std::string> redirects_;
  std::set<std::string> excluded_;
  std::set<std::string> timeouts_;
};

std::string normalize_query(std::string_view query);

struct SyntheticWebOptions {
  std::uint64_t seed = 1;
  std::string domain = "wiki.example.org";
  std::size_t links_per_relation = 8;
  std::size_t relations_per_page = 2;
  int max_depth = 6;  // pages at this depth have no outbound links
};

// Procedurally generated site rooted at a topic hub. Every page is derived
// from its URL, so the corpus is unbounded in size yet fully deterministic.
class SyntheticWeb : public Searcher, public Fetcher {
 public:
  SyntheticWeb(std::string topic, SyntheticWebOptions options = {});

  std::vector<std::string> search(const std::string& query,
                                  std::size_t k) const override;
  FetchedPage fetch(const std::string& url) const override;

  const std::string& topic() const { return topic_; }
  std::string root_url() const;

 private:
  std::string base() const;
  std::string title_for(const std::vector<int>& path) const;

  std::string topic_;
  std::string slug_;
  SyntheticWebOptions options_;
};

}  // namespace arena
