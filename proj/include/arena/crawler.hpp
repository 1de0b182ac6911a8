#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "arena/infotree.hpp"
#include "arena/web.hpp"

namespace arena {

inline constexpr const char* kDefaultRelation = "related";

// Produces one relation label per link of a parent page.
using RelationLabeler = std::function<std::vector<std::string>(
    const FetchedPage& parent, const std::vector<Link>& links)>;

// Uses the links' own relation annotations; unlabeled links get "related".
std::vector<std::string> annotation_labels(const FetchedPage& parent,
                                           const std::vector<Link>& links);

// Trims and lowercases; empty labels become "related".
std::string clean_relation(std::string_view label);

struct CrawlOptions {
  std::size_t budget = 12;
  int max_depth = 2;         // initial build only
  std::size_t build_fanout = 3;
  std::size_t depth_fanout = 3;
  std::size_t min_root_links = 5;
  std::size_t search_k = 10;
  std::size_t context_chars = 200;
};

// Grows information trees from a fetcher. One crawler per match: it keeps a
// page cache and is not meant to be shared between writers.
class Crawler {
 public:
  explicit Crawler(const Fetcher& fetcher,
                   RelationLabeler labeler = annotation_labels,
                   CrawlOptions options = {});

  const CrawlOptions& options() const { return options_; }

  // Root = first search hit that fetches and has >= min_root_links links;
  // then breadth-first attachment of up to build_fanout children per page
  // until `budget` nodes or max_depth is reached.
  InfoTree build_tree(const std::string& topic, const Searcher& searcher,
                      std::size_t budget);
  InfoTree build_tree(const std::string& topic, const Searcher& searcher) {
    return build_tree(topic, searcher, options_.budget);
  }

  // Attaches unvisited same-relation links of the parent page until the
  // node's cohort reaches `target`. Returns the number of nodes added.
  std::size_t expand_width(InfoTree& tree, NodeId node, int target);

  // Attaches up to depth_fanout unvisited outbound links as children.
  std::size_t expand_depth(InfoTree& tree, NodeId node);

  std::size_t fetch_failures() const { return fetch_failures_; }

 private:
  std::optional<FetchedPage> try_fetch(const std::string& url);
  std::vector<std::pair<Link, std::string>> labeled_links(const FetchedPage& page);
  std::optional<NodeId> attach(InfoTree& tree, NodeId parent, const Link& link,
                               const std::string& relation);

  const Fetcher& fetcher_;
  RelationLabeler labeler_;
  CrawlOptions options_;
  std::map<std::string, FetchedPage> cache_;
  std::size_t fetch_failures_ = 0;
};

}  // namespace arena
