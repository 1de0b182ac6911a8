#include "arena/crawler.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

#include "arena/error.hpp"
#include "spdlog/spdlog.h"

namespace arena {

std::string clean_relation(std::string_view label) {
  std::string out;
  for (char c : label) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  auto b = out.find_first_not_of(" \t\r\n\"'");
  if (b == std::string::npos) return kDefaultRelation;
  auto e = out.find_last_not_of(" \t\r\n\"'.");
  return out.substr(b, e - b + 1);
}

std::vector<std::string> annotation_labels(const FetchedPage&,
                                           const std::vector<Link>& links) {
  std::vector<std::string> labels;
  labels.reserve(links.size());
  for (const auto& link : links) labels.push_back(clean_relation(link.relation));
  return labels;
}

Crawler::Crawler(const Fetcher& fetcher, RelationLabeler labeler,
                 CrawlOptions options)
    : fetcher_(fetcher), labeler_(std::move(labeler)), options_(options) {
  if (!labeler_) labeler_ = annotation_labels;
}

std::optional<FetchedPage> Crawler::try_fetch(const std::string& url) {
  const std::string key = normalize_url(url);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  try {
    FetchedPage page = fetcher_.fetch(key);
    page.url = normalize_url(page.url.empty() ? key : page.url);
    cache_.emplace(key, page);
    cache_.emplace(page.url, page);
    return page;
  } catch (const Error& e) {
    ++fetch_failures_;
    spdlog::debug("skipping {}: {}", key, e.what());
    return std::nullopt;
  }
}

std::vector<std::pair<Link, std::string>> Crawler::labeled_links(
    const FetchedPage& page) {
  auto links = extract_links(page, options_.context_chars);
  std::vector<std::string> labels;
  if (!links.empty()) labels = labeler_(page, links);
  if (labels.size() != links.size()) labels.assign(links.size(), kDefaultRelation);
  std::vector<std::pair<Link, std::string>> out;
  out.reserve(links.size());
  for (std::size_t i = 0; i < links.size(); ++i)
    out.emplace_back(std::move(links[i]), clean_relation(labels[i]));
  return out;
}

std::optional<NodeId> Crawler::attach(InfoTree& tree, NodeId parent,
                                      const Link& link,
                                      const std::string& relation) {
  if (tree.contains_url(link.url)) return std::nullopt;
  auto page = try_fetch(link.url);
  if (!page || tree.contains_url(page->url)) return std::nullopt;
  std::string title = page->title.empty() ? link.anchor : page->title;
  return tree.add_child(parent, page->url, std::move(title), page->text, relation);
}

InfoTree Crawler::build_tree(const std::string& topic, const Searcher& searcher,
                             std::size_t budget) {
  if (budget < 1) throw Error(ErrorCode::kInvalidArgument, "budget must be >= 1");
  const auto hits = searcher.search(topic, options_.search_k);

  std::optional<FetchedPage> root_page;
  for (const auto& url : hits) {
    auto page = try_fetch(url);
    if (!page) continue;
    if (extract_links(*page, options_.context_chars).size() >= options_.min_root_links) {
      root_page = std::move(page);
      break;
    }
  }
  if (!root_page)
    throw Error(ErrorCode::kNoFetchableRoot,
                "no search hit for '" + topic + "' fetched with enough links");

  InfoTree tree(topic, root_page->url, root_page->title, root_page->text);
  std::deque<std::pair<NodeId, FetchedPage>> frontier;
  frontier.emplace_back(tree.root(), std::move(*root_page));
  while (!frontier.empty() && tree.size() < budget) {
    auto [id, page] = std::move(frontier.front());
    frontier.pop_front();
    if (tree.node(id).depth >= options_.max_depth) continue;
    std::size_t attached = 0;
    for (const auto& [link, relation] : labeled_links(page)) {
      if (attached >= options_.build_fanout || tree.size() >= budget) break;
      if (auto child = attach(tree, id, link, relation)) {
        ++attached;
        if (auto child_page = try_fetch(tree.node(*child).url))
          frontier.emplace_back(*child, std::move(*child_page));
      }
    }
  }
  return tree;
}

std::size_t Crawler::expand_width(InfoTree& tree, NodeId node, int target) {
  const InfoNode focal = tree.node(node);
  if (!focal.parent || !tree.needs_width_expansion(node, target)) return 0;
  auto parent_page = try_fetch(tree.node(*focal.parent).url);
  if (!parent_page) return 0;
  std::size_t added = 0;
  for (const auto& [link, relation] : labeled_links(*parent_page)) {
    if (!tree.needs_width_expansion(node, target)) break;
    if (relation != focal.relation) continue;
    if (attach(tree, *focal.parent, link, relation)) ++added;
  }
  return added;
}

std::size_t Crawler::expand_depth(InfoTree& tree, NodeId node) {
  auto page = try_fetch(tree.node(node).url);
  if (!page) return 0;
  std::size_t added = 0;
  for (const auto& [link, relation] : labeled_links(*page)) {
    if (added >= options_.depth_fanout) break;
    if (attach(tree, node, link, relation)) ++added;
  }
  return added;
}

}  // namespace arena
