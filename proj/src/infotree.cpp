#include "arena/infotree.hpp"

#include <algorithm>
#include <set>

#include "arena/error.hpp"
#include "arena/web.hpp"

namespace arena {

InfoTree::InfoTree(std::string topic, std::string root_url,
                   std::string root_title, std::string root_content)
    : topic_(std::move(topic)) {
  InfoNode root;
  root.id = NodeId{0};
  root.url = normalize_url(root_url);
  root.title = std::move(root_title);
  root.content = std::move(root_content);
  root.depth = 0;
  by_url_.emplace(root.url, root.id);
  nodes_.push_back(std::move(root));
  children_.emplace_back();
}

bool InfoTree::contains(NodeId id) const {
  return to_int(id) >= 0 && static_cast<std::size_t>(to_int(id)) < nodes_.size();
}

const InfoNode& InfoTree::node(NodeId id) const {
  if (!contains(id))
    throw Error(ErrorCode::kUnknownNode, "node " + std::to_string(to_int(id)));
  return nodes_[static_cast<std::size_t>(to_int(id))];
}

bool InfoTree::contains_url(const std::string& url) const {
  return by_url_.count(normalize_url(url)) > 0;
}

std::optional<NodeId> InfoTree::find_url(const std::string& url) const {
  auto it = by_url_.find(normalize_url(url));
  if (it == by_url_.end()) return std::nullopt;
  return it->second;
}

NodeId InfoTree::add_child(NodeId parent, const std::string& url,
                           std::string title, std::string content,
                           std::string relation) {
  const InfoNode& p = node(parent);
  std::string normalized = normalize_url(url);
  if (by_url_.count(normalized))
    throw Error(ErrorCode::kInvalidArgument, "duplicate url " + normalized);
  InfoNode child;
  child.id = NodeId{static_cast<std::int32_t>(nodes_.size())};
  child.url = std::move(normalized);
  child.title = std::move(title);
  child.content = std::move(content);
  child.parent = parent;
  child.relation = std::move(relation);
  child.depth = p.depth + 1;
  by_url_.emplace(child.url, child.id);
  children_[static_cast<std::size_t>(to_int(parent))].push_back(child.id);
  children_.emplace_back();
  nodes_.push_back(std::move(child));
  return nodes_.back().id;
}

const std::vector<NodeId>& InfoTree::children(NodeId id) const {
  node(id);
  return children_[static_cast<std::size_t>(to_int(id))];
}

int InfoTree::max_depth() const {
  int d = 0;
  for (const auto& n : nodes_) d = std::max(d, n.depth);
  return d;
}

std::vector<NodeId> InfoTree::nodes_at_depth(int depth) const {
  std::vector<NodeId> out;
  for (const auto& n : nodes_)
    if (n.depth == depth) out.push_back(n.id);
  return out;
}

std::vector<NodeId> InfoTree::ancestors(NodeId id) const {
  std::vector<NodeId> out;
  auto current = node(id).parent;
  while (current) {
    out.push_back(*current);
    current = node(*current).parent;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<NodeId> InfoTree::siblings(NodeId id, std::size_t limit) const {
  const InfoNode& focal = node(id);
  std::vector<NodeId> out{id};
  if (!focal.parent) return out;
  for (NodeId peer : children(*focal.parent)) {
    if (out.size() >= limit) break;
    if (peer == id) continue;
    if (node(peer).relation == focal.relation) out.push_back(peer);
  }
  return out;
}

bool InfoTree::needs_width_expansion(NodeId id, int width) const {
  const auto cohort = siblings(id, kUnlimited).size();
  return static_cast<long>(cohort) < static_cast<long>(width);
}

TreePath InfoTree::path_to(NodeId id) const {
  TreePath path;
  path.nodes = ancestors(id);
  path.nodes.push_back(id);
  return path;
}

bool InfoTree::is_valid_path(const TreePath& path) const {
  if (path.nodes.empty() || path.nodes.front() != root()) return false;
  for (std::size_t i = 0; i < path.nodes.size(); ++i) {
    if (!contains(path.nodes[i])) return false;
    if (i > 0 && node(path.nodes[i]).parent != path.nodes[i - 1]) return false;
  }
  return true;
}

TreePath InfoTree::random_start(Rng& rng) const {
  const int deepest = max_depth();
  if (deepest == 0)
    throw Error(ErrorCode::kRootOnlyTree, "tree has no non-root node");
  const auto eligible = nodes_at_depth(std::min(2, deepest));
  return path_to(eligible[rng.index(eligible.size())]);
}

std::vector<std::string> InfoTree::check_invariants() const {
  std::vector<std::string> problems;
  if (nodes_.empty()) return problems;
  std::set<std::string> urls;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const InfoNode& n = nodes_[i];
    const std::string tag = "node " + std::to_string(i);
    if (static_cast<std::size_t>(to_int(n.id)) != i) problems.push_back(tag + ": id mismatch");
    if (!urls.insert(n.url).second) problems.push_back(tag + ": duplicate url " + n.url);
    if (n.url != normalize_url(n.url)) problems.push_back(tag + ": url not normalized");
    if (i == 0) {
      if (n.parent) problems.push_back("root has a parent");
      if (n.depth != 0) problems.push_back("root depth is not 0");
      continue;
    }
    if (!n.parent) {
      problems.push_back(tag + ": second root");
      continue;
    }
    if (!contains(*n.parent) || to_int(*n.parent) >= to_int(n.id)) {
      problems.push_back(tag + ": parent missing or not older");
      continue;
    }
    if (n.depth != node(*n.parent).depth + 1) problems.push_back(tag + ": depth mismatch");
  }
  return problems;
}

json InfoTree::to_json() const {
  json nodes = json::array();
  for (const auto& n : nodes_) {
    nodes.push_back({{"id", to_int(n.id)},
                     {"url", n.url},
                     {"title", n.title},
                     {"content", n.content},
                     {"parent", n.parent ? json(to_int(*n.parent)) : json(nullptr)},
                     {"relation", n.relation},
                     {"depth", n.depth}});
  }
  return {{"topic", topic_}, {"root", to_int(root())}, {"nodes", std::move(nodes)}};
}

InfoTree InfoTree::from_json(const json& doc) {
  try {
    InfoTree tree;
    tree.topic_ = doc.at("topic").get<std::string>();
    if (doc.at("root").get<int>() != 0)
      throw Error(ErrorCode::kConfigError, "tree root must have id 0");
    const auto& nodes = doc.at("nodes");
    if (!nodes.is_array() || nodes.empty())
      throw Error(ErrorCode::kConfigError, "tree has no nodes");
    std::vector<json> sorted(nodes.begin(), nodes.end());
    std::sort(sorted.begin(), sorted.end(), [](const json& a, const json& b) {
      return a.at("id").get<int>() < b.at("id").get<int>();
    });
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const json& j = sorted[i];
      InfoNode n;
      n.id = NodeId{j.at("id").get<std::int32_t>()};
      if (static_cast<std::size_t>(to_int(n.id)) != i)
        throw Error(ErrorCode::kConfigError, "node ids must be dense from 0");
      n.url = j.at("url").get<std::string>();
      n.title = j.at("title").get<std::string>();
      n.content = j.at("content").get<std::string>();
      if (!j.at("parent").is_null()) n.parent = NodeId{j.at("parent").get<std::int32_t>()};
      n.relation = j.at("relation").get<std::string>();
      n.depth = j.at("depth").get<int>();
      if (n.parent) {
        if (to_int(*n.parent) >= to_int(n.id))
          throw Error(ErrorCode::kConfigError, "parent must precede child");
        tree.children_[static_cast<std::size_t>(to_int(*n.parent))].push_back(n.id);
      } else if (i != 0) {
        throw Error(ErrorCode::kConfigError, "multiple roots");
      }
      if (!tree.by_url_.emplace(n.url, n.id).second)
        throw Error(ErrorCode::kConfigError, "duplicate url " + n.url);
      tree.children_.emplace_back();
      tree.nodes_.push_back(std::move(n));
    }
    auto problems = tree.check_invariants();
    if (!problems.empty()) throw Error(ErrorCode::kConfigError, problems.front());
    return tree;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("tree snapshot: ") + e.what());
  }
}

}  // namespace arena
