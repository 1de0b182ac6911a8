#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "arena/json_canon.hpp"
#include "arena/rng.hpp"

namespace arena {

enum class NodeId : std::int32_t {};

constexpr std::int32_t to_int(NodeId id) { return static_cast<std::int32_t>(id); }

// A scraped page placed in the information tree. `relation` labels the edge
// from the parent and is empty for the root.
struct InfoNode {
  NodeId id{};
  std::string url;
  std::string title;
  std::string content;
  std::optional<NodeId> parent;
  std::string relation;
  int depth = 0;

  bool operator==(const InfoNode&) const = default;
};

// Root-first chain of node ids; the last element is the focal node.
struct TreePath {
  std::vector<NodeId> nodes;

  NodeId focal() const { return nodes.back(); }
  int depth() const { return static_cast<int>(nodes.size()) - 1; }
  bool operator==(const TreePath&) const = default;
};

inline constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

class InfoTree {
 public:
  InfoTree() = default;
  InfoTree(std::string topic, std::string root_url, std::string root_title,
           std::string root_content);

  const std::string& topic() const { return topic_; }
  NodeId root() const { return NodeId{0}; }
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

  const std::vector<InfoNode>& nodes() const { return nodes_; }
  const InfoNode& node(NodeId id) const;
  bool contains(NodeId id) const;
  bool contains_url(const std::string& url) const;
  std::optional<NodeId> find_url(const std::string& url) const;

  // Attaches a new page under `parent`. The URL is normalized; duplicates
  // are rejected with kInvalidArgument.
  NodeId add_child(NodeId parent, const std::string& url, std::string title,
                   std::string content, std::string relation);

  const std::vector<NodeId>& children(NodeId id) const;
  bool is_leaf(NodeId id) const { return children(id).empty(); }
  int max_depth() const;
  std::vector<NodeId> nodes_at_depth(int depth) const;

  // Root first, parent last; empty for the root.
  std::vector<NodeId> ancestors(NodeId id) const;

  // The focal node followed by up to limit-1 peers sharing its parent and
  // relation label, in insertion order.
  std::vector<NodeId> siblings(NodeId id, std::size_t limit = kUnlimited) const;

  bool needs_width_expansion(NodeId id, int width) const;

  TreePath path_to(NodeId id) const;
  bool is_valid_path(const TreePath& path) const;

  // Uniform choice among nodes at depth min(2, max_depth()).
  TreePath random_start(Rng& rng) const;

  // Lists every broken invariant; empty when the tree is well formed.
  std::vector<std::string> check_invariants() const;

  json to_json() const;
  static InfoTree from_json(const json& doc);

 private:
  std::string topic_;
  std::vector<InfoNode> nodes_;
  std::vector<std::vector<NodeId>> children_;
  std::unordered_map<std::string, NodeId> by_url_;
};

}  // namespace arena
