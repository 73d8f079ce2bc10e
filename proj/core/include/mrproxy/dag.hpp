#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mrproxy {

struct NodeId {
  std::uint32_t value = 0;
  auto operator<=>(const NodeId&) const = default;
};

struct Node {
  std::string label;
  bool observed = false;
};

struct Edge {
  NodeId from;
  NodeId to;
  auto operator<=>(const Edge&) const = default;
};

// Walk along edges of a Dag ignoring direction. forward[i] is true when the
// step between nodes[i] and nodes[i+1] follows an edge nodes[i] -> nodes[i+1].
struct Path {
  std::vector<NodeId> nodes;
  std::vector<bool> forward;

  std::size_t length() const { return forward.size(); }
  // Both edges adjacent to internal node i point into it.
  bool is_collider(std::size_t i) const {
    return i > 0 && i + 1 < nodes.size() && forward[i - 1] && !forward[i];
  }
  // Every step follows edge direction from nodes.front() to nodes.back().
  bool is_directed() const;
  bool contains(NodeId id) const;
  bool operator==(const Path&) const = default;
};

// Immutable causal DAG over labelled nodes. Construction rejects cycles,
// self-loops, duplicate edges and duplicate labels. The descendant closure
// is computed once at construction, so const queries are thread-safe.
class Dag {
 public:
  using LabelEdge = std::pair<std::string, std::string>;

  Dag(std::vector<Node> nodes, const std::vector<LabelEdge>& edges);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Node& node(NodeId id) const { return nodes_.at(id.value); }
  const std::string& label(NodeId id) const { return node(id).label; }

  // Throws UnknownNode.
  NodeId id(std::string_view label) const;
  std::optional<NodeId> find(std::string_view label) const;

  std::span<const NodeId> parents(NodeId id) const { return parents_.at(id.value); }
  std::span<const NodeId> children(NodeId id) const { return children_.at(id.value); }
  bool has_edge(NodeId from, NodeId to) const;
  bool has_edge(std::string_view from, std::string_view to) const;

  // Reflexive: every node is its own descendant.
  bool is_descendant(NodeId node, NodeId ancestor) const {
    return descendant_[ancestor.value][node.value] != 0;
  }

  // "G <- G_P -> A_P -> Y_P"
  std::string format(const Path& path) const;

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<std::vector<NodeId>> parents_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<std::vector<char>> descendant_;
};

// Every simple path between x and y, ignoring edge direction, sorted
// lexicographically by the label sequence.
std::vector<Path> enumerate_paths(const Dag& dag, NodeId x, NodeId y);
std::vector<Path> enumerate_paths(const Dag& dag, std::string_view x, std::string_view y);

// A path is open given Z when every non-collider is outside Z and every
// collider has itself or a descendant in Z.
bool is_open(const Dag& dag, const Path& path, std::span<const NodeId> given);

bool d_separated(const Dag& dag, NodeId x, NodeId y, std::span<const NodeId> given);
bool d_separated(const Dag& dag, std::string_view x, std::string_view y,
                 const std::vector<std::string>& given = {});

struct IvReport {
  bool relevance = false;
  bool exclusion = false;
  bool unconfounded = false;
  // A directed instrument -> outcome path exists.
  bool causal = false;
  // Directed instrument -> outcome paths that avoid the exposure.
  std::vector<Path> exclusion_witnesses;
  // Open (unconditional) non-directed instrument -- outcome paths that do not
  // carry the exposure as a non-collider.
  std::vector<Path> confounding_witnesses;

  bool valid() const { return relevance && exclusion && unconfounded; }
};

IvReport check_instrument(const Dag& dag, NodeId instrument, NodeId exposure,
                          NodeId outcome);
IvReport check_instrument(const Dag& dag, std::string_view instrument,
                          std::string_view exposure, std::string_view outcome);

}  // namespace mrproxy
