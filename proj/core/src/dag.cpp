#include "mrproxy/dag.hpp"

#include <algorithm>
#include <functional>

#include "mrproxy/errors.hpp"

namespace mrproxy {

bool Path::is_directed() const {
  return std::all_of(forward.begin(), forward.end(), [](bool f) { return f; });
}

bool Path::contains(NodeId id) const {
  return std::find(nodes.begin(), nodes.end(), id) != nodes.end();
}

Dag::Dag(std::vector<Node> nodes, const std::vector<LabelEdge>& edges)
    : nodes_(std::move(nodes)) {
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].label.empty()) throw DagError("empty node label");
    if (!index_.emplace(nodes_[i].label, NodeId{i}).second) {
      throw DagError("duplicate node label '" + nodes_[i].label + "'");
    }
  }
  const std::size_t n = nodes_.size();
  parents_.resize(n);
  children_.resize(n);
  for (const auto& [from_label, to_label] : edges) {
    const NodeId from = id(from_label);
    const NodeId to = id(to_label);
    if (from == to) throw DagError("self-loop on '" + from_label + "'");
    if (has_edge(from, to)) {
      throw DagError("duplicate edge " + from_label + " -> " + to_label);
    }
    edges_.push_back({from, to});
    children_[from.value].push_back(to);
    parents_[to.value].push_back(from);
  }

  // Kahn's algorithm doubles as the cycle check.
  std::vector<std::size_t> in_degree(n);
  for (const auto& e : edges_) ++in_degree[e.to.value];
  std::vector<NodeId> order;
  order.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    if (in_degree[i] == 0) order.push_back(NodeId{i});
  }
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (NodeId c : children_[order[head].value]) {
      if (--in_degree[c.value] == 0) order.push_back(c);
    }
  }
  if (order.size() != n) throw DagError("graph contains a directed cycle");

  descendant_.assign(n, std::vector<char>(n, 0));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    auto& row = descendant_[it->value];
    row[it->value] = 1;
    for (NodeId c : children_[it->value]) {
      const auto& child_row = descendant_[c.value];
      for (std::size_t j = 0; j < n; ++j) row[j] |= child_row[j];
    }
  }
}

NodeId Dag::id(std::string_view label) const {
  if (auto found = find(label)) return *found;
  throw UnknownNode(std::string(label));
}

std::optional<NodeId> Dag::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool Dag::has_edge(NodeId from, NodeId to) const {
  const auto& kids = children_.at(from.value);
  return std::find(kids.begin(), kids.end(), to) != kids.end();
}

bool Dag::has_edge(std::string_view from, std::string_view to) const {
  auto f = find(from);
  auto t = find(to);
  return f && t && has_edge(*f, *t);
}

std::string Dag::format(const Path& path) const {
  std::string out;
  for (std::size_t i = 0; i < path.nodes.size(); ++i) {
    if (i > 0) out += path.forward[i - 1] ? " -> " : " <- ";
    out += label(path.nodes[i]);
  }
  return out;
}

namespace {

void require_node(const Dag& dag, NodeId id) {
  if (id.value >= dag.size()) {
    throw UnknownNode("#" + std::to_string(id.value));
  }
}

bool label_less(const Dag& dag, const Path& a, const Path& b) {
  return std::lexicographical_compare(
      a.nodes.begin(), a.nodes.end(), b.nodes.begin(), b.nodes.end(),
      [&](NodeId l, NodeId r) { return dag.label(l) < dag.label(r); });
}

}  // namespace

std::vector<Path> enumerate_paths(const Dag& dag, NodeId x, NodeId y) {
  require_node(dag, x);
  require_node(dag, y);
  if (x == y) throw Error("enumerate_paths: endpoints must differ");

  std::vector<Path> found;
  std::vector<char> on_path(dag.size(), 0);
  Path current;
  current.nodes.push_back(x);
  on_path[x.value] = 1;

  std::function<void(NodeId)> extend = [&](NodeId at) {
    if (at == y) {
      found.push_back(current);
      return;
    }
    auto step = [&](NodeId next, bool forward) {
      if (on_path[next.value]) return;
      on_path[next.value] = 1;
      current.nodes.push_back(next);
      current.forward.push_back(forward);
      extend(next);
      current.nodes.pop_back();
      current.forward.pop_back();
      on_path[next.value] = 0;
    };
    for (NodeId c : dag.children(at)) step(c, true);
    for (NodeId p : dag.parents(at)) step(p, false);
  };
  extend(x);

  std::sort(found.begin(), found.end(),
            [&](const Path& a, const Path& b) { return label_less(dag, a, b); });
  return found;
}

std::vector<Path> enumerate_paths(const Dag& dag, std::string_view x,
                                  std::string_view y) {
  return enumerate_paths(dag, dag.id(x), dag.id(y));
}

bool is_open(const Dag& dag, const Path& path, std::span<const NodeId> given) {
  auto in_given = [&](NodeId id) {
    return std::find(given.begin(), given.end(), id) != given.end();
  };
  for (std::size_t i = 1; i + 1 < path.nodes.size(); ++i) {
    const NodeId v = path.nodes[i];
    if (path.is_collider(i)) {
      const bool activated = std::any_of(given.begin(), given.end(), [&](NodeId z) {
        return dag.is_descendant(z, v);
      });
      if (!activated) return false;
    } else if (in_given(v)) {
      return false;
    }
  }
  return true;
}

bool d_separated(const Dag& dag, NodeId x, NodeId y, std::span<const NodeId> given) {
  for (NodeId z : given) {
    require_node(dag, z);
    if (z == x || z == y) {
      throw Error("d_separated: endpoint '" + dag.label(z) +
                  "' is in the conditioning set");
    }
  }
  for (const Path& p : enumerate_paths(dag, x, y)) {
    if (is_open(dag, p, given)) return false;
  }
  return true;
}

bool d_separated(const Dag& dag, std::string_view x, std::string_view y,
                 const std::vector<std::string>& given) {
  std::vector<NodeId> ids;
  ids.reserve(given.size());
  for (const auto& g : given) ids.push_back(dag.id(g));
  return d_separated(dag, dag.id(x), dag.id(y), ids);
}

IvReport check_instrument(const Dag& dag, NodeId instrument, NodeId exposure,
                          NodeId outcome) {
  require_node(dag, instrument);
  require_node(dag, exposure);
  require_node(dag, outcome);
  if (instrument == exposure || instrument == outcome || exposure == outcome) {
    throw Error("check_instrument: instrument, exposure and outcome must be distinct");
  }

  IvReport report;
  report.relevance = !d_separated(dag, instrument, exposure, {});

  for (Path& p : enumerate_paths(dag, instrument, outcome)) {
    if (p.is_directed()) {
      report.causal = true;
      if (!p.contains(exposure)) report.exclusion_witnesses.push_back(std::move(p));
    } else if (is_open(dag, p, {})) {
      // Unconditionally open paths have no colliders, so any occurrence of
      // the exposure is a non-collider.
      if (!p.contains(exposure)) report.confounding_witnesses.push_back(std::move(p));
    }
  }
  report.exclusion = report.exclusion_witnesses.empty();
  report.unconfounded = report.confounding_witnesses.empty();
  return report;
}

IvReport check_instrument(const Dag& dag, std::string_view instrument,
                          std::string_view exposure, std::string_view outcome) {
  return check_instrument(dag, dag.id(instrument), dag.id(exposure), dag.id(outcome));
}

}  // namespace mrproxy
