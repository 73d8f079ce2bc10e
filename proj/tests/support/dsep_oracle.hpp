#pragma once

// d-separation via the moralized ancestral graph: x and y are d-separated by
// Z iff they are disconnected in the moral graph of An({x, y} + Z) after
// deleting Z. Shares nothing with the path-enumeration implementation.

#include <algorithm>
#include <queue>
#include <vector>

#include "mrproxy/dag.hpp"

namespace mrproxy::testing {

inline bool moral_d_separated(const Dag& dag, NodeId x, NodeId y,
                              const std::vector<NodeId>& given) {
  const std::size_t n = dag.size();
  std::vector<char> keep(n, 0);
  std::queue<NodeId> todo;
  auto seed = [&](NodeId v) {
    if (!keep[v.value]) {
      keep[v.value] = 1;
      todo.push(v);
    }
  };
  seed(x);
  seed(y);
  for (NodeId z : given) seed(z);
  while (!todo.empty()) {
    NodeId v = todo.front();
    todo.pop();
    for (NodeId p : dag.parents(v)) seed(p);
  }

  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (std::uint32_t v = 0; v < n; ++v) {
    if (!keep[v]) continue;
    const auto parents = dag.parents(NodeId{v});
    for (std::size_t i = 0; i < parents.size(); ++i) {
      adj[v][parents[i].value] = adj[parents[i].value][v] = 1;
      for (std::size_t j = i + 1; j < parents.size(); ++j) {
        adj[parents[i].value][parents[j].value] = adj[parents[j].value][parents[i].value] = 1;
      }
    }
  }

  std::vector<char> blocked(n, 0);
  for (NodeId z : given) blocked[z.value] = 1;
  std::vector<char> seen(n, 0);
  std::queue<std::uint32_t> bfs;
  bfs.push(x.value);
  seen[x.value] = 1;
  while (!bfs.empty()) {
    const auto v = bfs.front();
    bfs.pop();
    if (v == y.value) return false;
    for (std::uint32_t w = 0; w < n; ++w) {
      if (adj[v][w] && keep[w] && !blocked[w] && !seen[w]) {
        seen[w] = 1;
        bfs.push(w);
      }
    }
  }
  return true;
}

}  // namespace mrproxy::testing
