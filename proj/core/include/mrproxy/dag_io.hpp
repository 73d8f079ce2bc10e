#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mrproxy/dag.hpp"

namespace mrproxy {

// Line-oriented DAG text:
//   node <name> observed|latent
//   edge <from> <to>
// '#' starts a comment. Declaration order does not matter; an edge may name
// a node declared further down. Throws DagError with the line number.
Dag parse_dag(std::string_view text);
Dag read_dag_file(const std::filesystem::path& path);

// Nodes in declaration order, then edges in declaration order.
std::string format_dag(const Dag& dag);

}  // namespace mrproxy
