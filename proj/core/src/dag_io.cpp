#include "mrproxy/dag_io.hpp"

#include <fstream>
#include <sstream>

#include "mrproxy/errors.hpp"

namespace mrproxy {

Dag parse_dag(std::string_view text) {
  std::vector<Node> nodes;
  std::vector<Dag::LabelEdge> edges;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string keyword;
    if (!(tokens >> keyword)) continue;

    auto fail = [&](const std::string& why) {
      throw DagError("line " + std::to_string(line_no) + ": " + why);
    };
    std::string a, b, extra;
    if (keyword == "node") {
      if (!(tokens >> a >> b)) fail("expected 'node <name> observed|latent'");
      if (b != "observed" && b != "latent") fail("visibility must be 'observed' or 'latent', got '" + b + "'");
      nodes.push_back({a, b == "observed"});
    } else if (keyword == "edge") {
      if (!(tokens >> a >> b)) fail("expected 'edge <from> <to>'");
      edges.emplace_back(a, b);
    } else {
      fail("unknown declaration '" + keyword + "'");
    }
    if (tokens >> extra) fail("trailing token '" + extra + "'");
  }
  try {
    return Dag(std::move(nodes), edges);
  } catch (const UnknownNode& e) {
    throw DagError("edge references undeclared node '" + e.label() + "'");
  }
}

Dag read_dag_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DagError("cannot open DAG file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_dag(buffer.str());
}

std::string format_dag(const Dag& dag) {
  std::string out;
  for (const Node& n : dag.nodes()) {
    out += "node " + n.label + (n.observed ? " observed\n" : " latent\n");
  }
  for (const Edge& e : dag.edges()) {
    out += "edge " + dag.label(e.from) + " " + dag.label(e.to) + "\n";
  }
  return out;
}

}  // namespace mrproxy
