#pragma once

// Line-based graph text format:
//
//   # comment
//   graph <name>
//   v <id> [c=0|1]
//   e <id> <id>
//
// Vertex order is the order of the `v` lines. Bigraph files carry `c=` on
// every vertex.

#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "boxloop/graph.hpp"

namespace boxloop {

struct GraphFile {
  std::string name;
  Graph graph;
  std::optional<std::vector<std::uint8_t>> colors;  // present iff every vertex has c=

  Bigraph bigraph() const {
    if (!colors) throw InputError("graph '" + name + "' has no 2-coloring");
    return Bigraph(graph, *colors);
  }
};

inline GraphFile read_graph(std::istream& in) {
  GraphFile out;
  std::vector<std::string> names;
  std::vector<int> color;
  std::vector<std::pair<std::string, std::string>> raw_edges;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    auto fail = [&](const std::string& msg) {
      throw InputError("line " + std::to_string(lineno) + ": " + msg);
    };
    if (tag == "graph") {
      if (header) fail("duplicate graph header");
      if (!(ls >> out.name)) fail("graph header needs a name");
      header = true;
    } else if (tag == "v") {
      std::string id, attr;
      if (!(ls >> id)) fail("vertex line needs an id");
      int c = -1;
      if (ls >> attr) {
        if (attr == "c=0") c = 0;
        else if (attr == "c=1") c = 1;
        else fail("bad vertex attribute '" + attr + "'");
      }
      names.push_back(id);
      color.push_back(c);
    } else if (tag == "e") {
      std::string a, b;
      if (!(ls >> a >> b)) fail("edge line needs two ids");
      raw_edges.emplace_back(a, b);
    } else {
      fail("unknown record '" + tag + "'");
    }
    std::string extra;
    if (ls >> extra) fail("trailing token '" + extra + "'");
  }
  if (!header) throw InputError("missing 'graph <name>' header");
  std::unordered_map<std::string, Vertex> index;
  for (Vertex i = 0; i < names.size(); ++i)
    if (!index.emplace(names[i], i).second) throw InputError("duplicate vertex id '" + names[i] + "'");
  std::vector<Edge> edges;
  for (auto& [a, b] : raw_edges) {
    auto ia = index.find(a), ib = index.find(b);
    if (ia == index.end() || ib == index.end())
      throw InputError("edge " + a + " " + b + " uses an undeclared vertex");
    edges.emplace_back(std::min(ia->second, ib->second), std::max(ia->second, ib->second));
  }
  out.graph = Graph(std::move(names), edges);
  bool all = !color.empty(), none = true;
  for (int c : color) {
    if (c < 0) all = false;
    else none = false;
  }
  if (!none && !all) throw InputError("coloring given on some vertices only");
  if (all) {
    out.colors = std::vector<std::uint8_t>(color.begin(), color.end());
    Bigraph check(out.graph, *out.colors);  // rejects improper colorings
  }
  return out;
}

inline GraphFile parse_graph(const std::string& text) {
  std::istringstream in(text);
  return read_graph(in);
}

inline void write_graph(std::ostream& out, const std::string& name, const Graph& g,
                        const std::vector<std::uint8_t>* colors = nullptr) {
  out << "graph " << name << "\n";
  for (Vertex v = 0; v < g.size(); ++v) {
    out << "v " << g.name(v);
    if (colors) out << " c=" << int((*colors)[v]);
    out << "\n";
  }
  for (auto [u, v] : g.edges()) out << "e " << g.name(u) << " " << g.name(v) << "\n";
}

inline void write_bigraph(std::ostream& out, const std::string& name, const Bigraph& x) {
  write_graph(out, name, x.graph(), &x.colors());
}

inline std::string graph_to_string(const std::string& name, const Graph& g) {
  std::ostringstream s;
  write_graph(s, name, g);
  return s.str();
}

inline std::string bigraph_to_string(const std::string& name, const Bigraph& x) {
  std::ostringstream s;
  write_bigraph(s, name, x);
  return s.str();
}

}  // namespace boxloop
