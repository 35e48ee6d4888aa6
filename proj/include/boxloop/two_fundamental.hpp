#pragma once

// Based loops in a graph modulo spur insertion (move 1) and cross-adjacent
// deformation (move 2), the lift to the Kronecker cover, and the map Phi
// into the pinned loop levels.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "boxloop/errors.hpp"
#include "boxloop/graph.hpp"
#include "boxloop/loop_spaces.hpp"

namespace boxloop {

/// A closed walk v0, ..., vn in a graph with v0 = vn; its length is n.
class BasedLoop {
 public:
  BasedLoop(const Graph& g, std::vector<Vertex> values) : graph_(&g), values_(std::move(values)) {
    if (values_.empty()) throw InputError("a loop needs at least one vertex");
    for (Vertex v : values_)
      if (v >= g.size()) throw InputError("loop vertex out of range");
    if (values_.front() != values_.back()) throw InputError("loop does not return to its base");
    for (std::size_t i = 0; i + 1 < values_.size(); ++i)
      if (!g.adjacent(values_[i], values_[i + 1])) throw InputError("consecutive loop vertices are not adjacent");
  }

  static BasedLoop trivial(const Graph& g, Vertex v) { return BasedLoop(g, {v}); }

  const Graph& graph() const { return *graph_; }
  const std::vector<Vertex>& values() const noexcept { return values_; }
  std::size_t length() const noexcept { return values_.size() - 1; }
  Vertex base() const { return values_.front(); }
  Vertex operator[](std::size_t i) const { return values_.at(i); }
  bool operator==(const BasedLoop& o) const { return graph_ == o.graph_ && values_ == o.values_; }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < values_.size(); ++i) s += (i ? " " : "") + graph_->name(values_[i]);
    return s;
  }

 private:
  const Graph* graph_;
  std::vector<Vertex> values_;
};

/// Whether E(L_n) in move 2 contains the pairs (i, i).
enum class Move2Mode { loopless, reflexive };

inline std::uint8_t parity(const BasedLoop& g) { return static_cast<std::uint8_t>(g.length() % 2); }

/// gamma(0..x), u, gamma(x), gamma(x+1..).
inline BasedLoop move1_insert(const BasedLoop& g, std::size_t x, Vertex u) {
  if (x > g.length()) throw InputError("insertion position past the end of the loop");
  if (!g.graph().adjacent(g[x], u)) throw InputError("inserted vertex is not adjacent to gamma(x)");
  std::vector<Vertex> v(g.values().begin(), g.values().begin() + static_cast<std::ptrdiff_t>(x) + 1);
  v.push_back(u);
  v.push_back(g[x]);
  v.insert(v.end(), g.values().begin() + static_cast<std::ptrdiff_t>(x) + 1, g.values().end());
  return BasedLoop(g.graph(), std::move(v));
}

/// Inverse of move1_insert at x; requires gamma(x) = gamma(x+2).
inline BasedLoop move1_delete(const BasedLoop& g, std::size_t x) {
  if (x + 2 > g.length() || g[x] != g[x + 2]) throw InputError("no spur at this position");
  std::vector<Vertex> v(g.values().begin(), g.values().begin() + static_cast<std::ptrdiff_t>(x) + 1);
  v.insert(v.end(), g.values().begin() + static_cast<std::ptrdiff_t>(x) + 3, g.values().end());
  return BasedLoop(g.graph(), std::move(v));
}

/// (gamma x gamma')(E(L_n)) inside E(G).
inline bool move2_adjacent(const BasedLoop& a, const BasedLoop& b, Move2Mode mode = Move2Mode::loopless) {
  if (a.length() != b.length()) throw InputError("move 2 compares loops of equal length");
  const Graph& g = a.graph();
  for (std::size_t i = 0; i < a.length(); ++i)
    if (!g.adjacent(a[i], b[i + 1]) || !g.adjacent(b[i], a[i + 1])) return false;
  if (mode == Move2Mode::reflexive)
    for (std::size_t i = 0; i <= a.length(); ++i)
      if (!g.adjacent(a[i], b[i])) return false;
  return true;
}

/// All loops related to g by one move 2 (g itself excluded).
inline std::vector<BasedLoop> move2_neighbors(const BasedLoop& g, Move2Mode mode = Move2Mode::loopless) {
  const Graph& gr = g.graph();
  const std::size_t n = g.length();
  std::vector<BasedLoop> out;
  if (n == 0) return out;
  std::vector<Vertex> cur(n + 1);
  cur[0] = g.base();
  std::function<void(std::size_t)> rec = [&](std::size_t p) {
    if (p == n) {
      if (!gr.adjacent(cur[n - 1], g.base())) return;
      cur[n] = g.base();
      if (!gr.adjacent(g[n - 1], cur[n]) || !gr.adjacent(cur[n - 1], g[n])) return;
      if (cur != g.values()) out.emplace_back(gr, cur);
      return;
    }
    for (Vertex c : gr.neighbors(cur[p - 1])) {
      if (!gr.adjacent(c, g[p - 1]) || !gr.adjacent(c, g[p + 1])) continue;
      if (mode == Move2Mode::reflexive && !gr.adjacent(c, g[p])) continue;
      cur[p] = c;
      rec(p + 1);
    }
  };
  if (mode == Move2Mode::reflexive && !gr.adjacent(g.base(), g.base())) return out;
  rec(1);
  return out;
}

enum class LoopVerdict { equivalent, inequivalent, unknown };

inline const char* to_string(LoopVerdict v) {
  switch (v) {
    case LoopVerdict::equivalent: return "equivalent";
    case LoopVerdict::inequivalent: return "inequivalent";
    default: return "unknown";
  }
}

struct LoopClassQuery {
  LoopVerdict verdict = LoopVerdict::unknown;
  std::vector<std::string> witness;  // numbered move lines
  std::size_t explored = 0;
  std::string note;
};

/// Breadth-first search through loops of length <= max_len. A positive
/// answer carries a replayable witness; parity is the only negative
/// certificate.
inline LoopClassQuery equivalent_loops(const BasedLoop& a, const BasedLoop& b, std::size_t max_len,
                                       Move2Mode mode = Move2Mode::loopless, std::size_t max_states = 2'000'000) {
  if (&a.graph() != &b.graph() || a.base() != b.base()) throw InputError("loops must share graph and base");
  LoopClassQuery q;
  if (parity(a) != parity(b)) {
    q.verdict = LoopVerdict::inequivalent;
    q.note = "parities differ";
    return q;
  }
  const Graph& g = a.graph();
  struct Node {
    std::vector<Vertex> values;
    std::int64_t parent;
    std::string move;
  };
  std::vector<Node> nodes;
  std::map<std::vector<Vertex>, std::size_t> seen;
  std::deque<std::size_t> queue;
  nodes.push_back({a.values(), -1, ""});
  seen.emplace(a.values(), 0);
  queue.push_back(0);
  std::optional<std::size_t> hit;
  if (a.values() == b.values()) hit = 0;
  auto visit = [&](std::vector<Vertex> v, std::size_t parent, std::string move) {
    if (seen.count(v)) return;
    seen.emplace(v, nodes.size());
    if (v == b.values()) hit = nodes.size();
    nodes.push_back({std::move(v), static_cast<std::int64_t>(parent), std::move(move)});
    queue.push_back(nodes.size() - 1);
  };
  while (!queue.empty() && !hit) {
    if (nodes.size() > max_states) {
      q.note = "state budget exhausted, frontier " + std::to_string(queue.size());
      q.explored = nodes.size();
      return q;
    }
    std::size_t id = queue.front();
    queue.pop_front();
    BasedLoop cur(g, nodes[id].values);
    const std::size_t len = cur.length();
    for (std::size_t x = 0; x + 2 <= len && !hit; ++x)
      if (cur[x] == cur[x + 2]) visit(move1_delete(cur, x).values(), id, "m1- " + std::to_string(x));
    for (const auto& nb : move2_neighbors(cur, mode)) {
      if (hit) break;
      std::string line = "m2";
      for (Vertex v : nb.values()) line += " " + g.name(v);
      visit(nb.values(), id, std::move(line));
    }
    if (len + 2 <= max_len)
      for (std::size_t x = 0; x <= len && !hit; ++x)
        for (Vertex u : g.neighbors(cur[x])) {
          visit(move1_insert(cur, x, u).values(), id, "m1+ " + std::to_string(x) + " " + g.name(u));
          if (hit) break;
        }
  }
  q.explored = nodes.size();
  if (!hit) {
    q.note = "no path within length " + std::to_string(max_len);
    return q;
  }
  std::vector<std::string> moves;
  for (std::int64_t id = static_cast<std::int64_t>(*hit); nodes[id].parent >= 0; id = nodes[id].parent) moves.push_back(nodes[id].move);
  std::reverse(moves.begin(), moves.end());
  for (std::size_t i = 0; i < moves.size(); ++i) q.witness.push_back(std::to_string(i + 1) + ": " + moves[i]);
  q.verdict = LoopVerdict::equivalent;
  return q;
}

/// Replays witness lines from `start`, validating every move; returns the
/// final loop.
inline BasedLoop replay_witness(const BasedLoop& start, const std::vector<std::string>& witness,
                                Move2Mode mode = Move2Mode::loopless) {
  const Graph& g = start.graph();
  BasedLoop cur = start;
  for (const auto& line : witness) {
    std::istringstream in(line);
    std::string num, op;
    in >> num >> op;
    if (op == "m1+") {
      std::size_t x;
      std::string u;
      in >> x >> u;
      auto uv = g.find(u);
      if (!uv) throw InputError("witness names an unknown vertex");
      cur = move1_insert(cur, x, *uv);
    } else if (op == "m1-") {
      std::size_t x;
      in >> x;
      cur = move1_delete(cur, x);
    } else if (op == "m2") {
      std::vector<Vertex> v;
      std::string name;
      while (in >> name) {
        auto id = g.find(name);
        if (!id) throw InputError("witness names an unknown vertex");
        v.push_back(*id);
      }
      BasedLoop next(g, std::move(v));
      if (next.base() != cur.base() || !move2_adjacent(cur, next, mode)) throw InputError("invalid move 2 in witness");
      cur = next;
    } else {
      throw InputError("unknown witness move: " + op);
    }
  }
  return cur;
}

/// Vertex (c, v) of K2 x G has index c * |G| + v.
inline BasedLoop lift_to_cover(const BasedLoop& g, const KroneckerCover& cover) {
  if (parity(g) != 0) throw InputError("only even loops lift to closed loops");
  const std::size_t n = g.graph().size();
  if (cover.bigraph.size() != 2 * n) throw InputError("cover does not match the loop's graph");
  std::vector<Vertex> v;
  for (std::size_t i = 0; i < g.values().size(); ++i) v.push_back(static_cast<Vertex>((i % 2) * n + g[i]));
  return BasedLoop(cover.bigraph.graph(), std::move(v));
}

inline BasedLoop project_from_cover(const BasedLoop& g, const Graph& base_graph) {
  std::vector<Vertex> v;
  for (Vertex x : g.values()) v.push_back(static_cast<Vertex>(x % base_graph.size()));
  return BasedLoop(base_graph, std::move(v));
}

/// Phi: the loop placed on [0, 2m] of L_{-2n,2n+1}, padded by the basepoint
/// x(k mod 2) elsewhere. Returns the walk values (position p holds -2n+p).
inline std::vector<Vertex> phi_values(const BasedLoop& g, BasePair x, std::size_t n) {
  if (parity(g) != 0) throw InputError("Phi is defined on even loops");
  if (g.base() != x.x0) throw InputError("loop is not based at x(0)");
  const std::size_t m2 = g.length();
  if (m2 > 2 * n) throw InputError("loop does not fit in level " + std::to_string(n));
  std::vector<Vertex> out(4 * n + 2);
  for (std::size_t p = 0; p < out.size(); ++p) {
    long long k = static_cast<long long>(p) - 2 * static_cast<long long>(n);
    if (k >= 0 && k <= static_cast<long long>(m2)) out[p] = g[static_cast<std::size_t>(k)];
    else out[p] = parity_of(k) == 0 ? x.x0 : x.x1;
  }
  return out;
}

inline std::uint32_t phi(const BasedLoop& g, BasePair x, const WalkLevel& omega_level_n) {
  auto n = (omega_level_n.length() - 2) / 4;
  auto idx = omega_level_n.find(phi_values(g, x, n));
  if (!idx) throw InputError("Phi image is not a vertex of the level");
  return *idx;
}

/// A walk in level n from Phi(insert(g, x, u)) to Phi(g) through Phi of the
/// loops d_j = insert(g, j, g(j+1)), j = x..len-1, and of
/// insert(g, len, x(1)), which has the same image as g. Each step changes
/// one position.
inline std::vector<std::vector<Vertex>> spur_walk(const BasedLoop& g, std::size_t x, Vertex u, BasePair base,
                                                  std::size_t n) {
  std::vector<std::vector<Vertex>> walk;
  walk.push_back(phi_values(move1_insert(g, x, u), base, n));
  for (std::size_t j = x; j < g.length(); ++j) walk.push_back(phi_values(move1_insert(g, j, g[j + 1]), base, n));
  walk.push_back(phi_values(move1_insert(g, g.length(), base.x1), base, n));
  auto last = phi_values(g, base, n);
  if (walk.back() != last) throw InputError("spur walk does not end at Phi(gamma)");
  walk.erase(std::unique(walk.begin(), walk.end()), walk.end());
  return walk;
}

/// Closed walks of even length <= max_len at v, ordered by length then values.
inline std::vector<BasedLoop> even_loops(const Graph& g, Vertex v, std::size_t max_len) {
  std::vector<BasedLoop> out;
  std::vector<Vertex> cur{v};
  std::function<void(std::size_t)> rec = [&](std::size_t target) {
    if (cur.size() == target + 1) {
      if (cur.back() == v) out.emplace_back(g, cur);
      return;
    }
    for (Vertex w : g.neighbors(cur.back())) {
      cur.push_back(w);
      rec(target);
      cur.pop_back();
    }
  };
  for (std::size_t len = 0; len <= max_len; len += 2) rec(len);
  return out;
}

struct ClassCensus {
  std::size_t level = 0;
  BasePair base;
  std::size_t loops = 0;
  std::size_t level_components = 0;
  struct Entry {
    std::uint32_t component;
    std::string representative;
    std::size_t count;
  };
  std::vector<Entry> hit;  // ordered by component label
  std::vector<std::uint32_t> labels;  // component of each loop, in even_loops order

  std::string to_string() const {
    std::ostringstream out;
    out << "level " << level << ": loops=" << loops << " components_hit=" << hit.size()
        << " level_components=" << level_components << "\n";
    for (const auto& e : hit) out << "comp " << e.component << " count=" << e.count << " rep=" << e.representative << "\n";
    return out.str();
  }
};

/// Basepoint of K2 x G over v: x(0) = (0, v), x(1) = (1, w) with w the
/// smallest neighbour of v unless given.
inline BasePair cover_basepoint(const Graph& g, Vertex v, std::optional<Vertex> w = std::nullopt) {
  if (v >= g.size() || g.neighbors(v).empty()) throw InputError("basepoint must be a non-isolated vertex");
  Vertex nb = w ? *w : g.neighbors(v).front();
  if (!g.adjacent(v, nb)) throw InputError("basepoint neighbour is not adjacent");
  return {v, static_cast<Vertex>(g.size() + nb)};
}

/// Even loops at v of length <= max_len, lifted to K2 x G and sent by Phi
/// into the pinned level max(level, max_len / 2), grouped by component.
inline ClassCensus pi2_even_classes(const Graph& g, Vertex v, std::size_t max_len, std::size_t level,
                                    std::optional<Vertex> w = std::nullopt, std::size_t cap = default_level_cap) {
  BasePair base = cover_basepoint(g, v, w);
  auto cover = kronecker_cover(g);
  ClassCensus c;
  c.level = std::max(level, max_len / 2);
  c.base = base;
  auto lvl = omega_level(cover.bigraph, base, c.level, cap);
  auto label = lvl.components(&c.level_components);
  std::map<std::uint32_t, ClassCensus::Entry> hit;
  for (const auto& loop : even_loops(g, v, max_len)) {
    ++c.loops;
    auto comp = label[phi(lift_to_cover(loop, cover), base, lvl)];
    c.labels.push_back(comp);
    auto [it, fresh] = hit.emplace(comp, ClassCensus::Entry{comp, loop.to_string(), 0});
    ++it->second.count;
  }
  for (auto& [k, e] : hit) c.hit.push_back(e);
  return c;
}

/// Classes of the even loops at v of length <= max_len under the moves
/// that stay within that length (labels follow even_loops order).
inline std::vector<std::uint32_t> loop_move_classes(const Graph& g, Vertex v, std::size_t max_len,
                                                    Move2Mode mode = Move2Mode::loopless,
                                                    std::size_t* count = nullptr) {
  auto loops = even_loops(g, v, max_len);
  std::map<std::vector<Vertex>, std::uint32_t> index;
  for (std::uint32_t i = 0; i < loops.size(); ++i) index.emplace(loops[i].values(), i);
  std::vector<std::uint32_t> parent(loops.size());
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  for (std::uint32_t i = 0; i < loops.size(); ++i) {
    const auto& l = loops[i];
    for (std::size_t x = 0; x + 2 <= l.length(); ++x)
      if (l[x] == l[x + 2]) unite(i, index.at(move1_delete(l, x).values()));
    for (const auto& nb : move2_neighbors(l, mode)) unite(i, index.at(nb.values()));
  }
  std::vector<std::uint32_t> label(loops.size());
  std::map<std::uint32_t, std::uint32_t> dense;
  for (std::uint32_t i = 0; i < loops.size(); ++i) {
    auto [it, fresh] = dense.emplace(find(i), static_cast<std::uint32_t>(dense.size()));
    label[i] = it->second;
  }
  if (count) *count = dense.size();
  return label;
}

/// `loop <graph> <v0> <v1> ... <vn>`
struct LoopLiteral {
  std::string graph;
  std::vector<std::string> vertices;
};

inline LoopLiteral parse_loop_literal(const std::string& line) {
  std::istringstream in(line);
  std::string tag;
  LoopLiteral lit;
  if (!(in >> tag) || tag != "loop" || !(in >> lit.graph)) throw InputError("expected `loop <graph> <v0> ... <vn>`");
  std::string v;
  while (in >> v) lit.vertices.push_back(v);
  if (lit.vertices.empty()) throw InputError("loop literal has no vertices");
  return lit;
}

inline BasedLoop resolve_loop(const LoopLiteral& lit, const Graph& g) {
  std::vector<Vertex> v;
  for (const auto& name : lit.vertices) {
    auto id = g.find(name);
    if (!id) throw InputError("unknown vertex in loop literal: " + name);
    v.push_back(*id);
  }
  return BasedLoop(g, std::move(v));
}

inline std::string format_loop_literal(const std::string& graph_name, const BasedLoop& g) {
  return "loop " + graph_name + " " + g.to_string();
}

}  // namespace boxloop
