#pragma once

// Finite graphs (loops allowed), bigraphs, homomorphisms and the basic
// graph-level constructions: products, Kronecker covers, exponential graphs,
// folds and an exact isomorphism search.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <set>
#include <string>
#include <tuple>
#include <type_traits>
#include <unordered_map>
#include <utility>
#include <vector>

#include "boxloop/errors.hpp"

namespace boxloop {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

/// A finite graph with a symmetric edge relation. Vertices are the indices
/// 0..size()-1; their order is the total order of the graph and `name(v)`
/// is the opaque token used for I/O.
class Graph {
 public:
  Graph() = default;

  Graph(std::vector<std::string> names, const std::vector<Edge>& edges) : names_(std::move(names)) {
    adj_.resize(names_.size());
    for (auto [u, v] : edges) {
      if (u >= names_.size() || v >= names_.size())
        throw InputError("edge endpoint is not a declared vertex");
      adj_[u].push_back(v);
      if (u != v) adj_[v].push_back(u);
    }
    for (auto& list : adj_) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    for (Vertex v = 0; v < names_.size(); ++v) {
      if (!index_.emplace(names_[v], v).second)
        throw InputError("duplicate vertex id '" + names_[v] + "'");
    }
  }

  /// Vertices named "0".."n-1".
  static Graph numbered(std::size_t n, const std::vector<Edge>& edges) {
    std::vector<std::string> names;
    names.reserve(n);
    for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
    return Graph(std::move(names), edges);
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(Vertex v) const { return names_.at(v); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  std::optional<Vertex> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::span<const Vertex> neighbors(Vertex v) const { return adj_.at(v); }

  bool adjacent(Vertex u, Vertex v) const {
    const auto& a = adj_[u];
    const auto& b = adj_[v];
    if (a.size() <= b.size()) return std::binary_search(a.begin(), a.end(), v);
    return std::binary_search(b.begin(), b.end(), u);
  }

  bool has_loop(Vertex v) const { return adjacent(v, v); }

  bool reflexive() const {
    for (Vertex v = 0; v < size(); ++v)
      if (!has_loop(v)) return false;
    return true;
  }

  /// Edges {u,v} with u <= v, sorted.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (Vertex u = 0; u < size(); ++u)
      for (Vertex v : adj_[u])
        if (u <= v) out.emplace_back(u, v);
    return out;
  }

  std::size_t edge_count() const {
    std::size_t n = 0;
    for (Vertex u = 0; u < size(); ++u)
      for (Vertex v : adj_[u])
        if (u <= v) ++n;
    return n;
  }

  bool operator==(const Graph& other) const { return names_ == other.names_ && adj_ == other.adj_; }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<Vertex>> adj_;
  std::unordered_map<std::string, Vertex> index_;
};

/// A graph together with a proper 2-coloring.
class Bigraph {
 public:
  Bigraph() = default;

  Bigraph(Graph graph, std::vector<std::uint8_t> color) : graph_(std::move(graph)), color_(std::move(color)) {
    if (color_.size() != graph_.size()) throw InputError("coloring does not cover every vertex");
    for (auto c : color_)
      if (c > 1) throw InputError("colors must be 0 or 1");
    for (auto [u, v] : graph_.edges())
      if (color_[u] == color_[v])
        throw InputError("improper coloring: edge " + graph_.name(u) + " -- " + graph_.name(v));
  }

  const Graph& graph() const noexcept { return graph_; }
  std::size_t size() const noexcept { return graph_.size(); }
  std::uint8_t color(Vertex v) const { return color_.at(v); }
  const std::vector<std::uint8_t>& colors() const noexcept { return color_; }

  std::vector<Vertex> part(std::uint8_t c) const {
    std::vector<Vertex> out;
    for (Vertex v = 0; v < size(); ++v)
      if (color_[v] == c) out.push_back(v);
    return out;
  }

  bool operator==(const Bigraph& other) const { return graph_ == other.graph_ && color_ == other.color_; }

 private:
  Graph graph_;
  std::vector<std::uint8_t> color_;
};

/// Vertex map between two graphs; validated by the free functions below.
struct GraphHom {
  std::vector<Vertex> map;

  Vertex operator()(Vertex v) const { return map.at(v); }
  bool operator==(const GraphHom&) const = default;
};

inline bool is_hom(const Graph& source, const Graph& target, std::span<const Vertex> map) {
  if (map.size() != source.size()) return false;
  for (Vertex v : map)
    if (v >= target.size()) return false;
  for (auto [u, v] : source.edges())
    if (!target.adjacent(map[u], map[v])) return false;
  return true;
}

inline bool is_bigraph_hom(const Bigraph& source, const Bigraph& target, std::span<const Vertex> map) {
  if (!is_hom(source.graph(), target.graph(), map)) return false;
  for (Vertex v = 0; v < source.size(); ++v)
    if (target.color(map[v]) != source.color(v)) return false;
  return true;
}

/// Color-flipping involution of a bigraph.
struct OddInvolution {
  std::vector<Vertex> map;

  Vertex operator()(Vertex v) const { return map.at(v); }

  void validate(const Bigraph& x) const {
    if (map.size() != x.size()) throw InputError("involution size mismatch");
    if (!is_hom(x.graph(), x.graph(), map)) throw InputError("involution is not a graph homomorphism");
    for (Vertex v = 0; v < x.size(); ++v) {
      if (map[v] >= x.size() || map[map[v]] != v) throw InputError("map does not square to the identity");
      if (x.color(map[v]) == x.color(v)) throw InputError("involution does not flip colors");
    }
  }
};

// ---------------------------------------------------------------------------
// Standard graphs

inline Graph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return Graph::numbered(n, edges);
}

inline Graph cycle_graph(std::size_t n) {
  if (n < 3) throw InputError("cycle needs at least 3 vertices");
  std::vector<Edge> edges;
  for (Vertex i = 0; i < n; ++i) edges.emplace_back(i, static_cast<Vertex>((i + 1) % n));
  return Graph::numbered(n, edges);
}

/// Reflexive path I_n on 0..n.
inline Graph interval_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex i = 0; i <= n; ++i) {
    edges.emplace_back(i, i);
    if (i < n) edges.emplace_back(i, i + 1);
  }
  return Graph::numbered(n + 1, edges);
}

inline Graph looped_vertex() { return Graph::numbered(1, {{0, 0}}); }

inline Graph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph::numbered(n, edges);
}

enum class StandardKind { complete, cycle, interval, looped_vertex };

inline Graph standard_graph(StandardKind kind, std::size_t n) {
  switch (kind) {
    case StandardKind::complete: return complete_graph(n);
    case StandardKind::cycle: return cycle_graph(n);
    case StandardKind::interval: return interval_graph(n);
    case StandardKind::looped_vertex: return looped_vertex();
  }
  throw InputError("unknown graph kind");
}

inline std::uint8_t parity_of(long long x) { return static_cast<std::uint8_t>(((x % 2) + 2) % 2); }

/// The path a..b colored by parity; loopless so that the coloring is proper.
inline Bigraph interval_bigraph(long long a, long long b) {
  if (a > b) throw InputError("interval bigraph needs a <= b");
  std::vector<std::string> names;
  std::vector<std::uint8_t> color;
  std::vector<Edge> edges;
  for (long long x = a; x <= b; ++x) {
    names.push_back(std::to_string(x));
    color.push_back(parity_of(x));
    if (x < b) edges.emplace_back(static_cast<Vertex>(x - a), static_cast<Vertex>(x - a + 1));
  }
  return Bigraph(Graph(std::move(names), edges), std::move(color));
}

inline Bigraph k2_bigraph() { return interval_bigraph(0, 1); }

// ---------------------------------------------------------------------------
// Products and covers

/// Categorical product; vertex (a,b) has index a*|H| + b.
inline Graph product(const Graph& g, const Graph& h) {
  const auto nh = static_cast<Vertex>(h.size());
  std::vector<std::string> names;
  names.reserve(g.size() * h.size());
  for (Vertex a = 0; a < g.size(); ++a)
    for (Vertex b = 0; b < h.size(); ++b) names.push_back("(" + g.name(a) + "," + h.name(b) + ")");
  std::vector<Edge> edges;
  for (Vertex a = 0; a < g.size(); ++a)
    for (Vertex a2 : g.neighbors(a))
      for (Vertex b = 0; b < h.size(); ++b)
        for (Vertex b2 : h.neighbors(b)) {
          Vertex u = a * nh + b, v = a2 * nh + b2;
          if (u <= v) edges.emplace_back(u, v);
        }
  return Graph(std::move(names), edges);
}

/// X x G colored through the first projection.
inline Bigraph product_bigraph(const Bigraph& x, const Graph& g) {
  Graph p = product(x.graph(), g);
  std::vector<std::uint8_t> color(p.size());
  for (Vertex v = 0; v < p.size(); ++v) color[v] = x.color(static_cast<Vertex>(v / g.size()));
  return Bigraph(std::move(p), std::move(color));
}

struct KroneckerCover {
  Bigraph bigraph;
  OddInvolution deck;
};

inline KroneckerCover kronecker_cover(const Graph& g) {
  Bigraph x = product_bigraph(k2_bigraph(), g);
  const auto n = static_cast<Vertex>(g.size());
  OddInvolution deck;
  deck.map.resize(2 * n);
  for (Vertex v = 0; v < n; ++v) {
    deck.map[v] = n + v;
    deck.map[n + v] = v;
  }
  return {std::move(x), std::move(deck)};
}

struct Quotient {
  Graph graph;
  std::vector<Vertex> orbit_of;  // vertex of X -> orbit index
};

/// Orbit graph X/alpha; orbits are ordered by their smallest member and
/// named "{a,b}" with the color-0 member first.
inline Quotient quotient_by_involution(const Bigraph& x, const OddInvolution& alpha) {
  alpha.validate(x);
  Quotient q;
  q.orbit_of.assign(x.size(), 0);
  std::vector<std::string> names;
  std::vector<Vertex> rep;
  for (Vertex v = 0; v < x.size(); ++v) {
    Vertex w = alpha(v);
    if (w == v) throw InputError("odd involution has a fixed point");
    if (v < w) {
      q.orbit_of[v] = q.orbit_of[w] = static_cast<Vertex>(rep.size());
      rep.push_back(v);
      Vertex c0 = x.color(v) == 0 ? v : w;
      names.push_back("{" + x.graph().name(c0) + "," + x.graph().name(alpha(c0)) + "}");
    }
  }
  std::vector<Edge> edges;
  for (auto [u, v] : x.graph().edges()) edges.emplace_back(q.orbit_of[u], q.orbit_of[v]);
  for (auto& e : edges)
    if (e.first > e.second) std::swap(e.first, e.second);
  q.graph = Graph(std::move(names), edges);
  return q;
}

// ---------------------------------------------------------------------------
// Induced subgraphs, components

inline Graph induced_subgraph(const Graph& g, std::span<const Vertex> keep) {
  std::vector<Vertex> pos(g.size(), static_cast<Vertex>(-1));
  std::vector<std::string> names;
  for (Vertex i = 0; i < keep.size(); ++i) {
    pos[keep[i]] = i;
    names.push_back(g.name(keep[i]));
  }
  std::vector<Edge> edges;
  for (Vertex i = 0; i < keep.size(); ++i)
    for (Vertex w : g.neighbors(keep[i]))
      if (pos[w] != static_cast<Vertex>(-1) && i <= pos[w]) edges.emplace_back(i, pos[w]);
  return Graph(std::move(names), edges);
}

inline Bigraph induced_subgraph(const Bigraph& x, std::span<const Vertex> keep) {
  std::vector<std::uint8_t> color;
  for (Vertex v : keep) color.push_back(x.color(v));
  return Bigraph(induced_subgraph(x.graph(), keep), std::move(color));
}

/// Maximal reflexive subgraph: the looped vertices.
inline std::vector<Vertex> looped_vertices(const Graph& g) {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < g.size(); ++v)
    if (g.has_loop(v)) out.push_back(v);
  return out;
}

/// Component label per vertex, numbered in order of smallest member.
inline std::vector<Vertex> component_labels(const Graph& g, std::size_t* count = nullptr) {
  constexpr Vertex unset = static_cast<Vertex>(-1);
  std::vector<Vertex> label(g.size(), unset);
  Vertex next = 0;
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < g.size(); ++s) {
    if (label[s] != unset) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      for (Vertex w : g.neighbors(v))
        if (label[w] == unset) {
          label[w] = next;
          stack.push_back(w);
        }
    }
    ++next;
  }
  if (count) *count = next;
  return label;
}

// ---------------------------------------------------------------------------
// Exponential graphs

/// Graph whose vertices are all maps V(source) -> V(target) admitted by the
/// per-vertex candidate lists, indexed in mixed radix (vertex 0 most
/// significant), so map order is lexicographic.
class ExponentialGraph {
 public:
  ExponentialGraph(const Graph& source, const Graph& target, std::vector<std::vector<Vertex>> candidates,
                   std::size_t cap)
      : candidates_(std::move(candidates)) {
    std::size_t total = 1;
    for (const auto& c : candidates_) {
      if (c.empty()) {
        total = 0;
        break;
      }
      if (total > cap / c.size() + 1) throw SizeError("exponential graph too large", cap);
      total *= c.size();
    }
    if (total > cap) throw SizeError("exponential graph too large", cap);
    pos_.resize(candidates_.size());
    for (std::size_t i = 0; i < candidates_.size(); ++i) {
      pos_[i].assign(target.size(), static_cast<Vertex>(-1));
      for (Vertex j = 0; j < candidates_[i].size(); ++j) pos_[i][candidates_[i][j]] = j;
    }
    stride_.assign(candidates_.size(), 1);
    for (std::size_t i = candidates_.size(); i-- > 1;) stride_[i - 1] = stride_[i] * candidates_[i].size();

    std::vector<std::string> names;
    names.reserve(total);
    std::vector<Edge> edges;
    std::vector<Vertex> f(candidates_.size()), g(candidates_.size());
    for (std::size_t idx = 0; idx < total; ++idx) {
      decode(idx, f);
      std::string nm = "[";
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (i) nm += ",";
        nm += target.name(f[i]);
      }
      names.push_back(nm + "]");
      // Neighbors g with g(b) adjacent to f(a) for every edge (a,b).
      std::vector<std::vector<Vertex>> allowed(f.size());
      bool ok = true;
      for (Vertex b = 0; b < f.size() && ok; ++b) {
        for (Vertex cand : candidates_[b]) {
          bool fits = true;
          for (Vertex a : source.neighbors(b))
            if (!target.adjacent(f[a], cand)) {
              fits = false;
              break;
            }
          if (fits) allowed[b].push_back(cand);
        }
        ok = !allowed[b].empty();
      }
      if (!ok) continue;
      std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t acc) {
        if (i == f.size()) {
          if (idx <= acc) edges.emplace_back(static_cast<Vertex>(idx), static_cast<Vertex>(acc));
          return;
        }
        for (Vertex cand : allowed[i]) rec(i + 1, acc + pos_[i][cand] * stride_[i]);
      };
      rec(0, 0);
    }
    graph_ = Graph(std::move(names), edges);
  }

  const Graph& graph() const noexcept { return graph_; }

  std::vector<Vertex> map_of(Vertex idx) const {
    std::vector<Vertex> f(candidates_.size());
    decode(idx, f);
    return f;
  }

  std::optional<Vertex> index_of(std::span<const Vertex> f) const {
    if (f.size() != candidates_.size()) return std::nullopt;
    std::size_t acc = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f[i] >= pos_[i].size() || pos_[i][f[i]] == static_cast<Vertex>(-1)) return std::nullopt;
      acc += pos_[i][f[i]] * stride_[i];
    }
    return static_cast<Vertex>(acc);
  }

 private:
  void decode(std::size_t idx, std::vector<Vertex>& f) const {
    for (std::size_t i = 0; i < candidates_.size(); ++i) {
      f[i] = candidates_[i][idx / stride_[i]];
      idx %= stride_[i];
    }
  }

  std::vector<std::vector<Vertex>> candidates_;
  std::vector<std::vector<Vertex>> pos_;
  std::vector<std::size_t> stride_;
  Graph graph_;
};

inline constexpr std::size_t default_exponential_cap = 2'000'000;

/// exp(G,H): all maps, f ~ g iff (f x g)(E(G)) is contained in E(H).
inline ExponentialGraph exponential(const Graph& g, const Graph& h, std::size_t cap = default_exponential_cap) {
  std::vector<Vertex> all(h.size());
  std::iota(all.begin(), all.end(), 0);
  return ExponentialGraph(g, h, std::vector<std::vector<Vertex>>(g.size(), all), cap);
}

/// Y^X: the color-respecting maps.
inline ExponentialGraph exponential_bigraph(const Bigraph& x, const Bigraph& y,
                                            std::size_t cap = default_exponential_cap) {
  std::vector<std::vector<Vertex>> cand(x.size());
  for (Vertex v = 0; v < x.size(); ++v) cand[v] = y.part(x.color(v));
  return ExponentialGraph(x.graph(), y.graph(), std::move(cand), cap);
}

// ---------------------------------------------------------------------------
// Folds

struct Dismantling {
  Vertex vertex;
  Vertex witness;
};

namespace detail {

inline bool neighborhood_contained(const Graph& g, Vertex v, Vertex w) {
  auto nv = g.neighbors(v);
  auto nw = g.neighbors(w);
  return std::includes(nw.begin(), nw.end(), nv.begin(), nv.end());
}

inline std::vector<Dismantling> dismantlable(const Graph& g, const std::vector<std::uint8_t>* color) {
  std::vector<Dismantling> out;
  for (Vertex v = 0; v < g.size(); ++v)
    for (Vertex w = 0; w < g.size(); ++w) {
      if (v == w) continue;
      if (color && (*color)[v] != (*color)[w]) continue;
      if (neighborhood_contained(g, v, w)) out.push_back({v, w});
    }
  return out;
}

}  // namespace detail

/// All (v, w), v != w, with N(v) contained in N(w); sorted by v then w.
inline std::vector<Dismantling> find_dismantlable(const Graph& g) { return detail::dismantlable(g, nullptr); }

/// Bigraph version: the witness must carry the same color so that v -> w is
/// a bigraph retraction.
inline std::vector<Dismantling> find_dismantlable(const Bigraph& x) {
  return detail::dismantlable(x.graph(), &x.colors());
}

struct FoldStep {
  std::string vertex;
  std::string witness;
};

template <class G>
struct FoldResult {
  G core;
  std::vector<FoldStep> log;
};

namespace detail {

/// Smallest-first fold loop on mutable adjacency lists; returns the removal
/// order as (vertex, witness) pairs.
inline std::vector<Dismantling> fold_sequence(const Graph& g, const std::vector<std::uint8_t>* color) {
  const std::size_t n = g.size();
  std::vector<std::vector<Vertex>> adj(n);
  for (Vertex v = 0; v < n; ++v) {
    auto nb = g.neighbors(v);
    adj[v].assign(nb.begin(), nb.end());
  }
  std::vector<bool> alive(n, true);
  std::size_t alive_count = n;
  auto witness = [&](Vertex v) -> std::optional<Vertex> {
    if (adj[v].empty()) {
      for (Vertex w = 0; w < n; ++w)
        if (w != v && alive[w] && (!color || (*color)[w] == (*color)[v])) return w;
      return std::nullopt;
    }
    // Any witness is adjacent to every neighbour of v, in particular to the first.
    for (Vertex w : adj[adj[v].front()]) {
      if (w == v || (color && (*color)[w] != (*color)[v])) continue;
      if (std::includes(adj[w].begin(), adj[w].end(), adj[v].begin(), adj[v].end())) return w;
    }
    return std::nullopt;
  };
  std::set<Vertex> candidates;
  for (Vertex v = 0; v < n; ++v) candidates.insert(v);
  std::vector<Dismantling> out;
  while (!candidates.empty() && alive_count > 1) {
    Vertex v = *candidates.begin();
    candidates.erase(candidates.begin());
    if (!alive[v]) continue;
    auto w = witness(v);
    if (!w) continue;
    out.push_back({v, *w});
    alive[v] = false;
    --alive_count;
    for (Vertex u : adj[v]) {
      if (u == v) continue;
      auto& a = adj[u];
      a.erase(std::lower_bound(a.begin(), a.end(), v));
      candidates.insert(u);
    }
    adj[v].clear();
  }
  return out;
}

}  // namespace detail

/// Delete the smallest dismantlable vertex until none remain.
template <class G>
FoldResult<G> fold_reduce(const G& input) {
  const Graph& g = [&]() -> const Graph& {
    if constexpr (std::is_same_v<G, Bigraph>) return input.graph();
    else return input;
  }();
  const std::vector<std::uint8_t>* color = nullptr;
  if constexpr (std::is_same_v<G, Bigraph>) color = &input.colors();
  auto seq = detail::fold_sequence(g, color);
  FoldResult<G> res;
  std::vector<bool> removed(g.size(), false);
  for (auto [v, w] : seq) {
    res.log.push_back({g.name(v), g.name(w)});
    removed[v] = true;
  }
  std::vector<Vertex> keep;
  for (Vertex u = 0; u < g.size(); ++u)
    if (!removed[u]) keep.push_back(u);
  res.core = induced_subgraph(input, keep);
  return res;
}

// ---------------------------------------------------------------------------
// Isomorphism

inline constexpr std::size_t isomorphism_cap = 512;

namespace detail {

inline std::optional<std::vector<Vertex>> isomorphism(const Graph& a, const Graph& b,
                                                      const std::vector<std::uint8_t>* ca,
                                                      const std::vector<std::uint8_t>* cb) {
  if (a.size() > isomorphism_cap || b.size() > isomorphism_cap)
    throw SizeError("isomorphism search refused", isomorphism_cap);
  if (a.size() != b.size() || a.edge_count() != b.edge_count()) return std::nullopt;
  const std::size_t n = a.size();
  auto key = [](const Graph& g, const std::vector<std::uint8_t>* c, Vertex v) {
    return std::tuple<std::size_t, bool, int>(g.neighbors(v).size(), g.has_loop(v), c ? (*c)[v] : 0);
  };
  {
    std::vector<std::tuple<std::size_t, bool, int>> ka, kb;
    for (Vertex v = 0; v < n; ++v) {
      ka.push_back(key(a, ca, v));
      kb.push_back(key(b, cb, v));
    }
    std::sort(ka.begin(), ka.end());
    std::sort(kb.begin(), kb.end());
    if (ka != kb) return std::nullopt;
  }
  // Visit A in BFS order so that each new vertex has mapped neighbors.
  std::vector<Vertex> order;
  std::vector<bool> seen(n, false);
  std::vector<Vertex> by_degree(n);
  std::iota(by_degree.begin(), by_degree.end(), 0);
  std::stable_sort(by_degree.begin(), by_degree.end(),
                   [&](Vertex x, Vertex y) { return a.neighbors(x).size() > a.neighbors(y).size(); });
  for (Vertex s : by_degree) {
    if (seen[s]) continue;
    std::deque<Vertex> q{s};
    seen[s] = true;
    while (!q.empty()) {
      Vertex v = q.front();
      q.pop_front();
      order.push_back(v);
      for (Vertex w : a.neighbors(v))
        if (!seen[w]) {
          seen[w] = true;
          q.push_back(w);
        }
    }
  }
  constexpr Vertex unset = static_cast<Vertex>(-1);
  std::vector<Vertex> fwd(n, unset), bwd(n, unset);
  std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
    if (i == n) return true;
    Vertex v = order[i];
    auto kv = key(a, ca, v);
    for (Vertex c = 0; c < n; ++c) {
      if (bwd[c] != unset || key(b, cb, c) != kv) continue;
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) {
        Vertex u = order[j];
        if (a.adjacent(u, v) != b.adjacent(fwd[u], c)) ok = false;
      }
      if (!ok) continue;
      fwd[v] = c;
      bwd[c] = v;
      if (rec(i + 1)) return true;
      fwd[v] = bwd[c] = unset;
    }
    return false;
  };
  if (!rec(0)) return std::nullopt;
  return fwd;
}

}  // namespace detail

/// Exact backtracking isomorphism search; returns the vertex map A -> B.
inline std::optional<std::vector<Vertex>> is_isomorphic(const Graph& a, const Graph& b) {
  return detail::isomorphism(a, b, nullptr, nullptr);
}

/// Color-preserving isomorphism of bigraphs.
inline std::optional<std::vector<Vertex>> is_isomorphic(const Bigraph& a, const Bigraph& b) {
  return detail::isomorphism(a.graph(), b.graph(), &a.colors(), &b.colors());
}

// ---------------------------------------------------------------------------
// x-homotopy

/// f and g (bigraph homs X -> Y) lie in one component of the maximal
/// reflexive subgraph of Y^X.
inline bool times_homotopic(const Bigraph& x, const Bigraph& y, const GraphHom& f, const GraphHom& g,
                            std::size_t cap = default_exponential_cap) {
  if (!is_bigraph_hom(x, y, f.map) || !is_bigraph_hom(x, y, g.map))
    throw InputError("times_homotopic needs bigraph homomorphisms");
  if (f == g) return true;
  ExponentialGraph e = exponential_bigraph(x, y, cap);
  Vertex s = *e.index_of(f.map), t = *e.index_of(g.map);
  const Graph& eg = e.graph();
  std::vector<bool> seen(eg.size(), false);
  std::vector<Vertex> stack{s};
  seen[s] = true;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    if (v == t) return true;
    for (Vertex w : eg.neighbors(v))
      if (!seen[w] && eg.has_loop(w)) {
        seen[w] = true;
        stack.push_back(w);
      }
  }
  return false;
}

}  // namespace boxloop
