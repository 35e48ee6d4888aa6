#pragma once

// Posets and complexes attached to graphs and bigraphs: box complexes, Hom
// complexes (multi-homomorphism posets), neighborhood and clique complexes.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "boxloop/complex.hpp"
#include "boxloop/graph.hpp"
#include "boxloop/poset.hpp"

namespace boxloop {

using VertexSet = std::uint64_t;  // bitmask over at most 64 vertices

inline constexpr std::size_t default_hom_cap = 500'000;

namespace detail {

inline void require_small(const Graph& g, const char* what) {
  if (g.size() > 64) throw SizeError(std::string(what) + " supports at most 64 target vertices", 64);
}

inline VertexSet neighborhood_mask(const Graph& g, Vertex v) {
  VertexSet m = 0;
  for (Vertex w : g.neighbors(v)) m |= VertexSet{1} << w;
  return m;
}

inline std::string set_name(const Graph& g, VertexSet s) {
  std::string out = "{";
  bool first = true;
  for (Vertex v = 0; v < 64; ++v)
    if (s >> v & 1) {
      if (!first) out += ",";
      out += g.name(v);
      first = false;
    }
  return out + "}";
}

inline std::vector<Vertex> members(VertexSet s) {
  std::vector<Vertex> out;
  while (s) {
    out.push_back(static_cast<Vertex>(std::countr_zero(s)));
    s &= s - 1;
  }
  return out;
}

}  // namespace detail

/// A set-valued vertex map; `sets[t]` is a bitmask over target vertices.
struct MultiHom {
  std::vector<VertexSet> sets;

  bool operator==(const MultiHom&) const = default;
  auto operator<=>(const MultiHom&) const = default;

  bool leq(const MultiHom& o) const {
    for (std::size_t i = 0; i < sets.size(); ++i)
      if (sets[i] & ~o.sets[i]) return false;
    return true;
  }
};

inline bool is_multihom(const Graph& source, const Graph& target, const MultiHom& eta) {
  if (eta.sets.size() != source.size() || target.size() > 64) return false;
  for (VertexSet s : eta.sets)
    if (!s || (target.size() < 64 && (s >> target.size()))) return false;
  for (auto [a, b] : source.edges())
    for (Vertex x : detail::members(eta.sets[a]))
      if ((detail::neighborhood_mask(target, x) & eta.sets[b]) != eta.sets[b]) return false;
  return true;
}

/// (tau * eta)(v) = union of tau(w) over w in eta(v).
inline MultiHom compose(const MultiHom& tau, const MultiHom& eta) {
  MultiHom out;
  out.sets.reserve(eta.sets.size());
  for (VertexSet s : eta.sets) {
    VertexSet acc = 0;
    for (Vertex w : detail::members(s)) acc |= tau.sets.at(w);
    out.sets.push_back(acc);
  }
  return out;
}

/// A poset whose elements are multi-homomorphisms, with an optional Z2-action.
struct HomPoset {
  Poset poset;
  std::vector<MultiHom> elements;
  std::optional<InvolutionAction> action;

  std::optional<Element> find(const MultiHom& m) const {
    auto it = std::lower_bound(sorted_.begin(), sorted_.end(), std::pair<MultiHom, Element>{m, 0},
                               [](const auto& a, const auto& b) { return a.first < b.first; });
    if (it == sorted_.end() || it->first != m) return std::nullopt;
    return it->second;
  }

  void build_index() {
    sorted_.clear();
    for (Element i = 0; i < elements.size(); ++i) sorted_.emplace_back(elements[i], i);
    std::sort(sorted_.begin(), sorted_.end());
  }

 private:
  std::vector<std::pair<MultiHom, Element>> sorted_;
};

namespace detail {

/// Enumerate multihoms T -> G with eta(t) inside allowed[t]; ordered by total
/// size, then lexicographically.
inline HomPoset enumerate_multihoms(const Graph& t, const Graph& g, const std::vector<VertexSet>& allowed,
                                    std::size_t cap) {
  require_small(g, "Hom complex");
  const std::size_t n = t.size();
  std::vector<VertexSet> nbr(g.size());
  for (Vertex v = 0; v < g.size(); ++v) nbr[v] = neighborhood_mask(g, v);
  auto common = [&](VertexSet s) {
    VertexSet acc = ~VertexSet{0};
    for (Vertex v : members(s)) acc &= nbr[v];
    return acc;
  };
  std::vector<MultiHom> found;
  MultiHom cur;
  cur.sets.assign(n, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n) {
      found.push_back(cur);
      if (found.size() > cap) throw SizeError("Hom complex too large", cap, found.size());
      return;
    }
    VertexSet avail = allowed[i];
    for (Vertex s : t.neighbors(static_cast<Vertex>(i)))
      if (s < i) avail &= common(cur.sets[s]);
    bool looped = t.has_loop(static_cast<Vertex>(i));
    for (VertexSet sub = avail; sub; sub = (sub - 1) & avail) {
      if (looped && (common(sub) & sub) != sub) continue;
      cur.sets[i] = sub;
      rec(i + 1);
    }
    cur.sets[i] = 0;
  };
  if (n == 0) {
    found.push_back(cur);
  } else {
    rec(0);
  }
  std::sort(found.begin(), found.end(), [](const MultiHom& a, const MultiHom& b) {
    std::size_t sa = 0, sb = 0;
    for (auto s : a.sets) sa += std::popcount(s);
    for (auto s : b.sets) sb += std::popcount(s);
    if (sa != sb) return sa < sb;
    return a.sets < b.sets;
  });
  HomPoset hp;
  hp.elements = std::move(found);
  hp.build_index();
  std::vector<std::string> names;
  names.reserve(hp.elements.size());
  for (const auto& m : hp.elements) {
    std::string nm = "(";
    for (std::size_t i = 0; i < n; ++i) {
      if (i) nm += ",";
      nm += set_name(g, m.sets[i]);
    }
    names.push_back(nm + ")");
  }
  std::vector<std::pair<Element, Element>> covers;
  for (Element e = 0; e < hp.elements.size(); ++e) {
    MultiHom m = hp.elements[e];
    for (std::size_t i = 0; i < n; ++i) {
      VertexSet orig = m.sets[i];
      for (Vertex v : members(allowed[i] & ~orig)) {
        m.sets[i] = orig | (VertexSet{1} << v);
        if (auto up = hp.find(m)) covers.emplace_back(e, *up);
      }
      m.sets[i] = orig;
    }
  }
  hp.poset = Poset(std::move(names), std::move(covers), false);
  return hp;
}

inline VertexSet full_mask(std::size_t n) { return n >= 64 ? ~VertexSet{0} : (VertexSet{1} << n) - 1; }

}  // namespace detail

/// Hom(T,G): multi-homomorphisms ordered by pointwise inclusion.
inline HomPoset hom_complex(const Graph& t, const Graph& g, std::size_t cap = default_hom_cap) {
  detail::require_small(g, "Hom complex");
  return detail::enumerate_multihoms(t, g, std::vector<VertexSet>(t.size(), detail::full_mask(g.size())), cap);
}

/// Hom_{/K2}(X,Y): 2-colored multi-homomorphisms.
inline HomPoset hom_complex_bigraph(const Bigraph& x, const Bigraph& y, std::size_t cap = default_hom_cap) {
  detail::require_small(y.graph(), "Hom complex");
  VertexSet part[2] = {0, 0};
  for (Vertex v = 0; v < y.size(); ++v) part[y.color(v)] |= VertexSet{1} << v;
  std::vector<VertexSet> allowed(x.size());
  for (Vertex v = 0; v < x.size(); ++v) allowed[v] = part[x.color(v)];
  return detail::enumerate_multihoms(x.graph(), y.graph(), allowed, cap);
}

/// B(G): pairs (sigma, tau) of nonempty vertex sets with sigma x tau in E(G),
/// with the swap action. Element names are "({..},{..})".
inline HomPoset box_complex(const Graph& g, std::size_t cap = default_hom_cap) {
  HomPoset hp = hom_complex(complete_graph(2), g, cap);
  InvolutionAction swap;
  swap.action.resize(hp.elements.size());
  for (Element e = 0; e < hp.elements.size(); ++e) {
    const auto& s = hp.elements[e].sets;
    swap.action[e] = *hp.find(MultiHom{{s[1], s[0]}});
  }
  hp.action = std::move(swap);
  return hp;
}

/// B_{/K2}(X): sigma in V0, tau in V1. With an odd involution the action
/// (sigma, tau) -> (alpha(tau), alpha(sigma)) is attached.
inline HomPoset box_complex_bigraph(const Bigraph& x, const OddInvolution* alpha = nullptr,
                                    std::size_t cap = default_hom_cap) {
  HomPoset hp = hom_complex_bigraph(k2_bigraph(), x, cap);
  if (alpha) {
    alpha->validate(x);
    auto image = [&](VertexSet s) {
      VertexSet out = 0;
      for (Vertex v : detail::members(s)) out |= VertexSet{1} << (*alpha)(v);
      return out;
    };
    InvolutionAction act;
    act.action.resize(hp.elements.size());
    for (Element e = 0; e < hp.elements.size(); ++e) {
      const auto& s = hp.elements[e].sets;
      act.action[e] = *hp.find(MultiHom{{image(s[1]), image(s[0])}});
    }
    hp.action = std::move(act);
  }
  return hp;
}

/// N(G): vertex sets with a common neighbor; vertices are the non-isolated
/// vertices of G.
inline SimplicialComplex neighborhood_complex(const Graph& g) {
  std::vector<Vertex> pos(g.size(), static_cast<Vertex>(-1));
  std::vector<std::string> names;
  for (Vertex v = 0; v < g.size(); ++v)
    if (!g.neighbors(v).empty()) {
      pos[v] = static_cast<Vertex>(names.size());
      names.push_back(g.name(v));
    }
  std::vector<Simplex> facets;
  for (Vertex v = 0; v < g.size(); ++v) {
    if (g.neighbors(v).empty()) continue;
    Simplex s;
    for (Vertex w : g.neighbors(v)) s.push_back(pos[w]);
    facets.push_back(std::move(s));
  }
  return SimplicialComplex(std::move(names), std::move(facets));
}

/// Maximal cliques of g restricted to `vertices` (Bron-Kerbosch with pivot).
inline std::vector<Simplex> maximal_cliques(const Graph& g, const std::vector<Vertex>& vertices,
                                            std::size_t cap = 5'000'000) {
  std::vector<bool> in(g.size(), false);
  for (Vertex v : vertices) in[v] = true;
  auto nbrs = [&](Vertex v) {
    std::vector<Vertex> out;
    for (Vertex w : g.neighbors(v))
      if (w != v && in[w]) out.push_back(w);
    return out;
  };
  std::vector<Simplex> out;
  Simplex r;
  std::function<void(std::vector<Vertex>, std::vector<Vertex>)> bk = [&](std::vector<Vertex> p,
                                                                         std::vector<Vertex> x) {
    if (p.empty()) {
      if (x.empty()) {
        out.push_back(r);
        std::sort(out.back().begin(), out.back().end());
        if (out.size() > cap) throw SizeError("too many maximal cliques", cap, out.size());
      }
      return;
    }
    Vertex pivot = p.front();
    std::size_t best = 0;
    for (const auto* set : {&p, &x})
      for (Vertex u : *set) {
        std::size_t c = 0;
        for (Vertex w : g.neighbors(u))
          if (w != u && std::binary_search(p.begin(), p.end(), w)) ++c;
        if (c >= best) {
          best = c;
          pivot = u;
        }
      }
    std::vector<Vertex> candidates;
    for (Vertex v : p)
      if (v == pivot || !g.adjacent(pivot, v)) candidates.push_back(v);
    for (Vertex v : candidates) {
      auto nv = nbrs(v);
      std::vector<Vertex> p2, x2;
      std::set_intersection(p.begin(), p.end(), nv.begin(), nv.end(), std::back_inserter(p2));
      std::set_intersection(x.begin(), x.end(), nv.begin(), nv.end(), std::back_inserter(x2));
      r.push_back(v);
      bk(std::move(p2), std::move(x2));
      r.pop_back();
      p.erase(std::find(p.begin(), p.end(), v));
      x.insert(std::upper_bound(x.begin(), x.end(), v), v);
    }
  };
  std::vector<Vertex> all = vertices;
  std::sort(all.begin(), all.end());
  if (!all.empty()) bk(all, {});
  std::sort(out.begin(), out.end());
  return out;
}

/// C(G): clique complex of the maximal reflexive subgraph.
inline SimplicialComplex clique_complex(const Graph& g, std::size_t cap = 5'000'000) {
  auto looped = looped_vertices(g);
  std::vector<Vertex> pos(g.size(), static_cast<Vertex>(-1));
  std::vector<std::string> names;
  for (Vertex v : looped) {
    pos[v] = static_cast<Vertex>(names.size());
    names.push_back(g.name(v));
  }
  std::vector<Simplex> facets;
  for (auto& c : maximal_cliques(g, looped, cap)) {
    for (auto& v : c) v = pos[v];
    facets.push_back(std::move(c));
  }
  return SimplicialComplex(std::move(names), std::move(facets), true);
}

}  // namespace boxloop
