#pragma once

// Edge-path group presentations of simplicial complexes and their
// abelianizations.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "boxloop/complex.hpp"
#include "boxloop/errors.hpp"
#include "boxloop/smith.hpp"

namespace boxloop {

/// A word is a list of signed generator numbers: +k is generator k-1, -k its inverse.
using Word = std::vector<int>;

struct GroupPresentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;

  bool trivial() const { return generators.empty(); }

  /// `gen <name>` lines then `rel <word>` lines; the empty presentation is `trivial`.
  std::string to_string() const {
    std::ostringstream out;
    if (trivial()) return "trivial\n";
    for (const auto& g : generators) out << "gen " << g << "\n";
    for (const auto& r : relators) {
      out << "rel";
      for (int s : r) out << ' ' << (s < 0 ? "-" : "") << generators[std::abs(s) - 1];
      out << "\n";
    }
    return out.str();
  }
};

struct AbelianGroup {
  std::size_t rank = 0;
  std::vector<Integer> torsion;  // invariant factors > 1

  bool operator==(const AbelianGroup&) const = default;
  std::string to_string() const {
    std::ostringstream out;
    bool any = false;
    if (rank == 1) out << "Z", any = true;
    else if (rank > 1) out << "Z^" << rank, any = true;
    for (const auto& d : torsion) {
      if (any) out << " + ";
      out << "Z/" << d;
      any = true;
    }
    if (!any) out << "0";
    return out.str();
  }
};

namespace detail {

inline Word free_reduce(const Word& w) {
  Word out;
  for (int s : w) {
    if (!out.empty() && out.back() == -s) out.pop_back();
    else out.push_back(s);
  }
  return out;
}

inline Word cyclic_reduce(Word w) {
  w = free_reduce(w);
  std::size_t i = 0, j = w.size();
  while (j - i >= 2 && w[i] == -w[j - 1]) {
    ++i;
    --j;
  }
  return Word(w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(j));
}

inline Word invert(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& s : out) s = -s;
  return out;
}

/// Smallest cyclic rotation of w or its inverse; equal relators coincide.
inline Word canonical_relator(const Word& w) {
  Word best = w;
  for (const Word& base : {w, invert(w)})
    for (std::size_t r = 0; r < base.size(); ++r) {
      Word rot(base.begin() + static_cast<std::ptrdiff_t>(r), base.end());
      rot.insert(rot.end(), base.begin(), base.begin() + static_cast<std::ptrdiff_t>(r));
      if (rot < best) best = rot;
    }
  return best;
}

inline std::size_t total_length(const std::vector<Word>& rels) {
  std::size_t n = 0;
  for (const auto& r : rels) n += r.size();
  return n;
}

}  // namespace detail

/// Terminating Tietze moves: cyclic reduction, removal of trivial and
/// duplicate relators, and elimination of a generator that occurs exactly
/// once in some relator (shortest relator first, bounded growth).
inline GroupPresentation simplify(GroupPresentation p) {
  const std::size_t growth_cap = 4 * detail::total_length(p.relators) + 1000;
  for (;;) {
    // Normalize.
    std::vector<Word> rels;
    for (auto& r : p.relators) {
      Word c = detail::cyclic_reduce(r);
      if (!c.empty()) rels.push_back(detail::canonical_relator(c));
    }
    std::sort(rels.begin(), rels.end(), [](const Word& a, const Word& b) {
      return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    rels.erase(std::unique(rels.begin(), rels.end()), rels.end());
    p.relators = std::move(rels);

    bool changed = false;
    for (std::size_t ri = 0; ri < p.relators.size() && !changed; ++ri) {
      const Word& r = p.relators[ri];
      std::map<int, int> count;
      for (int s : r) ++count[std::abs(s)];
      for (std::size_t pos = 0; pos < r.size(); ++pos) {
        int g = std::abs(r[pos]);
        if (count[g] != 1) continue;
        // r = A g^e B = 1 gives g^e = A^{-1} B^{-1}.
        Word a(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(pos));
        Word b(r.begin() + static_cast<std::ptrdiff_t>(pos) + 1, r.end());
        Word ge = detail::invert(a);
        Word binv = detail::invert(b);
        ge.insert(ge.end(), binv.begin(), binv.end());
        Word gval = r[pos] > 0 ? ge : detail::invert(ge);
        std::vector<Word> next;
        for (std::size_t rj = 0; rj < p.relators.size(); ++rj) {
          if (rj == ri) continue;
          Word w;
          for (int s : p.relators[rj]) {
            if (std::abs(s) != g) {
              w.push_back(s);
            } else {
              const Word& sub = s > 0 ? gval : detail::invert(gval);
              w.insert(w.end(), sub.begin(), sub.end());
            }
          }
          next.push_back(std::move(w));
        }
        if (detail::total_length(next) > growth_cap) continue;
        // Renumber generators above g.
        for (auto& w : next)
          for (int& s : w) {
            int k = std::abs(s);
            if (k > g) s = s > 0 ? k - 1 : -(k - 1);
          }
        p.generators.erase(p.generators.begin() + (g - 1));
        p.relators = std::move(next);
        changed = true;
        break;
      }
    }
    if (!changed) return p;
  }
}

/// Edge-path group of the component of `base`: generators are the edges
/// outside a BFS spanning tree, relators come from the 2-simplices.
inline GroupPresentation edge_path_presentation(const SimplicialComplex& k, Vertex base, bool simplify_result = true) {
  if (base >= k.vertex_count()) throw InputError("base is not a vertex of the complex");
  auto layers = k.faces_by_dim(2);
  const std::size_t n = k.vertex_count();
  std::vector<std::vector<Vertex>> adj(n);
  if (layers.size() > 1)
    for (const auto& e : layers[1]) {
      adj[e[0]].push_back(e[1]);
      adj[e[1]].push_back(e[0]);
    }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  std::vector<bool> seen(n, false);
  std::vector<std::pair<Vertex, Vertex>> tree;
  std::deque<Vertex> queue{base};
  seen[base] = true;
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop_front();
    for (Vertex w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        tree.emplace_back(std::min(v, w), std::max(v, w));
        queue.push_back(w);
      }
  }
  std::sort(tree.begin(), tree.end());
  GroupPresentation p;
  std::map<std::pair<Vertex, Vertex>, int> gen;
  if (layers.size() > 1)
    for (const auto& e : layers[1]) {
      if (!seen[e[0]]) continue;
      std::pair<Vertex, Vertex> key{e[0], e[1]};
      if (std::binary_search(tree.begin(), tree.end(), key)) continue;
      p.generators.push_back(k.name(e[0]) + "-" + k.name(e[1]));
      gen[key] = static_cast<int>(p.generators.size());
    }
  auto edge_word = [&](Vertex a, Vertex b) -> Word {
    auto it = gen.find({std::min(a, b), std::max(a, b)});
    if (it == gen.end()) return {};
    return {a < b ? it->second : -it->second};
  };
  if (layers.size() > 2)
    for (const auto& t : layers[2]) {
      if (!seen[t[0]]) continue;
      Word w;
      for (auto [a, b] : {std::pair{t[0], t[1]}, std::pair{t[1], t[2]}, std::pair{t[2], t[0]}}) {
        auto s = edge_word(a, b);
        w.insert(w.end(), s.begin(), s.end());
      }
      p.relators.push_back(std::move(w));
    }
  return simplify_result ? simplify(std::move(p)) : p;
}

/// Abelianization: Z^g modulo the relator exponent-sum matrix.
inline AbelianGroup abelianization(const GroupPresentation& p) {
  const std::size_t g = p.generators.size();
  AbelianGroup out;
  if (p.relators.empty()) {
    out.rank = g;
    return out;
  }
  IntegerMatrix m(p.relators.size(), g);
  for (std::size_t i = 0; i < p.relators.size(); ++i)
    for (int s : p.relators[i]) m(i, std::abs(s) - 1) += s > 0 ? 1 : -1;
  auto factors = invariant_factors(std::move(m));
  out.rank = g - factors.size();
  for (auto& d : factors)
    if (d > 1) out.torsion.push_back(d);
  return out;
}

}  // namespace boxloop
