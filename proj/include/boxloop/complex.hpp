#pragma once

// Abstract simplicial complexes (stored by facets), face posets, order
// complexes, and the text formats for complexes and posets.

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "boxloop/graph.hpp"
#include "boxloop/poset.hpp"

namespace boxloop {

using Simplex = std::vector<Vertex>;

class SimplicialComplex {
 public:
  SimplicialComplex() = default;

  /// Facets are sorted, deduplicated and pruned to the maximal ones;
  /// vertices not covered by any facet become 0-simplices.
  SimplicialComplex(std::vector<std::string> names, std::vector<Simplex> facets, bool facets_are_maximal = false)
      : names_(std::move(names)) {
    std::vector<bool> covered(names_.size(), false);
    for (auto& f : facets) {
      std::sort(f.begin(), f.end());
      f.erase(std::unique(f.begin(), f.end()), f.end());
      for (Vertex v : f) {
        if (v >= names_.size()) throw InputError("simplex uses an undeclared vertex");
        covered[v] = true;
      }
    }
    facets.erase(std::remove_if(facets.begin(), facets.end(), [](const Simplex& f) { return f.empty(); }),
                 facets.end());
    for (Vertex v = 0; v < names_.size(); ++v)
      if (!covered[v]) facets.push_back({v});
    std::sort(facets.begin(), facets.end());
    facets.erase(std::unique(facets.begin(), facets.end()), facets.end());
    if (!facets_are_maximal) {
      std::vector<Simplex> by_size = facets;
      std::stable_sort(by_size.begin(), by_size.end(),
                       [](const Simplex& a, const Simplex& b) { return a.size() > b.size(); });
      std::vector<Simplex> kept;
      for (const auto& f : by_size) {
        bool contained = false;
        for (const auto& g : kept)
          if (g.size() > f.size() && std::includes(g.begin(), g.end(), f.begin(), f.end())) {
            contained = true;
            break;
          }
        if (!contained) kept.push_back(f);
      }
      std::sort(kept.begin(), kept.end());
      facets = std::move(kept);
    }
    facets_ = std::move(facets);
  }

  std::size_t vertex_count() const noexcept { return names_.size(); }
  const std::string& name(Vertex v) const { return names_.at(v); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<Simplex>& facets() const noexcept { return facets_; }
  bool empty() const noexcept { return names_.empty(); }

  int dimension() const {
    int d = -1;
    for (const auto& f : facets_) d = std::max(d, static_cast<int>(f.size()) - 1);
    return d;
  }

  /// All simplices of dimension <= max_dim, grouped by dimension, each
  /// group sorted lexicographically.
  std::vector<std::vector<Simplex>> faces_by_dim(int max_dim, std::size_t cap = 20'000'000) const {
    int top = std::min(max_dim, dimension());
    std::vector<std::vector<Simplex>> out(top + 1);
    std::size_t total = 0;
    for (int k = 0; k <= top; ++k) {
      auto& layer = out[k];
      for (const auto& f : facets_) {
        if (static_cast<int>(f.size()) < k + 1) continue;
        // k+1 subsets of f
        std::vector<std::size_t> idx(k + 1);
        for (int i = 0; i <= k; ++i) idx[i] = i;
        for (;;) {
          Simplex s(k + 1);
          for (int i = 0; i <= k; ++i) s[i] = f[idx[i]];
          layer.push_back(std::move(s));
          int i = k;
          while (i >= 0 && idx[i] == f.size() - (k + 1 - i)) --i;
          if (i < 0) break;
          ++idx[i];
          for (int j = i + 1; j <= k; ++j) idx[j] = idx[j - 1] + 1;
        }
        if (layer.size() > cap) {
          std::sort(layer.begin(), layer.end());
          layer.erase(std::unique(layer.begin(), layer.end()), layer.end());
        }
      }
      std::sort(layer.begin(), layer.end());
      layer.erase(std::unique(layer.begin(), layer.end()), layer.end());
      total += layer.size();
      if (total > cap) throw SizeError("too many simplices", cap, total);
    }
    return out;
  }

  std::size_t simplex_count(int max_dim = 1 << 20) const {
    std::size_t n = 0;
    for (const auto& layer : faces_by_dim(max_dim)) n += layer.size();
    return n;
  }

  std::string simplex_name(const Simplex& s) const {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i) out += ",";
      out += names_[s[i]];
    }
    return out + "}";
  }

  bool operator==(const SimplicialComplex& o) const { return names_ == o.names_ && facets_ == o.facets_; }

 private:
  std::vector<std::string> names_;
  std::vector<Simplex> facets_;
};

/// The subcomplex induced on a vertex subset (simplices entirely inside).
inline SimplicialComplex induced_subcomplex(const SimplicialComplex& k, std::span<const Vertex> keep) {
  std::vector<Vertex> pos(k.vertex_count(), static_cast<Vertex>(-1));
  std::vector<std::string> names;
  for (Vertex i = 0; i < keep.size(); ++i) {
    pos[keep[i]] = i;
    names.push_back(k.name(keep[i]));
  }
  std::vector<Simplex> facets;
  for (const auto& f : k.facets()) {
    Simplex s;
    for (Vertex v : f)
      if (pos[v] != static_cast<Vertex>(-1)) s.push_back(pos[v]);
    if (!s.empty()) facets.push_back(std::move(s));
  }
  return SimplicialComplex(std::move(names), std::move(facets));
}

/// Nonempty simplices ordered by inclusion.
inline Poset face_poset(const SimplicialComplex& k, std::size_t cap = 5'000'000) {
  auto layers = k.faces_by_dim(1 << 20, cap);
  std::vector<std::string> names;
  std::map<Simplex, Element> index;
  for (const auto& layer : layers)
    for (const auto& s : layer) {
      index.emplace(s, static_cast<Element>(names.size()));
      names.push_back(k.simplex_name(s));
    }
  std::vector<std::pair<Element, Element>> covers;
  for (std::size_t d = 1; d < layers.size(); ++d)
    for (const auto& s : layers[d]) {
      Element top = index.at(s);
      for (std::size_t i = 0; i < s.size(); ++i) {
        Simplex face = s;
        face.erase(face.begin() + i);
        covers.emplace_back(index.at(face), top);
      }
    }
  return Poset(std::move(names), std::move(covers), false);
}

/// Chains of P; facets are the maximal chains.
inline SimplicialComplex order_complex(const Poset& p, std::size_t cap = 5'000'000) {
  std::vector<Simplex> facets;
  Simplex chain;
  std::function<void(Element)> rec = [&](Element e) {
    chain.push_back(e);
    auto up = p.upper_covers(e);
    if (up.empty()) {
      facets.push_back(chain);
      if (facets.size() > cap) throw SizeError("too many maximal chains", cap, facets.size());
    } else {
      for (Element b : up) rec(b);
    }
    chain.pop_back();
  };
  for (Element m : p.minimal_elements()) rec(m);
  return SimplicialComplex(p.names(), std::move(facets), true);
}

// ---------------------------------------------------------------------------
// Text formats

namespace detail {

inline std::vector<std::size_t> natural_order(const std::vector<std::string>& names) {
  std::vector<std::size_t> order(names.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return natural_less(names[a], names[b]); });
  return order;
}

}  // namespace detail

/// `facet <v1> <v2> ...`, vertices and lines in natural name order.
inline void write_complex(std::ostream& out, const SimplicialComplex& k) {
  auto order = detail::natural_order(k.names());
  std::vector<std::size_t> rank(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
  std::vector<std::vector<std::size_t>> lines;
  for (const auto& f : k.facets()) {
    std::vector<std::size_t> r;
    for (Vertex v : f) r.push_back(rank[v]);
    std::sort(r.begin(), r.end());
    lines.push_back(std::move(r));
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& r : lines) {
    out << "facet";
    for (std::size_t x : r) out << " " << k.name(static_cast<Vertex>(order[x]));
    out << "\n";
  }
}

inline SimplicialComplex read_complex(std::istream& in) {
  std::vector<std::vector<std::string>> raw;
  std::vector<std::string> names;
  std::map<std::string, bool> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag != "facet") throw InputError("line " + std::to_string(lineno) + ": expected 'facet'");
    std::vector<std::string> f;
    std::string v;
    while (ls >> v) {
      f.push_back(v);
      if (seen.emplace(v, true).second) names.push_back(v);
    }
    if (f.empty()) throw InputError("line " + std::to_string(lineno) + ": empty facet");
    raw.push_back(std::move(f));
  }
  std::sort(names.begin(), names.end(), natural_less);
  std::map<std::string, Vertex> index;
  for (Vertex i = 0; i < names.size(); ++i) index[names[i]] = i;
  std::vector<Simplex> facets;
  for (const auto& f : raw) {
    Simplex s;
    for (const auto& v : f) s.push_back(index.at(v));
    facets.push_back(std::move(s));
  }
  return SimplicialComplex(std::move(names), std::move(facets));
}

/// `el <id>` lines then `cov <a> <b>` lines, both in natural name order.
inline void write_poset(std::ostream& out, const Poset& p) {
  auto order = detail::natural_order(p.names());
  std::vector<std::size_t> rank(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
  for (std::size_t i : order) out << "el " << p.name(static_cast<Element>(i)) << "\n";
  std::vector<std::pair<std::size_t, std::size_t>> cov;
  for (auto [a, b] : p.covers()) cov.emplace_back(rank[a], rank[b]);
  std::sort(cov.begin(), cov.end());
  for (auto [a, b] : cov)
    out << "cov " << p.name(static_cast<Element>(order[a])) << " " << p.name(static_cast<Element>(order[b])) << "\n";
}

inline Poset read_poset(std::istream& in) {
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> raw;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag, a, b;
    if (!(ls >> tag)) continue;
    if (tag == "el") {
      if (!(ls >> a)) throw InputError("line " + std::to_string(lineno) + ": 'el' needs an id");
      names.push_back(a);
    } else if (tag == "cov") {
      if (!(ls >> a >> b)) throw InputError("line " + std::to_string(lineno) + ": 'cov' needs two ids");
      raw.emplace_back(a, b);
    } else {
      throw InputError("line " + std::to_string(lineno) + ": unknown record '" + tag + "'");
    }
  }
  std::sort(names.begin(), names.end(), natural_less);
  std::map<std::string, Element> index;
  for (Element i = 0; i < names.size(); ++i)
    if (!index.emplace(names[i], i).second) throw InputError("duplicate element '" + names[i] + "'");
  std::vector<std::pair<Element, Element>> covers;
  for (auto& [a, b] : raw) {
    auto ia = index.find(a), ib = index.find(b);
    if (ia == index.end() || ib == index.end()) throw InputError("cover uses an undeclared element");
    covers.emplace_back(ia->second, ib->second);
  }
  return Poset(std::move(names), std::move(covers), true);
}

inline std::string complex_to_string(const SimplicialComplex& k) {
  std::ostringstream s;
  write_complex(s, k);
  return s.str();
}

inline std::string poset_to_string(const Poset& p) {
  std::ostringstream s;
  write_poset(s, p);
  return s.str();
}

}  // namespace boxloop
