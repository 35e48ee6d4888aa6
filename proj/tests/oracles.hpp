// Brute-force oracles and seeded generators shared by the test programs.
// Nothing here calls into the search code it is used to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "boxloop/graph.hpp"

namespace oracle {

using boxloop::Graph;
using boxloop::Vertex;

inline Graph random_graph(std::size_t n, double p, std::mt19937_64& rng, bool loops = false) {
  std::bernoulli_distribution coin(p);
  std::vector<boxloop::Edge> edges;
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = loops ? a : a + 1; b < n; ++b)
      if (coin(rng)) edges.emplace_back(a, b);
  return Graph::numbered(n, edges);
}

/// Adjacency matrix as a plain bool table.
inline std::vector<std::vector<bool>> adjacency(const Graph& g) {
  std::vector<std::vector<bool>> a(g.size(), std::vector<bool>(g.size(), false));
  for (auto [u, v] : g.edges()) a[u][v] = a[v][u] = true;
  return a;
}

/// Tries every permutation.
inline bool isomorphic(const Graph& g, const Graph& h, const std::vector<std::uint8_t>* cg = nullptr,
                       const std::vector<std::uint8_t>* ch = nullptr) {
  if (g.size() != h.size()) return false;
  auto a = adjacency(g), b = adjacency(h);
  std::vector<Vertex> p(g.size());
  std::iota(p.begin(), p.end(), 0);
  do {
    bool ok = true;
    for (Vertex u = 0; u < g.size() && ok; ++u) {
      if (cg && (*cg)[u] != (*ch)[p[u]]) ok = false;
      for (Vertex v = 0; v < g.size() && ok; ++v)
        if (a[u][v] != b[p[u]][p[v]]) ok = false;
    }
    if (ok) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

/// Number of graph homs C_m -> G, by enumerating every vertex sequence.
inline std::size_t count_cycle_homs(const Graph& g, std::size_t m) {
  auto a = adjacency(g);
  std::size_t n = g.size(), total = 0, count = 1;
  for (std::size_t i = 0; i < m; ++i) count *= n;
  std::vector<Vertex> f(m);
  for (std::size_t code = 0; code < count; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < m; ++i) f[i] = static_cast<Vertex>(c % n), c /= n;
    bool ok = true;
    for (std::size_t i = 0; i < m && ok; ++i) ok = a[f[i]][f[(i + 1) % m]];
    total += ok;
  }
  return total;
}

/// Trace of A^m: closed walks of length m, which equals count_cycle_homs.
inline std::size_t trace_power(const Graph& g, std::size_t m) {
  const std::size_t n = g.size();
  std::vector<std::vector<std::size_t>> p(n, std::vector<std::size_t>(n, 0)), a = p;
  for (auto [u, v] : g.edges()) a[u][v] = a[v][u] = 1;
  for (std::size_t i = 0; i < n; ++i) p[i][i] = 1;
  for (std::size_t k = 0; k < m; ++k) {
    std::vector<std::vector<std::size_t>> q(n, std::vector<std::size_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l) q[i][j] += p[i][l] * a[l][j];
    p = q;
  }
  std::size_t t = 0;
  for (std::size_t i = 0; i < n; ++i) t += p[i][i];
  return t;
}

/// Ranks over Q of an integer matrix, by fraction-free elimination on doubles
/// (the matrices in tests are tiny and entries small).
inline std::size_t rank_q(std::vector<std::vector<double>> m) {
  std::size_t r = 0;
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    for (std::size_t i = r; i < rows; ++i)
      if (std::abs(m[i][c]) > std::abs(m[piv][c])) piv = i;
    if (std::abs(m[piv][c]) < 1e-9) continue;
    std::swap(m[piv], m[r]);
    for (std::size_t i = 0; i < rows; ++i)
      if (i != r) {
        double f = m[i][c] / m[r][c];
        for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
      }
    ++r;
  }
  return r;
}

/// Rational Betti numbers of a simplicial complex given by all its faces,
/// via boundary-matrix ranks.
inline std::vector<std::size_t> betti_q(const std::set<std::vector<Vertex>>& faces, std::size_t max_dim) {
  std::vector<std::vector<std::vector<Vertex>>> by_dim(max_dim + 2);
  for (const auto& f : faces)
    if (!f.empty() && f.size() - 1 <= max_dim + 1) by_dim[f.size() - 1].push_back(f);
  auto boundary_rank = [&](std::size_t k) -> std::size_t {  // d_k : C_k -> C_{k-1}
    if (k == 0 || by_dim[k].empty() || by_dim[k - 1].empty()) return 0;
    const auto& lo = by_dim[k - 1];
    std::vector<std::vector<double>> m(lo.size(), std::vector<double>(by_dim[k].size(), 0));
    for (std::size_t j = 0; j < by_dim[k].size(); ++j) {
      const auto& s = by_dim[k][j];
      for (std::size_t i = 0; i < s.size(); ++i) {
        auto t = s;
        t.erase(t.begin() + static_cast<long>(i));
        auto row = std::lower_bound(lo.begin(), lo.end(), t) - lo.begin();
        m[row][j] = (i % 2) ? -1 : 1;
      }
    }
    return rank_q(m);
  };
  std::vector<std::size_t> b;
  for (std::size_t k = 0; k <= max_dim; ++k) b.push_back(by_dim[k].size() - boundary_rank(k) - boundary_rank(k + 1));
  return b;
}

/// All faces of the complex spanned by the given facets.
inline std::set<std::vector<Vertex>> all_faces(const std::vector<std::vector<Vertex>>& facets) {
  std::set<std::vector<Vertex>> out;
  for (auto f : facets) {
    std::sort(f.begin(), f.end());
    for (std::size_t mask = 1; mask < (std::size_t{1} << f.size()); ++mask) {
      std::vector<Vertex> s;
      for (std::size_t i = 0; i < f.size(); ++i)
        if (mask >> i & 1) s.push_back(f[i]);
      out.insert(s);
    }
  }
  return out;
}

}  // namespace oracle
