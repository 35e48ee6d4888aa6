#pragma once

// Integral homology of finite simplicial complexes.
//
// Boundary matrices are reduced by sparse elimination on unit pivots; what
// is left is handed to the dense Smith normal form. Optionally the complex
// is first shrunk by elementary collapses.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "boxloop/complex.hpp"
#include "boxloop/smith.hpp"

namespace boxloop {

/// Homology in dimensions 0..max_dim. `betti[0]` is the unreduced rank
/// (the number of components).
struct HomologySummary {
  std::vector<std::size_t> betti;
  std::vector<std::vector<Integer>> torsion;  // invariant factors > 1, divisibility chain

  std::size_t components() const { return betti.empty() ? 0 : betti[0]; }
  std::size_t reduced_betti(std::size_t k) const {
    if (k >= betti.size()) return 0;
    return k == 0 ? (betti[0] ? betti[0] - 1 : 0) : betti[k];
  }
  bool operator==(const HomologySummary&) const = default;

  /// One line per dimension: `H_k: Z^b [+ Z/d ...]`; a trivial group is `0`.
  std::string to_string() const {
    std::ostringstream out;
    for (std::size_t k = 0; k < betti.size(); ++k) out << "H_" << k << ": " << group_string(k) << "\n";
    return out.str();
  }

  std::string group_string(std::size_t k) const {
    std::ostringstream out;
    bool any = false;
    if (betti[k] == 1) {
      out << "Z";
      any = true;
    } else if (betti[k] > 1) {
      out << "Z^" << betti[k];
      any = true;
    }
    for (const auto& d : torsion[k]) {
      if (any) out << " + ";
      out << "Z/" << d;
      any = true;
    }
    if (!any) out << "0";
    return out.str();
  }

  /// Compact single-line form, e.g. `Z,Z,0`.
  std::string compact() const {
    std::string out;
    for (std::size_t k = 0; k < betti.size(); ++k) {
      if (k) out += ",";
      auto g = group_string(k);
      g.erase(std::remove(g.begin(), g.end(), ' '), g.end());
      out += g;
    }
    return out;
  }
};

struct RankTorsion {
  std::size_t rank = 0;
  std::vector<Integer> torsion;  // invariant factors > 1
};

/// Sparse integer matrix by columns; entries (row, value) sorted by row.
struct SparseMatrix {
  std::size_t rows = 0;
  std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> columns;
};

namespace detail {

inline bool checked_fma(std::int64_t a, std::int64_t k, std::int64_t b, std::int64_t& out) {
  // out = a + k*b
  __int128 r = static_cast<__int128>(a) + static_cast<__int128>(k) * b;
  if (r > std::numeric_limits<std::int64_t>::max() || r < std::numeric_limits<std::int64_t>::min()) return false;
  out = static_cast<std::int64_t>(r);
  return true;
}

inline void finish_dense(const SparseMatrix& m, const std::vector<bool>& col_alive, RankTorsion& res) {
  std::vector<std::uint32_t> cols;
  std::set<std::uint32_t> rowset;
  for (std::uint32_t c = 0; c < m.columns.size(); ++c) {
    if (!col_alive[c] || m.columns[c].empty()) continue;
    cols.push_back(c);
    for (auto& [r, v] : m.columns[c]) rowset.insert(r);
  }
  if (cols.empty()) return;
  std::vector<std::uint32_t> rows(rowset.begin(), rowset.end());
  IntegerMatrix dense(rows.size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (auto& [r, v] : m.columns[cols[j]]) {
      auto i = std::lower_bound(rows.begin(), rows.end(), r) - rows.begin();
      dense(i, j) = v;
    }
  for (auto& d : invariant_factors(std::move(dense))) {
    ++res.rank;
    if (d > 1) res.torsion.push_back(d);
  }
}

}  // namespace detail

/// Rank and invariant factors (> 1) of a sparse integer matrix.
inline RankTorsion rank_and_torsion(SparseMatrix m) {
  RankTorsion res;
  const std::size_t ncols = m.columns.size();
  std::vector<std::vector<std::uint32_t>> row_cols(m.rows);
  for (std::uint32_t c = 0; c < ncols; ++c)
    for (auto& [r, v] : m.columns[c]) row_cols[r].push_back(c);
  std::vector<bool> col_alive(ncols, true);
  auto entry = [&](std::uint32_t c, std::uint32_t r) -> std::int64_t {
    auto& col = m.columns[c];
    auto it = std::lower_bound(col.begin(), col.end(), std::pair<std::uint32_t, std::int64_t>{r, std::numeric_limits<std::int64_t>::min()});
    return (it != col.end() && it->first == r) ? it->second : 0;
  };
  bool overflow = false;
  bool progress = true;
  while (progress && !overflow) {
    progress = false;
    std::vector<std::uint32_t> order;
    for (std::uint32_t c = 0; c < ncols; ++c)
      if (col_alive[c] && !m.columns[c].empty()) order.push_back(c);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return m.columns[a].size() < m.columns[b].size(); });
    for (std::uint32_t c : order) {
      if (!col_alive[c] || m.columns[c].empty()) continue;
      // Unit pivot in this column with the sparsest row.
      std::int64_t pv = 0;
      std::uint32_t pr = 0;
      std::size_t best = std::numeric_limits<std::size_t>::max();
      for (auto& [r, v] : m.columns[c])
        if ((v == 1 || v == -1) && row_cols[r].size() < best) {
          best = row_cols[r].size();
          pr = r;
          pv = v;
        }
      if (pv == 0) continue;
      // Clear row pr from every other column: col' -= (a / pv) * col.
      const auto pivot_col = m.columns[c];
      std::vector<std::uint32_t> others;
      for (std::uint32_t c2 : row_cols[pr])
        if (c2 != c && col_alive[c2]) others.push_back(c2);
      std::sort(others.begin(), others.end());
      others.erase(std::unique(others.begin(), others.end()), others.end());
      for (std::uint32_t c2 : others) {
        std::int64_t a = entry(c2, pr);
        if (a == 0) continue;
        std::int64_t k = -a * pv;  // pv = +-1, so a / pv = a * pv
        auto& col = m.columns[c2];
        std::vector<std::pair<std::uint32_t, std::int64_t>> merged;
        merged.reserve(col.size() + pivot_col.size());
        std::size_t i = 0, j = 0;
        while (i < col.size() || j < pivot_col.size()) {
          if (j == pivot_col.size() || (i < col.size() && col[i].first < pivot_col[j].first)) {
            merged.push_back(col[i++]);
          } else if (i == col.size() || pivot_col[j].first < col[i].first) {
            std::int64_t val;
            if (!detail::checked_fma(0, k, pivot_col[j].second, val)) overflow = true;
            merged.emplace_back(pivot_col[j].first, val);
            row_cols[pivot_col[j].first].push_back(c2);
            ++j;
          } else {
            std::int64_t val;
            if (!detail::checked_fma(col[i].second, k, pivot_col[j].second, val)) overflow = true;
            if (val != 0) merged.emplace_back(col[i].first, val);
            ++i;
            ++j;
          }
        }
        col = std::move(merged);
        if (overflow) break;
      }
      if (overflow) break;
      col_alive[c] = false;
      m.columns[c].clear();
      row_cols[pr].clear();
      ++res.rank;
      progress = true;
    }
    // Compact stale row indices.
    if (progress)
      for (auto& rc : row_cols) {
        std::sort(rc.begin(), rc.end());
        rc.erase(std::unique(rc.begin(), rc.end()), rc.end());
        rc.erase(std::remove_if(rc.begin(), rc.end(), [&](std::uint32_t c) { return !col_alive[c]; }), rc.end());
      }
  }
  if (overflow) throw SizeError("integer overflow in sparse elimination", std::numeric_limits<std::int64_t>::max());
  detail::finish_dense(m, col_alive, res);
  std::sort(res.torsion.begin(), res.torsion.end());
  return res;
}

/// Boundary of the k-simplices in terms of the (k-1)-simplices.
inline SparseMatrix boundary_matrix(const std::vector<Simplex>& lower, const std::vector<Simplex>& upper) {
  SparseMatrix m;
  m.rows = lower.size();
  m.columns.resize(upper.size());
  for (std::size_t c = 0; c < upper.size(); ++c) {
    const auto& s = upper[c];
    for (std::size_t i = 0; i < s.size(); ++i) {
      Simplex face = s;
      face.erase(face.begin() + i);
      auto it = std::lower_bound(lower.begin(), lower.end(), face);
      m.columns[c].emplace_back(static_cast<std::uint32_t>(it - lower.begin()), (i % 2) ? -1 : 1);
    }
    std::sort(m.columns[c].begin(), m.columns[c].end());
  }
  return m;
}

// ---------------------------------------------------------------------------
// Elementary collapses

/// Remove free pairs (a face contained in exactly one other simplex, which
/// is then maximal) until none is left, smallest free face first. The result
/// is a simple-homotopy equivalent subcomplex.
inline SimplicialComplex collapse(const SimplicialComplex& k, std::size_t cap = 5'000'000) {
  auto layers = k.faces_by_dim(1 << 20, cap);
  const int top = static_cast<int>(layers.size()) - 1;
  if (top <= 0) return k;
  // alive flags and coface counts (dimension + 1 only)
  std::vector<std::vector<bool>> alive(layers.size());
  std::vector<std::vector<std::uint32_t>> cofaces(layers.size());
  for (int d = 0; d <= top; ++d) {
    alive[d].assign(layers[d].size(), true);
    cofaces[d].assign(layers[d].size(), 0);
  }
  auto index_of = [&](int d, const Simplex& s) {
    return static_cast<std::uint32_t>(std::lower_bound(layers[d].begin(), layers[d].end(), s) - layers[d].begin());
  };
  for (int d = 1; d <= top; ++d)
    for (const auto& s : layers[d])
      for (std::size_t i = 0; i < s.size(); ++i) {
        Simplex f = s;
        f.erase(f.begin() + i);
        ++cofaces[d - 1][index_of(d - 1, f)];
      }
  // The unique live coface of a face with coface count 1.
  auto unique_coface = [&](int d, std::uint32_t idx, std::uint32_t& out) {
    const Simplex& s = layers[d][idx];
    std::vector<Vertex> candidates;
    // Search cofaces among the live (d+1)-simplices containing s: scan
    // superset candidates by inserting each vertex that appears in some
    // neighbor. Done via the facet list for locality.
    for (const auto& f : k.facets()) {
      if (!std::includes(f.begin(), f.end(), s.begin(), s.end())) continue;
      for (Vertex v : f)
        if (!std::binary_search(s.begin(), s.end(), v)) candidates.push_back(v);
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (Vertex v : candidates) {
      Simplex t = s;
      t.insert(std::upper_bound(t.begin(), t.end(), v), v);
      auto j = index_of(d + 1, t);
      if (j < layers[d + 1].size() && layers[d + 1][j] == t && alive[d + 1][j]) {
        out = j;
        return true;
      }
    }
    return false;
  };
  std::set<std::pair<int, std::uint32_t>> queue;
  for (int d = 0; d < top; ++d)
    for (std::uint32_t i = 0; i < layers[d].size(); ++i)
      if (cofaces[d][i] == 1) queue.emplace(d, i);
  while (!queue.empty()) {
    auto [d, i] = *queue.begin();
    queue.erase(queue.begin());
    if (!alive[d][i] || cofaces[d][i] != 1) continue;
    std::uint32_t j;
    if (!unique_coface(d, i, j)) continue;
    if (d + 1 < top && cofaces[d + 1][j] != 0) continue;  // coface must be maximal
    alive[d][i] = false;
    alive[d + 1][j] = false;
    // Faces of the removed pair lose a coface.
    const Simplex& t = layers[d + 1][j];
    for (std::size_t r = 0; r < t.size(); ++r) {
      Simplex f = t;
      f.erase(f.begin() + r);
      auto fi = index_of(d, f);
      --cofaces[d][fi];
      if (alive[d][fi] && cofaces[d][fi] == 1) queue.emplace(d, fi);
    }
    if (d > 0) {
      const Simplex& s = layers[d][i];
      for (std::size_t r = 0; r < s.size(); ++r) {
        Simplex f = s;
        f.erase(f.begin() + r);
        auto fi = index_of(d - 1, f);
        --cofaces[d - 1][fi];
        if (alive[d - 1][fi] && cofaces[d - 1][fi] == 1) queue.emplace(d - 1, fi);
      }
    }
  }
  // Remaining maximal simplices become the new facets.
  std::vector<Simplex> facets;
  std::vector<bool> used(k.vertex_count(), false);
  for (int d = top; d >= 0; --d)
    for (std::uint32_t i = 0; i < layers[d].size(); ++i)
      if (alive[d][i] && (d == top || cofaces[d][i] == 0)) {
        facets.push_back(layers[d][i]);
        for (Vertex v : layers[d][i]) used[v] = true;
      }
  std::vector<Vertex> keep;
  for (Vertex v = 0; v < k.vertex_count(); ++v)
    if (used[v]) keep.push_back(v);
  std::vector<Vertex> pos(k.vertex_count(), 0);
  std::vector<std::string> names;
  for (Vertex i = 0; i < keep.size(); ++i) {
    pos[keep[i]] = i;
    names.push_back(k.name(keep[i]));
  }
  for (auto& f : facets)
    for (auto& v : f) v = pos[v];
  return SimplicialComplex(std::move(names), std::move(facets), true);
}

struct HomologyOptions {
  bool collapse_first = true;
  std::size_t simplex_cap = 5'000'000;
};

/// Upper bound on the number of simplices: the sum of 2^|facet|.
inline std::size_t full_size_estimate(const SimplicialComplex& k) {
  std::size_t total = 0;
  for (const auto& f : k.facets()) {
    if (f.size() >= 60) return std::numeric_limits<std::size_t>::max();
    total += std::size_t{1} << f.size();
    if (total > (std::size_t{1} << 60)) return total;
  }
  return total;
}

/// Integral homology in dimensions 0..max_dim. The collapse pre-pass runs
/// only when the whole complex is small enough to enumerate.
inline HomologySummary homology(const SimplicialComplex& input, int max_dim, HomologyOptions opt = {}) {
  if (max_dim < 0) throw InputError("max_dim must be non-negative");
  SimplicialComplex reduced;
  const SimplicialComplex* k = &input;
  if (opt.collapse_first && input.dimension() > 0 && full_size_estimate(input) <= opt.simplex_cap) {
    reduced = collapse(input, opt.simplex_cap);
    k = &reduced;
  }
  auto layers = k->faces_by_dim(max_dim + 1, opt.simplex_cap);
  const std::size_t dims = static_cast<std::size_t>(max_dim) + 1;
  std::vector<RankTorsion> bd(dims + 1);  // bd[d] describes the boundary C_d -> C_{d-1}
  for (std::size_t d = 1; d <= dims && d < layers.size(); ++d)
    bd[d] = rank_and_torsion(boundary_matrix(layers[d - 1], layers[d]));
  HomologySummary h;
  h.betti.assign(dims, 0);
  h.torsion.assign(dims, {});
  for (std::size_t d = 0; d < dims; ++d) {
    std::size_t n = d < layers.size() ? layers[d].size() : 0;
    std::size_t r_in = d + 1 <= dims ? bd[d + 1].rank : 0;
    std::size_t r_out = d >= 1 ? bd[d].rank : 0;
    h.betti[d] = n - r_out - r_in;
    if (d + 1 <= dims) h.torsion[d] = bd[d + 1].torsion;
  }
  return h;
}

}  // namespace boxloop
