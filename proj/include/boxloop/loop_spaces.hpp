#pragma once

// Truncated loop-space graphs: homs from long intervals L_{-2n,2n+1} or from
// cycles into a target, their connecting maps, and stabilization reports.

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "boxloop/complexes.hpp"
#include "boxloop/graph.hpp"
#include "boxloop/homology.hpp"
#include "boxloop/poset.hpp"

namespace boxloop {

inline constexpr std::size_t default_level_cap = 2'000'000;

/// How the last pair of a walk on L_{-2n,2n+1} relates to the first.
enum class EndCondition { open, pinned, free_loop, twisted };

/// A level of a loop tower: homs into a target, stored as value sequences
/// in lexicographic order. Every vertex is looped; two walks are adjacent
/// when each value is adjacent to the other walk's neighbouring values.
class WalkLevel {
 public:
  WalkLevel() = default;
  WalkLevel(const Graph* target, std::size_t length, bool cyclic) : target_(target), length_(length), cyclic_(cyclic) {}

  std::size_t size() const noexcept { return length_ ? values_.size() / length_ : 0; }
  std::size_t length() const noexcept { return length_; }
  bool cyclic() const noexcept { return cyclic_; }
  const Graph& target() const { return *target_; }

  std::span<const Vertex> walk(std::size_t i) const { return {values_.data() + i * length_, length_}; }

  std::optional<std::uint32_t> find(std::span<const Vertex> w) const {
    if (w.size() != length_) return std::nullopt;
    auto it = index_.find(key(w));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::string walk_name(std::size_t i) const {
    std::string s = "[";
    auto w = walk(i);
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (k) s += ",";
      s += target_->name(w[k]);
    }
    return s + "]";
  }

  /// Calls fn(j) for every walk j adjacent to walk i (including i itself).
  void for_each_neighbor(std::size_t i, const std::function<void(std::uint32_t)>& fn) const {
    const Graph& g = *target_;
    auto w = walk(i);
    const std::size_t n = length_;
    std::vector<Vertex> cur(n);
    auto allowed = [&](std::size_t p, Vertex c) {
      auto adj = [&](Vertex a) { return g.adjacent(a, c); };
      if (p > 0 && !adj(w[p - 1])) return false;
      if (p + 1 < n && !adj(w[p + 1])) return false;
      if (cyclic_) {
        if (p == 0 && !adj(w[n - 1])) return false;
        if (p == n - 1 && !adj(w[0])) return false;
      }
      if (p > 0 && !g.adjacent(cur[p - 1], c)) return false;
      if (cyclic_ && p == n - 1 && !g.adjacent(cur[0], c)) return false;
      return true;
    };
    std::function<void(std::size_t)> rec = [&](std::size_t p) {
      if (p == n) {
        auto it = index_.find(key(cur));
        if (it != index_.end()) fn(it->second);
        return;
      }
      // Candidates: neighbours of an adjacent value of w.
      Vertex anchor = p > 0 ? w[p - 1] : w[p + 1];
      for (Vertex c : g.neighbors(anchor)) {
        if (!allowed(p, c)) continue;
        cur[p] = c;
        rec(p + 1);
      }
    };
    rec(0);
  }

  /// Component label per walk, labels numbered by smallest member.
  std::vector<std::uint32_t> components(std::size_t* count = nullptr) const {
    const std::size_t n = size();
    std::vector<std::uint32_t> parent(n);
    for (std::uint32_t i = 0; i < n; ++i) parent[i] = i;
    auto root = [&](std::uint32_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    auto unite = [&](std::uint32_t i, std::uint32_t j) {
      auto a = root(i), b = root(j);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    };
    if (local_moves_connect_) {
      // Two adjacent walks are joined by walks that change one position at
      // a time, left to right; those single changes suffice.
      std::vector<Vertex> cur(length_);
      const Graph& g = *target_;
      for (std::uint32_t i = 0; i < n; ++i) {
        auto w = walk(i);
        std::copy(w.begin(), w.end(), cur.begin());
        for (std::size_t p = 0; p < length_; ++p) {
          bool has_left = p > 0 || cyclic_, has_right = p + 1 < length_ || cyclic_;
          Vertex left = p > 0 ? w[p - 1] : w[length_ - 1];
          Vertex right = p + 1 < length_ ? w[p + 1] : w[0];
          Vertex anchor = has_left ? left : right;
          for (Vertex c : g.neighbors(anchor)) {
            if (c <= w[p] || (has_right && !g.adjacent(c, right))) continue;
            cur[p] = c;
            auto it = index_.find(key(cur));
            if (it != index_.end()) unite(i, it->second);
          }
          cur[p] = w[p];
        }
      }
    } else {
      for (std::uint32_t i = 0; i < n; ++i)
        for_each_neighbor(i, [&](std::uint32_t j) {
          if (j > i) unite(i, j);
        });
    }
    std::vector<std::uint32_t> label(n);
    std::unordered_map<std::uint32_t, std::uint32_t> ids;
    for (std::uint32_t i = 0; i < n; ++i) {
      auto r = root(i);
      auto [it, fresh] = ids.emplace(r, static_cast<std::uint32_t>(ids.size()));
      label[i] = it->second;
    }
    if (count) *count = ids.size();
    return label;
  }

  /// The level as a graph (every vertex looped), optionally restricted.
  Graph graph(std::span<const std::uint32_t> keep) const {
    std::vector<std::uint32_t> pos(size(), static_cast<std::uint32_t>(-1));
    std::vector<std::string> names;
    for (std::uint32_t k = 0; k < keep.size(); ++k) {
      pos[keep[k]] = k;
      names.push_back(walk_name(keep[k]));
    }
    std::vector<Edge> edges;
    for (std::uint32_t k = 0; k < keep.size(); ++k)
      for_each_neighbor(keep[k], [&](std::uint32_t j) {
        if (pos[j] != static_cast<std::uint32_t>(-1) && pos[j] >= k) edges.emplace_back(k, pos[j]);
      });
    return Graph(std::move(names), edges);
  }
  Graph graph() const {
    std::vector<std::uint32_t> all(size());
    for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
    return graph(all);
  }

  /// Declares that walks differing in one position already generate the
  /// components (true when every left-to-right interpolation of two
  /// adjacent walks stays in the level).
  void set_local_moves_connect(bool v) { local_moves_connect_ = v; }

  void push(std::span<const Vertex> w) {
    index_.emplace(key(w), static_cast<std::uint32_t>(size()));
    values_.insert(values_.end(), w.begin(), w.end());
  }

 private:
  static std::string key(std::span<const Vertex> w) {
    std::string k(w.size() * sizeof(Vertex), '\0');
    std::memcpy(k.data(), w.data(), k.size());
    return k;
  }

  const Graph* target_ = nullptr;
  std::size_t length_ = 0;
  bool cyclic_ = false;
  bool local_moves_connect_ = false;
  std::vector<Vertex> values_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

namespace detail {

/// reach[k][u] is the bitset of vertices reachable from u by a walk of length k.
class ReachTable {
 public:
  ReachTable(const Graph& g, std::size_t max_len) : n_(g.size()), words_((g.size() + 63) / 64) {
    table_.resize(max_len + 1, std::vector<std::uint64_t>(n_ * words_, 0));
    for (std::size_t u = 0; u < n_; ++u) set(0, u, u);
    for (std::size_t k = 1; k <= max_len; ++k)
      for (std::size_t u = 0; u < n_; ++u)
        for (Vertex v : g.neighbors(static_cast<Vertex>(u)))
          for (std::size_t w = 0; w < words_; ++w) table_[k][u * words_ + w] |= table_[k - 1][v * words_ + w];
  }
  bool reach(std::size_t k, Vertex u, Vertex t) const {
    return k < table_.size() && (table_[k][u * words_ + t / 64] >> (t % 64)) & 1u;
  }

 private:
  void set(std::size_t k, std::size_t u, std::size_t t) { table_[k][u * words_ + t / 64] |= std::uint64_t{1} << (t % 64); }
  std::size_t n_, words_;
  std::vector<std::vector<std::uint64_t>> table_;
};

inline void check_cap(const WalkLevel& level, std::size_t cap) {
  if (level.size() > cap) throw SizeError("level exceeds the vertex cap", cap, level.size());
}

}  // namespace detail

/// Basepoint: a bigraph hom K2 -> X, given by the images of 0 and 1.
struct BasePair {
  Vertex x0 = 0, x1 = 0;
};

inline void validate_base(const Bigraph& x, BasePair b) {
  if (b.x0 >= x.size() || b.x1 >= x.size() || x.color(b.x0) != 0 || x.color(b.x1) != 1 || !x.graph().adjacent(b.x0, b.x1))
    throw InputError("basepoint is not a bigraph hom K2 -> X");
}

/// Homs L_{-2n,2n+1} -> X under an end condition. Position i holds the
/// value at -2n+i and has colour i mod 2.
inline WalkLevel walk_level(const Bigraph& x, std::size_t n, EndCondition end, BasePair base = {},
                            const OddInvolution* alpha = nullptr, std::size_t cap = default_level_cap) {
  if (end == EndCondition::pinned) validate_base(x, base);
  if (end == EndCondition::twisted) {
    if (!alpha) throw InputError("twisted level needs an odd involution");
    alpha->validate(x);
  }
  const Graph& g = x.graph();
  const std::size_t len = 4 * n + 2;
  WalkLevel level(&g, len, false);
  level.set_local_moves_connect(end == EndCondition::open || end == EndCondition::pinned);
  detail::ReachTable reach(g, len);
  std::vector<Vertex> cur(len);
  auto ends = [&](Vertex a, Vertex b, Vertex& t0, Vertex& t1) {
    switch (end) {
      case EndCondition::pinned: t0 = base.x0; t1 = base.x1; return true;
      case EndCondition::free_loop: t0 = a; t1 = b; return true;
      case EndCondition::twisted: t0 = alpha->map[b]; t1 = alpha->map[a]; return true;
      default: return false;
    }
  };
  Vertex t0 = 0, t1 = 0;
  bool fixed_end = false;
  std::function<void(std::size_t)> rec = [&](std::size_t p) {
    if (fixed_end && p == len - 2) {
      if (!g.adjacent(cur[p - 1], t0)) return;
      cur[len - 2] = t0;
      cur[len - 1] = t1;
      level.push(cur);
      detail::check_cap(level, cap);
      return;
    }
    if (p == len) {
      level.push(cur);
      detail::check_cap(level, cap);
      return;
    }
    for (Vertex c : g.neighbors(cur[p - 1])) {
      if (fixed_end && !reach.reach(len - 2 - p, c, t0)) continue;
      cur[p] = c;
      rec(p + 1);
    }
  };
  for (Vertex a = 0; a < g.size(); ++a) {
    if (x.color(a) != 0) continue;
    if (end == EndCondition::pinned && a != base.x0) continue;
    for (Vertex b : g.neighbors(a)) {
      if (end == EndCondition::pinned && b != base.x1) continue;
      cur[0] = a;
      cur[1] = b;
      fixed_end = ends(a, b, t0, t1);
      if (len == 2) {
        if (!fixed_end || (t0 == a && t1 == b)) {
          level.push(cur);
          detail::check_cap(level, cap);
        }
        continue;
      }
      rec(2);
    }
  }
  return level;
}

/// All homs L_{-2n,2n+1} -> X (the reflexive part of the exponential bigraph).
inline WalkLevel path_level(const Bigraph& x, std::size_t n, std::size_t cap = default_level_cap) {
  return walk_level(x, n, EndCondition::open, {}, nullptr, cap);
}

/// Loops pinned to the basepoint at both ends.
inline WalkLevel omega_level(const Bigraph& x, BasePair base, std::size_t n, std::size_t cap = default_level_cap) {
  return walk_level(x, n, EndCondition::pinned, base, nullptr, cap);
}

/// Walks whose last pair repeats the first pair.
inline WalkLevel free_loop_level(const Bigraph& x, std::size_t n, std::size_t cap = default_level_cap) {
  return walk_level(x, n, EndCondition::free_loop, {}, nullptr, cap);
}

/// Walks whose last pair is (alpha(g1), alpha(g0)) for first pair (g0, g1).
inline WalkLevel twisted_loop_level(const Bigraph& x, const OddInvolution& alpha, std::size_t n,
                                    std::size_t cap = default_level_cap) {
  return walk_level(x, n, EndCondition::twisted, {}, &alpha, cap);
}

/// Homs C_m -> G, adjacent when f(i) ~ g(i+-1) for all i.
inline WalkLevel cycle_hom_level(const Graph& g, std::size_t m, std::size_t cap = default_level_cap) {
  if (m < 3) throw InputError("cycle length must be at least 3");
  WalkLevel level(&g, m, true);
  level.set_local_moves_connect(true);
  detail::ReachTable reach(g, m);
  std::vector<Vertex> cur(m);
  std::function<void(std::size_t)> rec = [&](std::size_t p) {
    if (p == m) {
      level.push(cur);
      detail::check_cap(level, cap);
      return;
    }
    for (Vertex c : g.neighbors(cur[p - 1])) {
      if (!reach.reach(m - p, c, cur[0])) continue;
      cur[p] = c;
      rec(p + 1);
    }
  };
  for (Vertex a = 0; a < g.size(); ++a) {
    cur[0] = a;
    rec(1);
  }
  return level;
}

/// Connector of the path-type towers: repeat the end pairs outward.
inline std::vector<Vertex> extend_ends(std::span<const Vertex> w) {
  const std::size_t n = w.size();
  std::vector<Vertex> out;
  out.reserve(n + 4);
  out.push_back(w[0]);
  out.push_back(w[1]);
  out.insert(out.end(), w.begin(), w.end());
  out.push_back(w[n - 2]);
  out.push_back(w[n - 1]);
  return out;
}

/// Connector of the cycle towers: precompose with C_{m+2} -> C_m, which is
/// the identity on 0..m (read mod m) and sends m+1 to m-1.
inline std::vector<Vertex> extend_cycle(std::span<const Vertex> f) {
  std::vector<Vertex> out(f.begin(), f.end());
  out.push_back(f[0]);
  out.push_back(f[f.size() - 1]);
  return out;
}

/// Index of the image of every walk of `from` in `to` under `connect`.
inline std::vector<std::uint32_t> connector_map(const WalkLevel& from, const WalkLevel& to,
                                                const std::function<std::vector<Vertex>(std::span<const Vertex>)>& connect) {
  std::vector<std::uint32_t> out(from.size());
  for (std::size_t i = 0; i < from.size(); ++i) {
    auto img = to.find(connect(from.walk(i)));
    if (!img) throw InputError("connector image is not a vertex of the next level");
    out[i] = *img;
  }
  return out;
}

/// e_{-2n} and e_{+2n}: the first and last pair of each walk, as indices
/// into level 0.
struct EndpointMaps {
  std::vector<std::uint32_t> minus, plus;
};

inline EndpointMaps endpoint_maps(const WalkLevel& level, const WalkLevel& level0) {
  EndpointMaps e;
  const std::size_t n = level.length();
  for (std::size_t i = 0; i < level.size(); ++i) {
    auto w = level.walk(i);
    Vertex a[2] = {w[0], w[1]};
    Vertex b[2] = {w[n - 2], w[n - 1]};
    auto l = level0.find(a), r = level0.find(b);
    if (!l || !r) throw InputError("endpoint pair is not a level-0 vertex");
    e.minus.push_back(*l);
    e.plus.push_back(*r);
  }
  return e;
}

/// The involution w -> (i -> alpha(w[len-1-i])) induced by x -> 1-x on the
/// interval and alpha on the target; defined on path, free and twisted levels.
inline std::vector<std::uint32_t> reversal_action(const WalkLevel& level, const OddInvolution& alpha) {
  std::vector<std::uint32_t> out(level.size());
  const std::size_t n = level.length();
  std::vector<Vertex> img(n);
  for (std::size_t i = 0; i < level.size(); ++i) {
    auto w = level.walk(i);
    for (std::size_t k = 0; k < n; ++k) img[k] = alpha.map[w[n - 1 - k]];
    auto j = level.find(img);
    if (!j) throw InputError("level is not invariant under the involution");
    out[i] = *j;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Towers and stabilization

enum class TowerKind { path, omega, free_loop, twisted_loop, cycle_even, cycle_odd };

inline const char* to_string(TowerKind k) {
  switch (k) {
    case TowerKind::path: return "path";
    case TowerKind::omega: return "omega";
    case TowerKind::free_loop: return "free";
    case TowerKind::twisted_loop: return "twisted";
    case TowerKind::cycle_even: return "cycle-even";
    default: return "cycle-odd";
  }
}

struct Tower {
  TowerKind kind = TowerKind::path;
  std::size_t first_label = 0;  // level index k is reported as first_label + k
  std::function<WalkLevel(std::size_t)> level;
  std::function<std::vector<Vertex>(std::span<const Vertex>)> connect;
};

inline Tower omega_tower(const Bigraph& x, BasePair base, std::size_t cap = default_level_cap) {
  validate_base(x, base);
  return {TowerKind::omega, 0, [&x, base, cap](std::size_t k) { return omega_level(x, base, k, cap); }, extend_ends};
}

inline Tower free_loop_tower(const Bigraph& x, std::size_t cap = default_level_cap) {
  return {TowerKind::free_loop, 0, [&x, cap](std::size_t k) { return free_loop_level(x, k, cap); }, extend_ends};
}

inline Tower twisted_loop_tower(const Bigraph& x, const OddInvolution& alpha, std::size_t cap = default_level_cap) {
  alpha.validate(x);
  return {TowerKind::twisted_loop, 0,
          [&x, &alpha, cap](std::size_t k) { return twisted_loop_level(x, alpha, k, cap); }, extend_ends};
}

inline Tower path_tower(const Bigraph& x, std::size_t cap = default_level_cap) {
  return {TowerKind::path, 0, [&x, cap](std::size_t k) { return path_level(x, k, cap); }, extend_ends};
}

/// Hom(C_{2r}, G) for r >= 2 (even) or Hom(C_{2r+1}, G) for r >= 1 (odd),
/// reported at level r.
inline Tower cycle_tower(const Graph& g, bool even, std::size_t cap = default_level_cap) {
  std::size_t r0 = even ? 2 : 1;
  return {even ? TowerKind::cycle_even : TowerKind::cycle_odd, r0,
          [&g, even, r0, cap](std::size_t k) {
            std::size_t r = r0 + k;
            return cycle_hom_level(g, even ? 2 * r : 2 * r + 1, cap);
          },
          extend_cycle};
}

struct ComponentReport {
  std::size_t size = 0;
  std::optional<HomologySummary> homology;  // absent when d = 0 or over budget
  std::uint32_t image = 0;                  // component at the next level, when computed
  bool stable = false;
};

struct LevelReport {
  std::size_t label = 0;
  std::size_t vertices = 0;
  std::vector<ComponentReport> components;
};

struct StabilizationOptions {
  std::size_t max_level = 6;
  std::size_t window = 2;
  int dim = 2;
  std::size_t homology_vertex_cap = 4000;  // larger components get no homology
  bool stop_when_stable = true;
};

struct StabilizationReport {
  TowerKind kind = TowerKind::path;
  std::vector<LevelReport> levels;
  std::optional<std::size_t> stable_at;  // label of the first stable level
  StabilizationOptions options;
  std::optional<std::string> budget_note;

  std::string homology_text(const ComponentReport& c) const {
    if (options.dim == 0) return "Z";
    if (!c.homology) return "?";
    return c.homology->compact();
  }

  std::string to_string() const {
    std::ostringstream out;
    for (const auto& l : levels) {
      out << "level " << l.label << ": components=" << l.components.size();
      for (std::size_t i = 0; i < l.components.size(); ++i) out << "; H(comp " << i << ")=" << homology_text(l.components[i]);
      std::string stable;
      for (std::size_t i = 0; i < l.components.size(); ++i)
        if (l.components[i].stable) stable += (stable.empty() ? "" : ",") + std::to_string(i);
      if (!stable.empty()) out << "; stable=" << stable;
      out << "\n";
    }
    if (stable_at) {
      out << "verdict: stable@" << *stable_at << "\n";
    } else {
      std::size_t budget = levels.empty() ? 0 : levels.back().label;
      out << "verdict: not-stable(budget=" << budget << ")\n";
    }
    return out.str();
  }
};

/// Homology of C(G), computed after folding the reflexive part of G (a fold
/// of a reflexive graph is a strong collapse of its clique complex).
inline HomologySummary clique_homology(const Graph& g, int dim) {
  auto looped = looped_vertices(g);
  Graph reflexive = looped.size() == g.size() ? g : induced_subgraph(g, looped);
  auto core = fold_reduce(reflexive).core;
  return homology(clique_complex(core), dim);
}

/// Homology of the clique complex of one component of a level.
inline std::optional<HomologySummary> component_homology(const WalkLevel& level, std::span<const std::uint32_t> members,
                                                         int dim, std::size_t vertex_cap) {
  if (members.size() > vertex_cap) return std::nullopt;
  try {
    return clique_homology(level.graph(members), dim);
  } catch (const SizeError&) {
    return std::nullopt;
  }
}

/// Builds levels 0..max_level (fewer when a stable level is found), maps
/// components along the connectors and marks a component stable when, for
/// `window` consecutive connectors, its image is never merged with another
/// component and keeps its homology. The tower is stable at a level when all
/// its components are stable and the window's component maps are bijective.
inline StabilizationReport stabilize(const Tower& tower, StabilizationOptions opt = {}) {
  StabilizationReport rep;
  rep.kind = tower.kind;
  rep.options = opt;
  struct Built {
    WalkLevel level;
    std::vector<std::uint32_t> label;
    std::size_t count = 0;
  };
  std::vector<Built> built;
  std::vector<std::vector<std::uint32_t>> comp_image;  // comp_image[k][c]: component at k+1
  auto add_level = [&](std::size_t k) {
    Built b{tower.level(k), {}, 0};
    b.label = b.level.components(&b.count);
    LevelReport lr;
    lr.label = tower.first_label + k;
    lr.vertices = b.level.size();
    lr.components.resize(b.count);
    std::vector<std::vector<std::uint32_t>> members(b.count);
    for (std::uint32_t i = 0; i < b.level.size(); ++i) members[b.label[i]].push_back(i);
    for (std::size_t c = 0; c < b.count; ++c) {
      lr.components[c].size = members[c].size();
      if (opt.dim > 0) lr.components[c].homology = component_homology(b.level, members[c], opt.dim, opt.homology_vertex_cap);
    }
    rep.levels.push_back(std::move(lr));
    built.push_back(std::move(b));
    if (k > 0) {
      const auto& prev = built[k - 1];
      const auto& next = built[k];
      auto img = connector_map(prev.level, next.level, tower.connect);
      std::vector<std::uint32_t> ci(prev.count, static_cast<std::uint32_t>(-1));
      for (std::size_t i = 0; i < prev.level.size(); ++i) {
        auto c = prev.label[i];
        auto d = next.label[img[i]];
        if (ci[c] == static_cast<std::uint32_t>(-1)) ci[c] = d;
        else if (ci[c] != d) throw InputError("connector does not respect components");
      }
      for (std::size_t c = 0; c < prev.count; ++c) rep.levels[k - 1].components[c].image = ci[c];
      comp_image.push_back(std::move(ci));
    }
  };
  auto same_homology = [&](const ComponentReport& a, const ComponentReport& b) {
    if (opt.dim == 0) return true;
    return a.homology && b.homology && *a.homology == *b.homology;
  };
  // Components at level k that are stable over connectors k..k+window-1.
  auto evaluate = [&](std::size_t k) {
    bool all = true;
    for (std::size_t c = 0; c < built[k].count; ++c) {
      bool ok = true;
      std::uint32_t cur = static_cast<std::uint32_t>(c);
      for (std::size_t s = k; s < k + opt.window && ok; ++s) {
        std::uint32_t nxt = comp_image[s][cur];
        std::size_t pre = std::count(comp_image[s].begin(), comp_image[s].end(), nxt);
        ok = pre == 1 && same_homology(rep.levels[s].components[cur], rep.levels[s + 1].components[nxt]);
        cur = nxt;
      }
      rep.levels[k].components[c].stable = ok;
      all = all && ok;
    }
    for (std::size_t s = k; s < k + opt.window && all; ++s) all = built[s].count == built[s + 1].count;
    return all;
  };
  for (std::size_t k = 0; k <= opt.max_level; ++k) {
    try {
      add_level(k);
    } catch (const SizeError& e) {
      rep.budget_note = e.what();
      break;
    }
    if (k >= opt.window) {
      std::size_t j = k - opt.window;
      if (evaluate(j) && !rep.stable_at) {
        rep.stable_at = tower.first_label + j;
        if (opt.stop_when_stable) break;
      }
    }
  }
  return rep;
}

}  // namespace boxloop
