#pragma once

// Finite posets stored as Hasse diagrams, order-preserving maps, Z2-actions,
// beat-point (core) reduction and an exact poset isomorphism search.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "boxloop/errors.hpp"

namespace boxloop {

using Element = std::uint32_t;

/// Compare strings treating digit runs as numbers ("x2" < "x10").
inline bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    bool da = std::isdigit(static_cast<unsigned char>(a[i])), db = std::isdigit(static_cast<unsigned char>(b[j]));
    if (da && db) {
      std::size_t i2 = i, j2 = j;
      while (i2 < a.size() && std::isdigit(static_cast<unsigned char>(a[i2]))) ++i2;
      while (j2 < b.size() && std::isdigit(static_cast<unsigned char>(b[j2]))) ++j2;
      std::string na = a.substr(i, i2 - i), nb = b.substr(j, j2 - j);
      auto strip = [](std::string& s) {
        auto p = s.find_first_not_of('0');
        s = p == std::string::npos ? "0" : s.substr(p);
      };
      strip(na);
      strip(nb);
      if (na.size() != nb.size()) return na.size() < nb.size();
      if (na != nb) return na < nb;
      i = i2;
      j = j2;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  if ((a.size() - i) != (b.size() - j)) return (a.size() - i) < (b.size() - j);
  return a < b;
}

/// A finite poset given by its cover relation. Elements are 0..size()-1.
class Poset {
 public:
  Poset() = default;

  /// `covers` are pairs (a, b) with a covered by b. Throws if the relation
  /// has a cycle or lists a pair that is implied by a longer chain.
  Poset(std::vector<std::string> names, std::vector<std::pair<Element, Element>> covers, bool validate = true)
      : names_(std::move(names)) {
    up_.resize(names_.size());
    down_.resize(names_.size());
    for (auto [a, b] : covers) {
      if (a >= names_.size() || b >= names_.size()) throw InputError("cover relation uses an unknown element");
      if (a == b) throw InputError("cover relation is not irreflexive");
      up_[a].push_back(b);
      down_[b].push_back(a);
    }
    for (auto& l : up_) {
      std::sort(l.begin(), l.end());
      l.erase(std::unique(l.begin(), l.end()), l.end());
    }
    for (auto& l : down_) {
      std::sort(l.begin(), l.end());
      l.erase(std::unique(l.begin(), l.end()), l.end());
    }
    if (validate) check_axioms();
  }

  /// Build from an explicit order relation (O(n^2) queries, O(n^3) checks).
  static Poset from_relation(std::vector<std::string> names, const std::function<bool(Element, Element)>& leq) {
    const auto n = static_cast<Element>(names.size());
    std::vector<std::vector<bool>> lt(n, std::vector<bool>(n, false));
    for (Element a = 0; a < n; ++a) {
      if (!leq(a, a)) throw InputError("relation is not reflexive");
      for (Element b = 0; b < n; ++b)
        if (a != b && leq(a, b)) {
          if (leq(b, a)) throw InputError("relation is not antisymmetric");
          lt[a][b] = true;
        }
    }
    for (Element a = 0; a < n; ++a)
      for (Element b = 0; b < n; ++b)
        if (lt[a][b])
          for (Element c = 0; c < n; ++c)
            if (lt[b][c] && !lt[a][c]) throw InputError("relation is not transitive");
    std::vector<std::pair<Element, Element>> covers;
    for (Element a = 0; a < n; ++a)
      for (Element b = 0; b < n; ++b) {
        if (!lt[a][b]) continue;
        bool cover = true;
        for (Element c = 0; c < n && cover; ++c)
          if (lt[a][c] && lt[c][b]) cover = false;
        if (cover) covers.emplace_back(a, b);
      }
    return Poset(std::move(names), std::move(covers), false);
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(Element e) const { return names_.at(e); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::span<const Element> upper_covers(Element e) const { return up_.at(e); }
  std::span<const Element> lower_covers(Element e) const { return down_.at(e); }

  std::vector<std::pair<Element, Element>> covers() const {
    std::vector<std::pair<Element, Element>> out;
    for (Element a = 0; a < size(); ++a)
      for (Element b : up_[a]) out.emplace_back(a, b);
    return out;
  }

  std::size_t cover_count() const {
    std::size_t n = 0;
    for (const auto& l : up_) n += l.size();
    return n;
  }

  /// Strictly greater elements, sorted.
  std::vector<Element> strict_up_set(Element e) const { return reach(e, up_); }
  /// Strictly smaller elements, sorted.
  std::vector<Element> strict_down_set(Element e) const { return reach(e, down_); }

  bool leq(Element a, Element b) const {
    if (a == b) return true;
    std::vector<Element> stack{a};
    std::vector<bool> seen(size(), false);
    while (!stack.empty()) {
      Element x = stack.back();
      stack.pop_back();
      for (Element y : up_[x]) {
        if (y == b) return true;
        if (!seen[y]) {
          seen[y] = true;
          stack.push_back(y);
        }
      }
    }
    return false;
  }

  std::vector<Element> minimal_elements() const {
    std::vector<Element> out;
    for (Element e = 0; e < size(); ++e)
      if (down_[e].empty()) out.push_back(e);
    return out;
  }

  bool operator==(const Poset& o) const { return names_ == o.names_ && up_ == o.up_; }

 private:
  static std::vector<Element> reach_impl(Element e, const std::vector<std::vector<Element>>& rel, std::size_t n) {
    std::vector<Element> out, stack{e};
    std::vector<bool> seen(n, false);
    seen[e] = true;
    while (!stack.empty()) {
      Element x = stack.back();
      stack.pop_back();
      for (Element y : rel[x])
        if (!seen[y]) {
          seen[y] = true;
          out.push_back(y);
          stack.push_back(y);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<Element> reach(Element e, const std::vector<std::vector<Element>>& rel) const {
    return reach_impl(e, rel, size());
  }

  void check_axioms() const {
    // Acyclicity (antisymmetry) by topological sort.
    std::vector<std::size_t> indeg(size());
    for (Element a = 0; a < size(); ++a) indeg[a] = down_[a].size();
    std::vector<Element> queue;
    for (Element a = 0; a < size(); ++a)
      if (!indeg[a]) queue.push_back(a);
    std::size_t done = 0;
    while (!queue.empty()) {
      Element a = queue.back();
      queue.pop_back();
      ++done;
      for (Element b : up_[a])
        if (--indeg[b] == 0) queue.push_back(b);
    }
    if (done != size()) throw InputError("cover relation has a cycle");
    // Every listed cover must be a genuine cover.
    for (Element a = 0; a < size(); ++a) {
      if (up_[a].size() < 2) continue;
      for (Element c : up_[a]) {
        auto above = reach(c, up_);
        for (Element b : up_[a])
          if (std::binary_search(above.begin(), above.end(), b))
            throw InputError("listed cover " + names_[a] + " < " + names_[b] + " is implied by a longer chain");
      }
    }
  }

  std::vector<std::string> names_;
  std::vector<std::vector<Element>> up_, down_;
};

/// Order-preserving map; `validate` checks monotonicity along covers.
struct PosetMap {
  const Poset* source = nullptr;
  const Poset* target = nullptr;
  std::vector<Element> map;

  Element operator()(Element e) const { return map.at(e); }

  void validate() const {
    if (!source || !target || map.size() != source->size()) throw InputError("poset map size mismatch");
    for (auto [a, b] : source->covers())
      if (!target->leq(map[a], map[b])) throw InputError("poset map is not order-preserving");
  }
};

/// Involution acting on the elements of some carrier.
struct InvolutionAction {
  std::vector<std::uint32_t> action;

  std::uint32_t operator()(std::uint32_t e) const { return action.at(e); }

  bool is_involution() const {
    for (std::uint32_t e = 0; e < action.size(); ++e)
      if (action[e] >= action.size() || action[action[e]] != e) return false;
    return true;
  }

  /// Involution and automorphism of the cover relation.
  bool acts_on(const Poset& p) const {
    if (action.size() != p.size() || !is_involution()) return false;
    for (auto [a, b] : p.covers()) {
      auto up = p.upper_covers(action[a]);
      if (!std::binary_search(up.begin(), up.end(), static_cast<Element>(action[b]))) return false;
    }
    return true;
  }

  std::vector<std::uint32_t> fixed_points() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t e = 0; e < action.size(); ++e)
      if (action[e] == e) out.push_back(e);
    return out;
  }
};

/// Subposet on `keep` (sorted or not); element i of the result is keep[i].
inline Poset induced_subposet(const Poset& p, std::span<const Element> keep) {
  constexpr Element none = static_cast<Element>(-1);
  std::vector<Element> pos(p.size(), none);
  std::vector<std::string> names;
  for (Element i = 0; i < keep.size(); ++i) {
    pos[keep[i]] = i;
    names.push_back(p.name(keep[i]));
  }
  std::vector<std::pair<Element, Element>> covers;
  std::vector<Element> stack;
  std::vector<bool> seen(p.size(), false);
  std::vector<Element> touched;
  for (Element i = 0; i < keep.size(); ++i) {
    // Walk up through elements outside `keep`; the first kept elements hit
    // contain all covers of keep[i] in the subposet.
    std::vector<Element> hits;
    stack.assign(1, keep[i]);
    touched.clear();
    while (!stack.empty()) {
      Element x = stack.back();
      stack.pop_back();
      for (Element y : p.upper_covers(x)) {
        if (seen[y]) continue;
        seen[y] = true;
        touched.push_back(y);
        if (pos[y] != none) hits.push_back(y);
        else stack.push_back(y);
      }
    }
    for (Element t : touched) seen[t] = false;
    for (Element b : hits) {
      bool cover = true;
      for (Element c : hits)
        if (c != b && p.leq(c, b)) {
          cover = false;
          break;
        }
      if (cover) covers.emplace_back(i, pos[b]);
    }
  }
  return Poset(std::move(names), std::move(covers), false);
}

/// Componentwise order on P x Q; element (a,b) has index a*|Q| + b.
inline Poset product_poset(const Poset& p, const Poset& q, std::size_t cap = 2'000'000) {
  if (p.size() && q.size() > cap / p.size()) throw SizeError("product poset too large", cap);
  const auto nq = static_cast<Element>(q.size());
  std::vector<std::string> names;
  for (Element a = 0; a < p.size(); ++a)
    for (Element b = 0; b < q.size(); ++b) names.push_back("<" + p.name(a) + "," + q.name(b) + ">");
  std::vector<std::pair<Element, Element>> covers;
  for (Element a = 0; a < p.size(); ++a)
    for (Element b = 0; b < q.size(); ++b) {
      for (Element a2 : p.upper_covers(a)) covers.emplace_back(a * nq + b, a2 * nq + b);
      for (Element b2 : q.upper_covers(b)) covers.emplace_back(a * nq + b, a * nq + b2);
    }
  return Poset(std::move(names), std::move(covers), false);
}

/// Single-element and chain helpers.
inline Poset chain_poset(std::size_t n) {
  std::vector<std::string> names;
  std::vector<std::pair<Element, Element>> covers;
  for (Element i = 0; i < n; ++i) {
    names.push_back(std::to_string(i));
    if (i) covers.emplace_back(i - 1, i);
  }
  return Poset(std::move(names), std::move(covers));
}

inline Poset antichain_poset(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
  return Poset(std::move(names), {});
}

// ---------------------------------------------------------------------------
// Beat points

struct CoreResult {
  Poset core;
  std::vector<Element> kept;            // original indices of the core elements
  std::vector<std::string> removed;     // removal log, in order
};

namespace detail {

/// Remove beat points, smallest id first, among elements allowed by
/// `removable`, until none is left.
inline CoreResult beat_point_reduction(const Poset& p, const std::function<bool(Element)>& removable) {
  const std::size_t n = p.size();
  std::vector<std::vector<Element>> up(n), down(n);
  for (Element a = 0; a < n; ++a) {
    auto u = p.upper_covers(a);
    auto d = p.lower_covers(a);
    up[a].assign(u.begin(), u.end());
    down[a].assign(d.begin(), d.end());
  }
  std::vector<bool> alive(n, true);
  CoreResult res;
  auto reachable = [&](Element from, Element to, Element skip) {
    std::vector<Element> stack{from};
    std::vector<bool> seen(n, false);
    while (!stack.empty()) {
      Element x = stack.back();
      stack.pop_back();
      for (Element y : up[x]) {
        if (y == skip || seen[y]) continue;
        if (y == to) return true;
        seen[y] = true;
        stack.push_back(y);
      }
    }
    return false;
  };
  auto erase = [](std::vector<Element>& v, Element x) { v.erase(std::remove(v.begin(), v.end(), x), v.end()); };
  auto is_beat = [&](Element x) { return alive[x] && removable(x) && (down[x].size() == 1 || up[x].size() == 1); };
  std::set<Element> beat;
  for (Element x = 0; x < n; ++x)
    if (is_beat(x)) beat.insert(x);
  while (!beat.empty()) {
    Element x = *beat.begin();
    beat.erase(beat.begin());
    if (!is_beat(x)) continue;
    // Remove x, reconnecting each lower cover to each upper cover unless
    // another chain already relates them.
    std::vector<std::pair<Element, Element>> bridge;
    for (Element a : down[x])
      for (Element b : up[x])
        if (!reachable(a, b, x)) bridge.emplace_back(a, b);
    std::vector<Element> touched(down[x].begin(), down[x].end());
    touched.insert(touched.end(), up[x].begin(), up[x].end());
    for (Element a : down[x]) erase(up[a], x);
    for (Element b : up[x]) erase(down[b], x);
    for (auto [a, b] : bridge) {
      up[a].push_back(b);
      down[b].push_back(a);
    }
    up[x].clear();
    down[x].clear();
    alive[x] = false;
    res.removed.push_back(p.name(x));
    for (Element t : touched) {
      if (is_beat(t)) beat.insert(t);
      else beat.erase(t);
    }
  }
  std::vector<Element> pos(n, static_cast<Element>(-1));
  std::vector<std::string> names;
  for (Element x = 0; x < n; ++x)
    if (alive[x]) {
      pos[x] = static_cast<Element>(res.kept.size());
      res.kept.push_back(x);
      names.push_back(p.name(x));
    }
  std::vector<std::pair<Element, Element>> covers;
  for (Element x : res.kept) {
    std::sort(up[x].begin(), up[x].end());
    for (Element y : up[x]) covers.emplace_back(pos[x], pos[y]);
  }
  res.core = Poset(std::move(names), std::move(covers), false);
  return res;
}

}  // namespace detail

/// Iteratively delete beat points (an element whose strict down-set has a
/// maximum or whose strict up-set has a minimum), smallest id first.
inline CoreResult stong_core(const Poset& p) {
  return detail::beat_point_reduction(p, [](Element) { return true; });
}

// ---------------------------------------------------------------------------
// Isomorphism

inline constexpr std::size_t poset_isomorphism_cap = 20'000;

/// Exact search for an order isomorphism P -> Q (on Hasse diagrams).
inline std::optional<std::vector<Element>> poset_isomorphism(const Poset& p, const Poset& q) {
  if (p.size() != q.size() || p.cover_count() != q.cover_count()) return std::nullopt;
  if (p.size() > poset_isomorphism_cap) throw SizeError("poset isomorphism search refused", poset_isomorphism_cap);
  const std::size_t n = p.size();
  auto heights = [](const Poset& x) {
    std::vector<std::size_t> h(x.size(), 0);
    std::vector<std::size_t> indeg(x.size());
    std::vector<Element> queue;
    for (Element a = 0; a < x.size(); ++a)
      if (!(indeg[a] = x.lower_covers(a).size())) queue.push_back(a);
    while (!queue.empty()) {
      Element a = queue.back();
      queue.pop_back();
      for (Element b : x.upper_covers(a)) {
        h[b] = std::max(h[b], h[a] + 1);
        if (--indeg[b] == 0) queue.push_back(b);
      }
    }
    return h;
  };
  auto hp = heights(p), hq = heights(q);
  using Key = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>;
  auto key = [](const Poset& x, const std::vector<std::size_t>& h, Element a) {
    return Key(h[a], x.lower_covers(a).size(), x.upper_covers(a).size(), x.strict_down_set(a).size());
  };
  std::vector<Key> kp(n), kq(n);
  for (Element a = 0; a < n; ++a) {
    kp[a] = key(p, hp, a);
    kq[a] = key(q, hq, a);
  }
  {
    auto sp = kp, sq = kq;
    std::sort(sp.begin(), sp.end());
    std::sort(sq.begin(), sq.end());
    if (sp != sq) return std::nullopt;
  }
  // Order P's elements so each one (after the first of its component) has a
  // cover neighbor already placed.
  std::vector<Element> order;
  std::vector<bool> seen(n, false);
  for (Element s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<Element> queue{s};
    seen[s] = true;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      Element a = queue[i];
      order.push_back(a);
      for (auto list : {p.upper_covers(a), p.lower_covers(a)})
        for (Element b : list)
          if (!seen[b]) {
            seen[b] = true;
            queue.push_back(b);
          }
    }
  }
  std::vector<std::size_t> rank(n);
  for (std::size_t i = 0; i < n; ++i) rank[order[i]] = i;
  constexpr Element unset = static_cast<Element>(-1);
  std::vector<Element> fwd(n, unset), bwd(n, unset);
  auto is_cover = [](const Poset& x, Element a, Element b) {
    auto u = x.upper_covers(a);
    return std::binary_search(u.begin(), u.end(), b);
  };
  std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
    if (i == n) return true;
    Element a = order[i];
    // Candidates: restrict to cover-neighbors of an already placed neighbor.
    std::vector<Element> cands;
    bool anchored = false;
    for (auto [list, upward] : {std::pair{p.upper_covers(a), true}, std::pair{p.lower_covers(a), false}}) {
      for (Element b : list)
        if (rank[b] < i) {
          auto img = upward ? q.lower_covers(fwd[b]) : q.upper_covers(fwd[b]);
          cands.assign(img.begin(), img.end());
          anchored = true;
          break;
        }
      if (anchored) break;
    }
    if (!anchored) {
      cands.resize(n);
      for (Element c = 0; c < n; ++c) cands[c] = c;
    }
    for (Element c : cands) {
      if (bwd[c] != unset || kq[c] != kp[a]) continue;
      bool ok = true;
      for (Element b : p.upper_covers(a))
        if (fwd[b] != unset && !is_cover(q, c, fwd[b])) ok = false;
      for (Element b : p.lower_covers(a))
        if (fwd[b] != unset && !is_cover(q, fwd[b], c)) ok = false;
      if (ok) {
        for (Element d : q.upper_covers(c))
          if (bwd[d] != unset && !is_cover(p, a, bwd[d])) ok = false;
        for (Element d : q.lower_covers(c))
          if (bwd[d] != unset && !is_cover(p, bwd[d], a)) ok = false;
      }
      if (!ok) continue;
      fwd[a] = c;
      bwd[c] = a;
      if (rec(i + 1)) return true;
      fwd[a] = bwd[c] = unset;
    }
    return false;
  };
  if (!rec(0)) return std::nullopt;
  return fwd;
}

/// True if `map` is a bijection P -> Q preserving and reflecting covers.
inline bool is_poset_isomorphism(const Poset& p, const Poset& q, std::span<const Element> map) {
  if (p.size() != q.size() || map.size() != p.size() || p.cover_count() != q.cover_count()) return false;
  std::vector<bool> hit(q.size(), false);
  for (Element m : map) {
    if (m >= q.size() || hit[m]) return false;
    hit[m] = true;
  }
  for (auto [a, b] : p.covers()) {
    auto u = q.upper_covers(map[a]);
    if (!std::binary_search(u.begin(), u.end(), map[b])) return false;
  }
  return true;
}

}  // namespace boxloop
