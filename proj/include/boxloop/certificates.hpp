#pragma once

// Three-valued homotopy certificates for posets and the fiber condition of
// Quillen's theorem B.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "boxloop/complex.hpp"
#include "boxloop/homology.hpp"
#include "boxloop/poset.hpp"

namespace boxloop {

enum class Verdict { certified, refuted, unknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::certified: return "certified";
    case Verdict::refuted: return "refuted";
    default: return "unknown";
  }
}

struct HypothesisVerdict {
  Verdict status = Verdict::unknown;
  std::vector<std::string> evidence;
};

/// Homology of the order complex, computed on the Stong core.
inline HomologySummary poset_homology(const Poset& p, int max_dim) {
  auto core = stong_core(p);
  return homology(order_complex(core.core), max_dim);
}

/// Certified when the Stong cores are isomorphic, refuted when the order
/// complexes differ in homology up to `max_dim`, unknown otherwise.
inline HypothesisVerdict homotopy_equivalent_certificate(const Poset& p, const Poset& q, int max_dim = 3) {
  HypothesisVerdict v;
  auto cp = stong_core(p);
  auto cq = stong_core(q);
  v.evidence.push_back("core sizes " + std::to_string(cp.core.size()) + " and " + std::to_string(cq.core.size()));
  if (cp.core.size() == cq.core.size() && cp.core.cover_count() == cq.core.cover_count() &&
      cp.core.size() <= poset_isomorphism_cap) {
    if (poset_isomorphism(cp.core, cq.core)) {
      v.status = Verdict::certified;
      v.evidence.push_back("cores isomorphic");
      return v;
    }
  }
  auto hp = homology(order_complex(cp.core), max_dim);
  auto hq = homology(order_complex(cq.core), max_dim);
  v.evidence.push_back("homology " + hp.compact() + " vs " + hq.compact());
  v.status = hp == hq ? Verdict::unknown : Verdict::refuted;
  return v;
}

namespace detail {

/// Elements x with p(x) <= y, given the down-set of y.
inline std::vector<Element> fiber_below(const PosetMap& p, const std::vector<bool>& below) {
  std::vector<Element> out;
  for (Element x = 0; x < p.map.size(); ++x)
    if (below[p.map[x]]) out.push_back(x);
  return out;
}

}  // namespace detail

/// Checks that every inclusion p^{-1}(Q_{<=y}) -> p^{-1}(Q_{<=y'}) over a
/// cover y < y' is a homotopy equivalence (covers suffice, since the
/// inclusions compose). A pair is certified when the larger fiber shrinks to
/// the smaller one by removing beat points outside it; it is refuted when the
/// two fibers differ in homology.
inline HypothesisVerdict quillen_b_pairs(const PosetMap& p, int max_dim = 3) {
  p.validate();
  const Poset& q = *p.target;
  HypothesisVerdict v;
  std::vector<std::vector<Element>> fibers(q.size());
  for (Element y = 0; y < q.size(); ++y) {
    std::vector<bool> below(q.size(), false);
    below[y] = true;
    for (Element z : q.strict_down_set(y)) below[z] = true;
    fibers[y] = detail::fiber_below(p, below);
  }
  std::size_t certified = 0, refuted = 0, unknown = 0;
  for (auto [y, y2] : q.covers()) {
    const auto& small = fibers[y];
    const auto& big = fibers[y2];
    std::string pair = q.name(y) + " < " + q.name(y2);
    if (small == big) {
      ++certified;
      continue;
    }
    Poset fb = induced_subposet(*p.source, big);
    std::vector<bool> in_small(big.size(), false);
    for (std::size_t i = 0; i < big.size(); ++i) in_small[i] = std::binary_search(small.begin(), small.end(), big[i]);
    auto red = detail::beat_point_reduction(fb, [&](Element e) { return !in_small[e]; });
    if (red.kept.size() == small.size()) {
      ++certified;
      continue;
    }
    Poset fs = induced_subposet(*p.source, small);
    auto hs = poset_homology(fs, max_dim);
    auto hb = poset_homology(red.core, max_dim);
    if (hs == hb) {
      ++unknown;
      v.evidence.push_back("pair " + pair + ": unknown, homology " + hs.compact() + " on both fibers");
    } else {
      ++refuted;
      v.evidence.push_back("pair " + pair + ": refuted, fiber homology " + hs.compact() + " vs " + hb.compact());
    }
  }
  v.evidence.insert(v.evidence.begin(), "pairs=" + std::to_string(q.cover_count()) + " certified=" +
                                            std::to_string(certified) + " refuted=" + std::to_string(refuted) +
                                            " unknown=" + std::to_string(unknown));
  v.status = refuted ? Verdict::refuted : (unknown ? Verdict::unknown : Verdict::certified);
  return v;
}

/// The fiber condition for `p`, or, in fixed-point mode, for the restriction
/// of p to the fixed-point subposets of the given actions.
inline HypothesisVerdict quillen_b_check(const PosetMap& p, bool fixed_point_mode,
                                         const InvolutionAction* source_action = nullptr,
                                         const InvolutionAction* target_action = nullptr, int max_dim = 3) {
  if (!fixed_point_mode) return quillen_b_pairs(p, max_dim);
  if (!source_action || !target_action) throw InputError("fixed-point mode needs actions on both posets");
  if (!source_action->acts_on(*p.source) || !target_action->acts_on(*p.target))
    throw InputError("attached action is not an involutive automorphism");
  for (Element x = 0; x < p.map.size(); ++x)
    if (p.map[(*source_action)(x)] != (*target_action)(p.map[x])) throw InputError("map is not equivariant");
  auto fs = source_action->fixed_points();
  auto ft = target_action->fixed_points();
  std::vector<Element> src(fs.begin(), fs.end()), tgt(ft.begin(), ft.end());
  Poset ps = induced_subposet(*p.source, src);
  Poset pt = induced_subposet(*p.target, tgt);
  PosetMap restricted{&ps, &pt, {}};
  for (Element x : src) {
    auto it = std::lower_bound(tgt.begin(), tgt.end(), p.map[x]);
    restricted.map.push_back(static_cast<Element>(it - tgt.begin()));
  }
  auto v = quillen_b_pairs(restricted, max_dim);
  v.evidence.insert(v.evidence.begin(), "fixed points: source " + std::to_string(src.size()) + ", target " +
                                            std::to_string(tgt.size()));
  return v;
}

/// True iff for every z, f restricted to Z_{<=z} is an isomorphism onto
/// X_{<=f(z)}.
inline bool down_set_isomorphism_check(const PosetMap& f) {
  f.validate();
  const Poset& z = *f.source;
  const Poset& x = *f.target;
  for (Element e = 0; e < z.size(); ++e) {
    auto dz = z.strict_down_set(e);
    dz.push_back(e);
    std::sort(dz.begin(), dz.end());
    auto dx = x.strict_down_set(f.map[e]);
    dx.push_back(f.map[e]);
    std::sort(dx.begin(), dx.end());
    if (dz.size() != dx.size()) return false;
    std::vector<Element> image;
    for (Element a : dz) image.push_back(f.map[a]);
    std::sort(image.begin(), image.end());
    if (std::adjacent_find(image.begin(), image.end()) != image.end() || image != dx) return false;
    // Order reflection on the down-set.
    for (Element a : dz)
      for (Element b : dz)
        if (x.leq(f.map[a], f.map[b]) != z.leq(a, b)) return false;
  }
  return true;
}

}  // namespace boxloop
