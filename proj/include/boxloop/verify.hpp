#pragma once

// Claim checks over a pinned corpus, with deterministic reports.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "boxloop/certificates.hpp"
#include "boxloop/complexes.hpp"
#include "boxloop/graph_io.hpp"
#include "boxloop/homology.hpp"
#include "boxloop/loop_spaces.hpp"
#include "boxloop/presentation.hpp"
#include "boxloop/smith.hpp"
#include "boxloop/two_fundamental.hpp"

namespace boxloop {

enum class CheckStatus { pass, fail, unknown };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    default: return "unknown";
  }
}

struct CheckResult {
  std::string claim;
  std::string instance;
  CheckStatus status = CheckStatus::unknown;
  std::vector<std::string> evidence;
  bool budget_exceeded = false;

  std::string evidence_text() const {
    std::string out = "claim " + claim + "\ninstance " + instance + "\nstatus " + to_string(status) + "\n";
    for (const auto& e : evidence) out += e + "\n";
    return out;
  }
};

inline const std::vector<std::string>& claim_ids() {
  static const std::vector<std::string> ids = {
      "abelianization-h1", "box-iso",        "box-nbhd",        "clique-exp-box", "cycle-hom-loops",
      "endpoint-quillen",  "fold-invariance", "loop-census",    "snf-postconditions"};
  return ids;
}

struct VerifyBudgets {
  std::size_t census_length = 10;      // even loops up to this length
  std::size_t census_level_cap = 400'000;
  std::size_t tower_levels = 6;        // omega tower for loop-census
  std::size_t cycle_levels = 4;        // r = r0 .. r0 + cycle_levels
  std::size_t tower_cap = 400'000;
  std::size_t quillen_vertex_cap = 6;  // endpoint-quillen only on bigraphs this small
  std::size_t snf_samples = 1000;
  std::uint64_t seed = 20240501;
  std::size_t hom_cap = default_hom_cap;
  int max_dim = 3;
  Move2Mode move2 = Move2Mode::loopless;
};

namespace detail {

inline CheckResult make_result(std::string claim, std::string instance) {
  CheckResult r;
  r.claim = std::move(claim);
  r.instance = std::move(instance);
  return r;
}

inline HomologySummary order_homology(const Poset& p, int max_dim) { return poset_homology(p, max_dim); }

/// Face poset together with the element index of every simplex.
struct IndexedFacePoset {
  Poset poset;
  std::map<Simplex, Element> index;
};

inline IndexedFacePoset indexed_face_poset(const SimplicialComplex& k, std::size_t cap = 2'000'000) {
  if (auto est = full_size_estimate(k); est > cap) throw SizeError("face poset too large", cap, est);
  IndexedFacePoset out{face_poset(k), {}};
  Element e = 0;
  for (const auto& layer : k.faces_by_dim(1 << 20))
    for (const auto& s : layer) out.index.emplace(s, e++);
  return out;
}

/// Color-flipping involutive automorphism with the lexicographically
/// smallest map, if any.
inline std::optional<OddInvolution> find_odd_involution(const Bigraph& x, std::size_t max_vertices = 16) {
  const std::size_t n = x.size();
  if (n > max_vertices) return std::nullopt;
  const Graph& g = x.graph();
  std::vector<Vertex> map(n, static_cast<Vertex>(-1));
  std::function<bool(Vertex)> rec = [&](Vertex v) -> bool {
    if (v == n) return true;
    if (map[v] != static_cast<Vertex>(-1)) return rec(v + 1);
    for (Vertex w = 0; w < n; ++w) {
      if (map[w] != static_cast<Vertex>(-1) || x.color(w) == x.color(v)) continue;
      if (g.neighbors(v).size() != g.neighbors(w).size()) continue;
      map[v] = w;
      map[w] = v;
      bool ok = true;
      for (Vertex u = 0; u < n && ok; ++u) {
        if (map[u] == static_cast<Vertex>(-1)) continue;
        if (g.adjacent(u, v) != g.adjacent(map[u], w)) ok = false;
        if (g.adjacent(u, w) != g.adjacent(map[u], v)) ok = false;
      }
      if (ok && rec(v + 1)) return true;
      map[v] = map[w] = static_cast<Vertex>(-1);
    }
    return false;
  };
  if (!rec(0)) return std::nullopt;
  OddInvolution a{map};
  a.validate(x);
  return a;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Individual checks

/// The map (sigma, tau) -> ({v : (0,v) in sigma}, {v : (1,v) in tau}) from
/// B_{/K2}(K2 x G) to B(G) is an isomorphism of posets with involution.
inline CheckResult check_box_iso(const Graph& g, const std::string& instance, const VerifyBudgets& b = {}) {
  auto r = detail::make_result("box-iso", instance);
  auto cover = kronecker_cover(g);
  auto bx = box_complex_bigraph(cover.bigraph, &cover.deck, b.hom_cap);
  auto bg = box_complex(g, b.hom_cap);
  const std::size_t n = g.size();
  std::vector<Element> map(bx.elements.size());
  for (Element e = 0; e < bx.elements.size(); ++e) {
    VertexSet s = bx.elements[e].sets[0] & detail::full_mask(n);
    VertexSet t = bx.elements[e].sets[1] >> n;
    auto hit = bg.find(MultiHom{{s, t}});
    if (!hit) {
      r.status = CheckStatus::fail;
      r.evidence.push_back("element " + bx.poset.name(e) + " has no image");
      return r;
    }
    map[e] = *hit;
  }
  bool iso = is_poset_isomorphism(bx.poset, bg.poset, map);
  bool equivariant = true;
  for (Element e = 0; e < map.size(); ++e)
    if (map[(*bx.action)(e)] != (*bg.action)(map[e])) equivariant = false;
  r.evidence.push_back("elements " + std::to_string(bx.elements.size()) + " and " + std::to_string(bg.elements.size()));
  r.evidence.push_back(std::string("isomorphism ") + (iso ? "yes" : "no") + ", equivariant " + (equivariant ? "yes" : "no"));
  for (Element e = 0; e < map.size(); ++e) r.evidence.push_back(bx.poset.name(e) + " -> " + bg.poset.name(map[e]));
  r.status = iso && equivariant ? CheckStatus::pass : CheckStatus::fail;
  return r;
}

/// Homology of the order complex of B(G) against N(G).
inline CheckResult check_box_nbhd(const Graph& g, const std::string& instance, const VerifyBudgets& b = {}) {
  auto r = detail::make_result("box-nbhd", instance);
  auto bg = box_complex(g, b.hom_cap);
  auto hb = detail::order_homology(bg.poset, b.max_dim);
  auto hn = homology(neighborhood_complex(g), b.max_dim);
  r.evidence.push_back("B elements " + std::to_string(bg.elements.size()));
  r.evidence.push_back("order complex of B:\n" + hb.to_string());
  r.evidence.push_back("neighborhood complex:\n" + hn.to_string());
  r.evidence.push_back(hb == hn ? "homology consistent with a homotopy equivalence" : "homology differs");
  r.status = hb == hn ? CheckStatus::pass : CheckStatus::fail;
  return r;
}

/// The clique complex of X^{K2} against B_{/K2}(X): homology, plus a core
/// certificate when the posets are small.
inline CheckResult check_clique_exp_box(const Bigraph& x, const std::string& instance, const VerifyBudgets& b = {}) {
  auto r = detail::make_result("clique-exp-box", instance);
  auto exp = exponential_bigraph(k2_bigraph(), x);
  auto c = clique_complex(exp.graph());
  auto box = box_complex_bigraph(x, nullptr, b.hom_cap);
  auto hc = homology(c, b.max_dim);
  auto hb = detail::order_homology(box.poset, b.max_dim);
  r.evidence.push_back("clique complex vertices " + std::to_string(c.vertex_count()) + ", box elements " +
                       std::to_string(box.elements.size()));
  r.evidence.push_back("clique complex:\n" + hc.to_string());
  r.evidence.push_back("order complex of box complex:\n" + hb.to_string());
  if (hc != hb) {
    r.status = CheckStatus::fail;
    r.evidence.push_back("homology differs");
    return r;
  }
  auto fp = face_poset(c);
  auto cert = homotopy_equivalent_certificate(fp, box.poset, b.max_dim);
  r.evidence.push_back(std::string("core certificate: ") + to_string(cert.status));
  for (const auto& e : cert.evidence) r.evidence.push_back("  " + e);
  if (cert.status == Verdict::refuted) {
    r.status = CheckStatus::fail;
    return r;
  }
  r.evidence.push_back("homology consistent with a homotopy equivalence");
  r.status = CheckStatus::pass;
  return r;
}

/// Deleting any dismantlable vertex keeps the homology of B_{/K2}.
inline CheckResult check_fold_invariance(const Bigraph& x, const std::string& instance, const VerifyBudgets& b = {}) {
  auto r = detail::make_result("fold-invariance", instance);
  auto base = detail::order_homology(box_complex_bigraph(x, nullptr, b.hom_cap).poset, b.max_dim);
  r.evidence.push_back("box complex of X: " + base.compact());
  std::set<Vertex> tried;
  bool ok = true;
  for (auto d : find_dismantlable(x)) {
    if (!tried.insert(d.vertex).second) continue;
    std::vector<Vertex> keep;
    for (Vertex v = 0; v < x.size(); ++v)
      if (v != d.vertex) keep.push_back(v);
    auto h = detail::order_homology(box_complex_bigraph(induced_subgraph(x, keep), nullptr, b.hom_cap).poset, b.max_dim);
    bool same = h == base;
    ok = ok && same;
    r.evidence.push_back("remove " + x.graph().name(d.vertex) + " (into " + x.graph().name(d.witness) + "): " +
                         h.compact() + (same ? "" : " MISMATCH"));
  }
  if (tried.empty()) r.evidence.push_back("no dismantlable vertices");
  r.status = ok ? CheckStatus::pass : CheckStatus::fail;
  return r;
}

/// What the edge-path presentation of N(G) at v decides about the group.
struct GroupShadow {
  enum Kind { finite, infinite_cyclic, undecided } kind = undecided;
  std::size_t order = 0;
  std::string text;
};

inline GroupShadow group_shadow(const Graph& g, Vertex v) {
  auto n = neighborhood_complex(g);
  // vertex v of G is vertex pos(v) of N(G)
  Vertex pos = 0;
  for (Vertex u = 0; u < v; ++u)
    if (!g.neighbors(u).empty()) ++pos;
  auto p = edge_path_presentation(n, pos);
  auto ab = abelianization(p);
  GroupShadow s;
  s.text = "presentation generators " + std::to_string(p.generators.size()) + ", relators " +
           std::to_string(p.relators.size()) + ", abelianization " + ab.to_string();
  if (p.trivial()) {
    s.kind = GroupShadow::finite;
    s.order = 1;
  } else if (p.generators.size() == 1) {
    if (ab.rank == 1) {
      s.kind = GroupShadow::infinite_cyclic;
    } else {
      s.kind = GroupShadow::finite;
      s.order = ab.torsion.empty() ? 1 : static_cast<std::size_t>(ab.torsion.front());
    }
  }
  return s;
}

/// Even loops of length <= L through Phi, the omega tower over K2 x G, and
/// the edge-path group of N(G), compared where each is decided. L shrinks
/// until the target level fits the budget.
inline CheckResult check_loop_census(const Graph& g, Vertex v, const std::string& instance, const VerifyBudgets& b = {}) {
  auto r = detail::make_result("loop-census", instance);
  if (g.neighbors(v).empty()) {
    r.evidence.push_back("basepoint is isolated");
    return r;
  }
  auto shadow = group_shadow(g, v);
  r.evidence.push_back("group: " + shadow.text);
  bool budget_hit = false;

  std::optional<ClassCensus> census;
  std::size_t len = b.census_length - b.census_length % 2;
  for (; len >= 2 && !census; len -= 2) {
    try {
      census = pi2_even_classes(g, v, len, len / 2, std::nullopt, b.census_level_cap);
    } catch (const SizeError&) {
      budget_hit = true;
    }
  }
  if (census) len += 2;
  std::size_t classes = 0;
  bool partition_ok = true, exact = false;
  if (census) {
    r.evidence.push_back("loop length bound " + std::to_string(len));
    r.evidence.push_back("census " + census->to_string());
    auto cls = loop_move_classes(g, v, len, b.move2, &classes);
    // Phi must be constant on move classes; equality of partitions means the
    // truncated census already separates exactly the move classes.
    std::map<std::uint32_t, std::uint32_t> class_to_comp, comp_to_class;
    exact = true;
    for (std::size_t i = 0; i < cls.size(); ++i) {
      auto [it, fresh] = class_to_comp.emplace(cls[i], census->labels[i]);
      if (it->second != census->labels[i]) partition_ok = false;
      auto [jt, fresh2] = comp_to_class.emplace(census->labels[i], cls[i]);
      if (jt->second != cls[i]) exact = false;
    }
    exact = exact && partition_ok;
    r.evidence.push_back(std::string("move classes within the bound (") +
                         (b.move2 == Move2Mode::loopless ? "loopless" : "reflexive") +
                         " move 2): " + std::to_string(classes) + ", omega components hit: " +
                         std::to_string(census->hit.size()));
    if (!partition_ok) r.evidence.push_back("Phi separates loops of one move class");
    {
      auto other = b.move2 == Move2Mode::loopless ? Move2Mode::reflexive : Move2Mode::loopless;
      std::size_t other_classes = 0;
      loop_move_classes(g, v, len, other, &other_classes);
      r.evidence.push_back(std::string("move classes with ") +
                           (other == Move2Mode::loopless ? "loopless" : "reflexive") +
                           " move 2 (informational): " + std::to_string(other_classes));
    }

    auto cover = kronecker_cover(g);
    std::size_t match_level = (len + 3) / 4, match_components = 0;
    try {
      auto lo = omega_level(cover.bigraph, census->base, match_level, b.census_level_cap);
      auto hi = omega_level(cover.bigraph, census->base, census->level, b.census_level_cap);
      lo.components(&match_components);
      auto hi_label = hi.components();
      std::set<std::uint32_t> forward, hit;
      for (std::size_t i = 0; i < lo.size(); ++i) {
        std::vector<Vertex> w(lo.walk(i).begin(), lo.walk(i).end());
        for (std::size_t k = match_level; k < census->level; ++k) w = extend_ends(w);
        forward.insert(hi_label[*hi.find(w)]);
      }
      for (const auto& e : census->hit) hit.insert(e.component);
      r.evidence.push_back("omega level " + std::to_string(match_level) + ": components=" +
                           std::to_string(match_components) + ", images at level " + std::to_string(census->level) +
                           (forward == hit ? " coincide with" : " differ from") + " the census");
    } catch (const SizeError&) {
      r.evidence.push_back("omega level " + std::to_string(match_level) + " over budget");
    }
  } else {
    r.evidence.push_back("census over budget at every length");
  }

  auto cover = kronecker_cover(g);
  StabilizationOptions opt;
  opt.max_level = b.tower_levels;
  opt.dim = 0;
  opt.stop_when_stable = false;
  auto rep = stabilize(omega_tower(cover.bigraph, cover_basepoint(g, v), b.tower_cap), opt);
  r.evidence.push_back("omega tower:\n" + rep.to_string());
  if (rep.budget_note) {
    budget_hit = true;
    r.evidence.push_back("tower truncated: " + *rep.budget_note);
  }
  std::vector<std::size_t> counts;
  for (const auto& l : rep.levels) counts.push_back(l.components.size());
  std::optional<std::size_t> stable_count;
  if (rep.stable_at)
    for (const auto& l : rep.levels)
      if (l.label == *rep.stable_at) stable_count = l.components.size();

  if (!partition_ok) {
    r.status = CheckStatus::fail;
  } else if (shadow.kind == GroupShadow::finite) {
    if (census && census->hit.size() > shadow.order) {
      r.status = CheckStatus::fail;
      r.evidence.push_back("more loop classes than group elements");
    } else if (census && exact && census->hit.size() == shadow.order && stable_count == shadow.order &&
               counts.back() == shadow.order) {
      r.status = CheckStatus::pass;
      r.evidence.push_back("consistent: group of order " + std::to_string(shadow.order) + ", " +
                           std::to_string(shadow.order) + " loop class(es), tower stable with as many components");
    }
  } else if (shadow.kind == GroupShadow::infinite_cyclic) {
    bool growing = counts.size() >= 2 && counts.back() > counts.front() &&
                   std::is_sorted(counts.begin(), counts.end());
    if (census && exact && growing) {
      r.status = CheckStatus::pass;
      r.evidence.push_back("consistent: infinite cyclic group, " + std::to_string(classes) +
                           " loop classes within the bound, tower components growing");
    }
  }
  if (r.status == CheckStatus::unknown) {
    r.evidence.push_back("undecided within budget");
    r.budget_exceeded = budget_hit;
  }
  return r;
}

/// Per-component shape of the loop space expected from B(G) ~ N(G), when
/// every component of N(G) is a point or a circle up to homology and group.
inline std::optional<std::set<std::string>> expected_loop_shapes(const Graph& g, std::vector<std::string>& notes) {
  auto n = neighborhood_complex(g);
  auto h = homology(n, 3);
  notes.push_back("neighborhood complex " + h.compact());
  for (std::size_t k = 2; k < h.betti.size(); ++k)
    if (h.betti[k] || !h.torsion[k].empty()) return std::nullopt;
  if (!h.torsion[1].empty()) return std::nullopt;
  std::set<std::string> shapes;
  std::vector<bool> seen(n.vertex_count(), false);
  for (Vertex v = 0; v < n.vertex_count(); ++v) {
    if (seen[v]) continue;
    auto p = edge_path_presentation(n, v);
    auto layers = n.faces_by_dim(1);
    // mark the component of v
    std::vector<Vertex> stack{v};
    seen[v] = true;
    while (!stack.empty()) {
      Vertex u = stack.back();
      stack.pop_back();
      if (layers.size() > 1)
        for (const auto& e : layers[1]) {
          Vertex other = e[0] == u ? e[1] : (e[1] == u ? e[0] : u);
          if (other != u && !seen[other]) {
            seen[other] = true;
            stack.push_back(other);
          }
        }
    }
    if (p.trivial()) {
      shapes.insert("Z,0");
    } else if (p.generators.size() == 1 && abelianization(p).rank == 1) {
      shapes.insert("Z,Z");
    } else {
      return std::nullopt;
    }
  }
  return shapes;
}

/// Stabilized components of the cycle-hom tower have the homology of a
/// component of the free (even) or twisted (odd) loop space of B(G).
inline CheckResult check_cycle_hom_loops(const Graph& g, bool even, const std::string& instance,
                                         const VerifyBudgets& b = {}) {
  auto r = detail::make_result("cycle-hom-loops", instance);
  std::vector<std::string> notes;
  auto shapes = expected_loop_shapes(g, notes);
  r.evidence = notes;
  if (!shapes) {
    r.evidence.push_back("loop structure of B(G) not in the tractable table");
    return r;
  }
  std::string allowed;
  for (const auto& s : *shapes) allowed += (allowed.empty() ? "" : " ") + s;
  r.evidence.push_back("expected component homology: " + allowed);
  StabilizationOptions opt;
  opt.max_level = b.cycle_levels;
  opt.dim = 1;
  opt.stop_when_stable = false;
  auto rep = stabilize(cycle_tower(g, even, b.tower_cap), opt);
  r.evidence.push_back("tower:\n" + rep.to_string());
  if (rep.budget_note) {
    r.budget_exceeded = true;
    r.evidence.push_back("budget: " + *rep.budget_note);
  }
  bool empty = std::all_of(rep.levels.begin(), rep.levels.end(), [](const LevelReport& l) { return l.vertices == 0; });
  if (!even && empty) {
    bool bipartite = true;
    auto cover = kronecker_cover(g);
    std::size_t cg = 0, cc = 0;
    component_labels(g, &cg);
    component_labels(cover.bigraph.graph(), &cc);
    bipartite = cc == 2 * cg;
    r.evidence.push_back(std::string("no odd cycles map in; G bipartite: ") + (bipartite ? "yes" : "no"));
    r.status = bipartite ? CheckStatus::pass : CheckStatus::fail;
    return r;
  }
  std::size_t stable = 0;
  bool ok = true;
  for (const auto& l : rep.levels)
    for (std::size_t i = 0; i < l.components.size(); ++i) {
      const auto& c = l.components[i];
      if (!c.stable) continue;
      ++stable;
      auto text = rep.homology_text(c);
      if (!shapes->count(text)) {
        ok = false;
        r.evidence.push_back("level " + std::to_string(l.label) + " comp " + std::to_string(i) + ": " + text +
                             " is not an expected shape");
      }
    }
  r.evidence.push_back("stabilized components: " + std::to_string(stable));
  if (!ok) r.status = CheckStatus::fail;
  else if (stable) r.status = CheckStatus::pass;
  else r.evidence.push_back("no component stabilized within budget");
  return r;
}

/// The map sigma -> {(e_-(w), e_+(w)) : w in sigma} from the face poset of
/// the clique complex of path level n to the face poset of the clique
/// complex of (level 0) x (level 0), with the actions induced by reversal
/// and by (a, b) -> (alpha' b, alpha' a).
struct EndpointPosetMap {
  Poset source, target;
  std::vector<Element> map;
  std::optional<InvolutionAction> source_action, target_action;
};

inline EndpointPosetMap endpoint_poset_map(const Bigraph& x, std::size_t n, const OddInvolution* alpha) {
  auto level = path_level(x, n);
  auto level0 = path_level(x, 0);
  auto ends = endpoint_maps(level, level0);
  const auto n0 = static_cast<Vertex>(level0.size());
  Graph g0 = level0.graph();
  auto fp = detail::indexed_face_poset(clique_complex(level.graph()));
  auto fpt = detail::indexed_face_poset(clique_complex(product(g0, g0)));
  EndpointPosetMap out{fp.poset, fpt.poset, std::vector<Element>(fp.index.size()), std::nullopt, std::nullopt};
  for (const auto& [s, e] : fp.index) {
    Simplex img;
    for (Vertex v : s) img.push_back(ends.minus[v] * n0 + ends.plus[v]);
    std::sort(img.begin(), img.end());
    img.erase(std::unique(img.begin(), img.end()), img.end());
    out.map[e] = fpt.index.at(img);
  }
  if (alpha) {
    auto rev = reversal_action(level, *alpha);
    auto rev0 = reversal_action(level0, *alpha);
    auto induced = [](const detail::IndexedFacePoset& f, const std::function<Vertex(Vertex)>& act) {
      InvolutionAction a;
      a.action.resize(f.index.size());
      for (const auto& [s, e] : f.index) {
        Simplex img;
        for (Vertex v : s) img.push_back(act(v));
        std::sort(img.begin(), img.end());
        a.action[e] = f.index.at(img);
      }
      return a;
    };
    out.source_action = induced(fp, [&](Vertex v) { return rev[v]; });
    out.target_action = induced(fpt, [&](Vertex v) { return rev0[v % n0] * n0 + rev0[v / n0]; });
  }
  return out;
}

inline CheckResult check_endpoint_quillen(const Bigraph& x, const OddInvolution* alpha, std::size_t n,
                                          const std::string& instance, const VerifyBudgets& b = {}) {
  auto r = detail::make_result("endpoint-quillen", instance);
  auto m = endpoint_poset_map(x, n, alpha);
  PosetMap pm{&m.source, &m.target, m.map};
  r.evidence.push_back("level " + std::to_string(n) + ": source " + std::to_string(m.source.size()) + ", target " +
                       std::to_string(m.target.size()));
  auto v = quillen_b_check(pm, false, nullptr, nullptr, b.max_dim);
  r.evidence.push_back(std::string("fiber condition: ") + to_string(v.status));
  for (const auto& e : v.evidence) r.evidence.push_back("  " + e);
  bool refuted = v.status == Verdict::refuted;
  bool all_certified = v.status == Verdict::certified;
  if (alpha) {
    auto f = quillen_b_check(pm, true, &*m.source_action, &*m.target_action, b.max_dim);
    r.evidence.push_back(std::string("fixed-point fiber condition: ") + to_string(f.status));
    for (const auto& e : f.evidence) r.evidence.push_back("  " + e);
    refuted = refuted || f.status == Verdict::refuted;
    all_certified = all_certified && f.status == Verdict::certified;
  } else {
    r.evidence.push_back("no odd involution attached");
  }
  // The claim is about the colimit over all levels; a refutation at a finite
  // level is evidence about the truncation, not a counterexample.
  if (refuted) {
    r.status = CheckStatus::unknown;
    r.evidence.push_back("truncated map refuted at level " + std::to_string(n) +
                         "; the fiber inclusions are only claimed to be equivalences in the colimit");
  } else {
    r.status = CheckStatus::pass;
    if (!all_certified) r.evidence.push_back("no refutation; some pairs agree in homology only");
  }
  return r;
}

/// Random small integer matrices: U M V = S, unimodular U and V,
/// divisibility chain.
inline CheckResult check_snf_postconditions(std::size_t samples, std::uint64_t seed) {
  auto r = detail::make_result("snf-postconditions", "seed" + std::to_string(seed));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim(1, 6), entry(-9, 9), sparse(0, 2);
  std::size_t failures = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    std::size_t rows = dim(rng), cols = dim(rng);
    IntegerMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = sparse(rng) ? entry(rng) : 0;
    std::string why;
    if (!verify_smith(m, smith_normal_form(m), &why)) {
      if (++failures <= 5) r.evidence.push_back("sample " + std::to_string(s) + ": " + why);
    }
  }
  r.evidence.insert(r.evidence.begin(),
                    "samples " + std::to_string(samples) + ", failures " + std::to_string(failures));
  r.status = failures ? CheckStatus::fail : CheckStatus::pass;
  return r;
}

/// Abelianized edge-path group against H_1, component by component.
inline CheckResult check_abelianization(const std::vector<std::pair<std::string, SimplicialComplex>>& complexes,
                                        const std::string& instance) {
  auto r = detail::make_result("abelianization-h1", instance);
  bool ok = true;
  for (const auto& [label, k] : complexes) {
    auto h = homology(k, 1);
    // H_1 is the sum over components of the abelianized groups.
    AbelianGroup total;
    std::vector<bool> seen(k.vertex_count(), false);
    auto layers = k.faces_by_dim(1);
    std::vector<std::vector<Vertex>> adj(k.vertex_count());
    if (layers.size() > 1)
      for (const auto& e : layers[1]) {
        adj[e[0]].push_back(e[1]);
        adj[e[1]].push_back(e[0]);
      }
    std::vector<Integer> torsion;
    for (Vertex v = 0; v < k.vertex_count(); ++v) {
      if (seen[v]) continue;
      std::vector<Vertex> stack{v};
      seen[v] = true;
      while (!stack.empty()) {
        Vertex u = stack.back();
        stack.pop_back();
        for (Vertex w : adj[u])
          if (!seen[w]) {
            seen[w] = true;
            stack.push_back(w);
          }
      }
      auto ab = abelianization(edge_path_presentation(k, v));
      total.rank += ab.rank;
      torsion.insert(torsion.end(), ab.torsion.begin(), ab.torsion.end());
    }
    // Normalize the torsion list to invariant factors.
    if (!torsion.empty()) {
      IntegerMatrix d(torsion.size(), torsion.size());
      for (std::size_t i = 0; i < torsion.size(); ++i) d(i, i) = torsion[i];
      for (auto& f : invariant_factors(std::move(d)))
        if (f > 1) total.torsion.push_back(f);
    }
    std::size_t b1 = h.betti.size() > 1 ? h.betti[1] : 0;
    std::vector<Integer> t1 = h.torsion.size() > 1 ? h.torsion[1] : std::vector<Integer>{};
    bool same = total.rank == b1 && total.torsion == t1;
    ok = ok && same;
    r.evidence.push_back(label + ": abelianization " + total.to_string() + ", H_1 " +
                         (h.betti.size() > 1 ? h.group_string(1) : std::string("0")) + (same ? "" : " MISMATCH"));
  }
  r.status = ok ? CheckStatus::pass : CheckStatus::fail;
  return r;
}

// ---------------------------------------------------------------------------
// Corpus and suite

struct CorpusEntry {
  std::string path;
  GraphFile file;
  bool is_bigraph() const { return file.colors.has_value(); }
};

/// One graph path per line, relative to the manifest; `#` starts a comment.
inline std::vector<CorpusEntry> read_manifest(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw InputError("cannot open manifest " + manifest_path);
  auto dir = std::filesystem::path(manifest_path).parent_path();
  std::vector<CorpusEntry> out;
  std::set<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string rel, extra;
    if (!(ls >> rel)) continue;
    if (ls >> extra) throw InputError("manifest line has more than one path: " + line);
    auto path = (dir / rel).string();
    std::ifstream g(path);
    if (!g) throw InputError("cannot open corpus graph " + path);
    CorpusEntry e{rel, read_graph(g)};
    if (!names.insert(e.file.name).second) throw InputError("duplicate graph name in corpus: " + e.file.name);
    out.push_back(std::move(e));
  }
  if (out.empty()) throw InputError("manifest lists no graphs");
  return out;
}

struct SuiteOptions {
  std::set<std::string> claims;  // empty = all
  std::size_t jobs = 1;
  std::optional<std::string> evidence_dir;
  VerifyBudgets budgets;
};

struct SuiteReport {
  std::vector<CheckResult> results;

  std::size_t count(CheckStatus s) const {
    return static_cast<std::size_t>(
        std::count_if(results.begin(), results.end(), [s](const CheckResult& r) { return r.status == s; }));
  }
  bool budget_exceeded() const {
    return std::any_of(results.begin(), results.end(), [](const CheckResult& r) { return r.budget_exceeded; });
  }
  int exit_code() const {
    if (count(CheckStatus::fail)) return 1;
    if (budget_exceeded()) return 3;
    return 0;
  }

  static std::string evidence_file(const CheckResult& r) {
    std::string s = r.claim + "__" + r.instance + ".txt";
    for (char& c : s)
      if (c == '/' || c == ' ') c = '_';
    return s;
  }

  std::string to_string() const {
    std::ostringstream out;
    for (const auto& r : results)
      out << "CHECK " << r.claim << " " << r.instance << " " << boxloop::to_string(r.status) << " " << evidence_file(r)
          << "\n";
    out << "summary: pass=" << count(CheckStatus::pass) << " fail=" << count(CheckStatus::fail)
        << " unknown=" << count(CheckStatus::unknown) << "\n";
    return out.str();
  }
};

struct CheckJob {
  std::string claim, instance;
  std::function<CheckResult()> run;
};

/// The checks each corpus entry takes part in, in a fixed order.
inline std::vector<CheckJob> suite_jobs(const std::vector<CorpusEntry>& corpus, const SuiteOptions& opt) {
  std::vector<CheckJob> jobs;
  const VerifyBudgets& b = opt.budgets;
  auto wanted = [&](const std::string& id) { return opt.claims.empty() || opt.claims.count(id); };
  for (const auto& e : corpus) {
    const std::string name = e.file.name;
    if (!e.is_bigraph()) {
      const Graph* g = &e.file.graph;
      if (wanted("box-iso")) jobs.push_back({"box-iso", name, [g, name, b] { return check_box_iso(*g, name, b); }});
      if (wanted("box-nbhd")) jobs.push_back({"box-nbhd", name, [g, name, b] { return check_box_nbhd(*g, name, b); }});
      if (wanted("clique-exp-box"))
        jobs.push_back({"clique-exp-box", "K2x" + name, [g, name, b] {
          return check_clique_exp_box(kronecker_cover(*g).bigraph, "K2x" + name, b);
        }});
      if (wanted("fold-invariance"))
        jobs.push_back({"fold-invariance", "K2x" + name, [g, name, b] {
          return check_fold_invariance(kronecker_cover(*g).bigraph, "K2x" + name, b);
        }});
      if (wanted("loop-census"))
        jobs.push_back({"loop-census", name, [g, name, b] { return check_loop_census(*g, 0, name, b); }});
      if (wanted("cycle-hom-loops")) {
        jobs.push_back({"cycle-hom-loops", name + "/even", [g, name, b] { return check_cycle_hom_loops(*g, true, name + "/even", b); }});
        jobs.push_back({"cycle-hom-loops", name + "/odd", [g, name, b] { return check_cycle_hom_loops(*g, false, name + "/odd", b); }});
      }
      if (wanted("endpoint-quillen") && 2 * g->size() <= b.quillen_vertex_cap)
        jobs.push_back({"endpoint-quillen", "K2x" + name, [g, name, b] {
          auto cover = kronecker_cover(*g);
          return check_endpoint_quillen(cover.bigraph, &cover.deck, 1, "K2x" + name, b);
        }});
      if (wanted("abelianization-h1"))
        jobs.push_back({"abelianization-h1", name, [g, name, b] {
          auto cover = kronecker_cover(*g);
          std::vector<std::pair<std::string, SimplicialComplex>> ks;
          ks.emplace_back("neighborhood", neighborhood_complex(*g));
          ks.emplace_back("clique-exp", clique_complex(exponential_bigraph(k2_bigraph(), cover.bigraph).graph()));
          ks.emplace_back("box-order", order_complex(stong_core(box_complex(*g, b.hom_cap).poset).core));
          return check_abelianization(ks, name);
        }});
    } else {
      const GraphFile* f = &e.file;
      if (wanted("clique-exp-box"))
        jobs.push_back({"clique-exp-box", name, [f, name, b] { return check_clique_exp_box(f->bigraph(), name, b); }});
      if (wanted("fold-invariance"))
        jobs.push_back({"fold-invariance", name, [f, name, b] { return check_fold_invariance(f->bigraph(), name, b); }});
      if (wanted("endpoint-quillen") && f->graph.size() <= b.quillen_vertex_cap)
        jobs.push_back({"endpoint-quillen", name, [f, name, b] {
          auto x = f->bigraph();
          auto alpha = detail::find_odd_involution(x);
          return check_endpoint_quillen(x, alpha ? &*alpha : nullptr, 1, name, b);
        }});
      if (wanted("abelianization-h1"))
        jobs.push_back({"abelianization-h1", name, [f, name] {
          auto x = f->bigraph();
          std::vector<std::pair<std::string, SimplicialComplex>> ks;
          ks.emplace_back("clique-exp", clique_complex(exponential_bigraph(k2_bigraph(), x).graph()));
          return check_abelianization(ks, name);
        }});
    }
  }
  if (wanted("snf-postconditions"))
    jobs.push_back({"snf-postconditions", "seed" + std::to_string(b.seed),
                    [b] { return check_snf_postconditions(b.snf_samples, b.seed); }});
  return jobs;
}

/// Runs the jobs on `opt.jobs` threads; results are ordered by claim id then
/// instance regardless of scheduling.
inline SuiteReport run_suite(const std::vector<CorpusEntry>& corpus, const SuiteOptions& opt) {
  for (const auto& c : opt.claims)
    if (std::find(claim_ids().begin(), claim_ids().end(), c) == claim_ids().end())
      throw InputError("unknown claim id: " + c);
  auto jobs = suite_jobs(corpus, opt);
  std::vector<CheckResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      try {
        results[i] = jobs[i].run();
      } catch (const SizeError& e) {
        results[i] = detail::make_result(jobs[i].claim, jobs[i].instance);
        results[i].budget_exceeded = true;
        results[i].evidence.push_back(std::string("budget exceeded: ") + e.what());
      }
    }
  };
  std::size_t threads = std::max<std::size_t>(1, std::min(opt.jobs, jobs.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::stable_sort(results.begin(), results.end(), [](const CheckResult& a, const CheckResult& b) {
    if (a.claim != b.claim) return a.claim < b.claim;
    return natural_less(a.instance, b.instance);
  });
  SuiteReport rep{std::move(results)};
  if (opt.evidence_dir) {
    std::filesystem::create_directories(*opt.evidence_dir);
    for (const auto& r : rep.results) {
      std::ofstream out(std::filesystem::path(*opt.evidence_dir) / SuiteReport::evidence_file(r));
      out << r.evidence_text();
    }
  }
  return rep;
}

}  // namespace boxloop
