#include <catch_amalgamated.hpp>

#include "boxloop/certificates.hpp"
#include "boxloop/complexes.hpp"
#include "boxloop/homology.hpp"
#include "boxloop/presentation.hpp"
#include "boxloop/smith.hpp"
#include "oracles.hpp"

using namespace boxloop;

namespace {

Integer det_cofactor(const std::vector<std::vector<Integer>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  Integer total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<Integer>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<Integer> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(row);
    }
    Integer term = m[0][j] * det_cofactor(minor);
    total += (j % 2) ? -term : term;
  }
  return total;
}

Integer gcd(Integer a, Integer b) {
  a = abs(a), b = abs(b);
  while (b != 0) {
    Integer t = a % b;
    a = b;
    b = t;
  }
  return a;
}

/// Invariant factors from determinantal divisors: d_k is the gcd of all
/// k x k minors and the k-th factor is d_k / d_{k-1}.
std::vector<Integer> factors_by_minors(const IntegerMatrix& m) {
  const std::size_t r = m.rows(), c = m.cols();
  std::vector<Integer> d{1};
  for (std::size_t k = 1; k <= std::min(r, c); ++k) {
    Integer g = 0;
    for (std::size_t rm = 0; rm < (std::size_t{1} << r); ++rm) {
      if (std::popcount(rm) != static_cast<int>(k)) continue;
      for (std::size_t cm = 0; cm < (std::size_t{1} << c); ++cm) {
        if (std::popcount(cm) != static_cast<int>(k)) continue;
        std::vector<std::vector<Integer>> sub;
        for (std::size_t i = 0; i < r; ++i)
          if (rm >> i & 1) {
            std::vector<Integer> row;
            for (std::size_t j = 0; j < c; ++j)
              if (cm >> j & 1) row.push_back(m(i, j));
            sub.push_back(row);
          }
        g = gcd(g, det_cofactor(sub));
      }
    }
    if (g == 0) break;
    d.push_back(g);
  }
  std::vector<Integer> out;
  for (std::size_t k = 1; k < d.size(); ++k) out.push_back(d[k] / d[k - 1]);
  return out;
}

IntegerMatrix random_matrix(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(1, 4), entry(-6, 6), sparse(0, 3);
  std::size_t r = dim(rng), c = dim(rng);
  IntegerMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = sparse(rng) ? entry(rng) : 0;
  return m;
}

SimplicialComplex numbered_complex(std::size_t n, std::vector<Simplex> facets) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
  return SimplicialComplex(std::move(names), std::move(facets));
}

SimplicialComplex projective_plane() {
  return numbered_complex(6, {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 5, 1},
                              {1, 2, 4}, {2, 3, 5}, {3, 4, 1}, {4, 5, 2}, {5, 1, 3}});
}

SimplicialComplex torus() {
  std::vector<Simplex> f;
  for (Vertex i = 0; i < 7; ++i) {
    f.push_back({i, (i + 1) % 7, (i + 3) % 7});
    f.push_back({i, (i + 2) % 7, (i + 3) % 7});
  }
  return numbered_complex(7, f);
}

SimplicialComplex random_complex(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 7), size(1, 4), vertex(0, 6);
  std::vector<Simplex> facets;
  int k = count(rng);
  for (int i = 0; i < k; ++i) {
    Simplex s;
    int m = size(rng);
    for (int j = 0; j < m; ++j) s.push_back(static_cast<Vertex>(vertex(rng)));
    facets.push_back(s);
  }
  return numbered_complex(7, facets);
}

std::vector<std::size_t> oracle_betti(const SimplicialComplex& k, std::size_t dim) {
  std::vector<std::vector<Vertex>> f(k.facets().begin(), k.facets().end());
  return oracle::betti_q(oracle::all_faces(f), dim);
}

}  // namespace

TEST_CASE("smith normal form of a small matrix") {
  IntegerMatrix m(2, 2, {2, 4, 6, 8});
  auto f = smith_normal_form(m);
  std::string why;
  CHECK(verify_smith(m, f, &why));
  CHECK(f.diagonal == std::vector<Integer>{2, 4});
  CHECK(abs(determinant(f.u)) == 1);
  CHECK(abs(determinant(f.v)) == 1);
  CHECK(invariant_factors(m) == std::vector<Integer>{2, 4});
}

TEST_CASE("smith normal form edge cases") {
  IntegerMatrix zero(3, 2);
  auto f = smith_normal_form(zero);
  CHECK(f.rank() == 0);
  CHECK(verify_smith(zero, f));
  IntegerMatrix empty(0, 3);
  CHECK(invariant_factors(empty).empty());
  CHECK_THROWS_AS(IntegerMatrix(2, 2, {1, 2, 3}), InputError);
}

TEST_CASE("smith normal form agrees with determinantal divisors") {
  std::mt19937_64 rng(20240501);
  for (int trial = 0; trial < 400; ++trial) {
    auto m = random_matrix(rng);
    auto f = smith_normal_form(m);
    std::string why;
    INFO("trial " << trial);
    CHECK(verify_smith(m, f, &why));
    CHECK(f.diagonal == factors_by_minors(m));
  }
}

TEST_CASE("verify_smith rejects tampered forms") {
  IntegerMatrix m(2, 2, {2, 4, 6, 8});
  auto f = smith_normal_form(m);
  auto bad = f;
  bad.s(0, 1) = 1;
  CHECK_FALSE(verify_smith(m, bad));
  bad = f;
  std::swap(bad.diagonal[0], bad.diagonal[1]);
  CHECK_FALSE(verify_smith(m, bad));
}

TEST_CASE("homology of standard complexes") {
  auto triangle = numbered_complex(3, {{0, 1}, {1, 2}, {0, 2}});
  auto h = homology(triangle, 2);
  CHECK(h.to_string() == "H_0: Z\nH_1: Z\nH_2: 0\n");
  CHECK(h.compact() == "Z,Z,0");

  CHECK(homology(projective_plane(), 2).compact() == "Z,Z/2,0");
  CHECK(homology(torus(), 2).compact() == "Z,Z^2,Z");
  CHECK(homology(numbered_complex(4, {{0, 1, 2, 3}}), 3).compact() == "Z,0,0,0");
  CHECK(homology(numbered_complex(2, {}), 1).compact() == "Z^2,0");
  auto empty = homology(SimplicialComplex(), 1);
  CHECK(empty.components() == 0);
}

TEST_CASE("box complex of K4 has the homology of a 2-sphere") {
  auto b = box_complex(complete_graph(4));
  CHECK(poset_homology(b.poset, 3).compact() == "Z,0,Z,0");
  CHECK(homology(neighborhood_complex(complete_graph(4)), 3).compact() == "Z,0,Z,0");
}

TEST_CASE("homology matches rational Betti numbers on random complexes") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 80; ++trial) {
    auto k = random_complex(rng);
    auto h = homology(k, 3);
    auto b = oracle_betti(k, 3);
    INFO(complex_to_string(k));
    CHECK(h.betti == b);
    for (const auto& t : h.torsion)
      for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i] % t[i - 1] == 0);
  }
}

TEST_CASE("collapse preserves homology") {
  std::mt19937_64 rng(78);
  for (int trial = 0; trial < 60; ++trial) {
    auto k = random_complex(rng);
    HomologyOptions raw;
    raw.collapse_first = false;
    CHECK(homology(collapse(k), 3) == homology(k, 3, raw));
  }
  CHECK(homology(projective_plane(), 2, {false}).compact() == "Z,Z/2,0");
}

TEST_CASE("edge-path presentations") {
  auto triangle = numbered_complex(3, {{0, 1}, {1, 2}, {0, 2}});
  auto p = edge_path_presentation(triangle, 0);
  CHECK(p.generators.size() == 1);
  CHECK(p.relators.empty());
  CHECK(abelianization(p).to_string() == "Z");

  auto disc = numbered_complex(4, {{0, 1, 2}, {1, 2, 3}});
  CHECK(edge_path_presentation(disc, 0).to_string() == "trivial\n");

  auto rp2 = edge_path_presentation(projective_plane(), 0);
  CHECK(abelianization(rp2).to_string() == "Z/2");
  CHECK(abelianization(edge_path_presentation(torus(), 3)).to_string() == "Z^2");
  CHECK_THROWS_AS(edge_path_presentation(triangle, 5), InputError);
}

TEST_CASE("relators only use declared generators") {
  auto p = edge_path_presentation(torus(), 0, false);
  for (const auto& r : p.relators)
    for (int s : r) {
      CHECK(s != 0);
      CHECK(static_cast<std::size_t>(std::abs(s)) <= p.generators.size());
    }
}

TEST_CASE("abelianization of the presentation is the first homology") {
  std::mt19937_64 rng(79);
  std::size_t tested = 0;
  for (int trial = 0; trial < 120; ++trial) {
    auto k = random_complex(rng);
    auto h = homology(k, 1);
    if (h.components() != 1) continue;
    ++tested;
    auto a = abelianization(edge_path_presentation(k, k.facets()[0][0]));
    CHECK(a.rank == h.betti[1]);
    CHECK(a.torsion == h.torsion[1]);
    auto unsimplified = abelianization(edge_path_presentation(k, k.facets()[0][0], false));
    CHECK(unsimplified == a);
  }
  CHECK(tested > 20);
  auto a = abelianization(edge_path_presentation(projective_plane(), 2));
  CHECK(a.torsion == std::vector<Integer>{2});
}

TEST_CASE("word helpers") {
  CHECK(detail::free_reduce({1, -1, 2}) == Word{2});
  CHECK(detail::free_reduce({1, 2, -2, -1}).empty());
  CHECK(detail::cyclic_reduce({-1, 2, 1}) == Word{2});
  CHECK(detail::invert({1, -2}) == Word{2, -1});
}

TEST_CASE("simplification removes a generator killed by a relator") {
  GroupPresentation p;
  p.generators = {"a", "b"};
  p.relators = {{1}, {2, 2, 2}};
  auto s = simplify(p);
  CHECK(s.generators == std::vector<std::string>{"b"});
  CHECK(abelianization(s).torsion == std::vector<Integer>{3});
}

TEST_CASE("Stong cores") {
  auto b = box_complex(complete_graph(3)).poset;
  auto core = stong_core(b);
  CHECK(core.core.size() == b.size());  // a crown: no beat points
  auto disc = face_poset(numbered_complex(3, {{0, 1, 2}}));
  CHECK(stong_core(disc).core.size() == 1);
  auto circle = face_poset(numbered_complex(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}));
  CHECK(homology(order_complex(stong_core(circle).core), 2).compact() == "Z,Z,0");
  CHECK(homology(order_complex(core.core), 2) == homology(order_complex(b), 2));
  CHECK(stong_core(chain_poset(5)).core.size() == 1);
  CHECK(stong_core(antichain_poset(2)).core.size() == 2);
}

TEST_CASE("homotopy certificates") {
  auto b = box_complex(complete_graph(3)).poset;
  auto tri = face_poset(numbered_complex(3, {{0, 1}, {1, 2}, {0, 2}}));
  auto v = homotopy_equivalent_certificate(b, tri);
  CHECK(v.status != Verdict::refuted);

  auto point = chain_poset(1);
  auto r = homotopy_equivalent_certificate(b, point);
  CHECK(r.status == Verdict::refuted);
  bool has_witness = false;
  for (const auto& e : r.evidence) has_witness = has_witness || e.find(" vs ") != std::string::npos;
  CHECK(has_witness);

  CHECK(homotopy_equivalent_certificate(chain_poset(4), point).status == Verdict::certified);
}

TEST_CASE("Quillen fiber check") {
  auto b = box_complex(complete_graph(3)).poset;
  std::vector<Element> id(b.size());
  std::iota(id.begin(), id.end(), 0);
  PosetMap identity{&b, &b, id};
  CHECK(quillen_b_check(identity, false).status == Verdict::certified);
  CHECK(down_set_isomorphism_check(identity));

  // two points onto the top of a 2-chain: the fiber over the bottom is empty
  auto two = antichain_poset(2);
  auto chain = chain_poset(2);
  PosetMap collapse_map{&two, &chain, {1, 1}};
  auto v = quillen_b_check(collapse_map, false);
  CHECK(v.status == Verdict::refuted);
  CHECK_FALSE(down_set_isomorphism_check(collapse_map));

  // fixed-point mode: a free swap has no fixed points, so the restricted map is empty
  auto one = chain_poset(1);
  InvolutionAction swap{{1, 0}}, trivial{{0}};
  PosetMap to_point{&two, &one, {0, 0}};
  auto f = quillen_b_check(to_point, true, &swap, &trivial);
  CHECK(f.status == Verdict::certified);
  CHECK(f.evidence.front() == "fixed points: source 0, target 1");
  CHECK_THROWS_AS(quillen_b_check(to_point, true), InputError);
}
