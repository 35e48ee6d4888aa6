#include <catch_amalgamated.hpp>

#include <sstream>

#include "boxloop/graph.hpp"
#include "boxloop/graph_io.hpp"
#include "oracles.hpp"

using namespace boxloop;

namespace {

Vertex at(const Graph& g, const std::string& name) { return *g.find(name); }

}  // namespace

TEST_CASE("standard graphs") {
  auto k4 = complete_graph(4);
  CHECK(k4.size() == 4);
  CHECK(k4.edge_count() == 6);
  CHECK_FALSE(k4.has_loop(0));
  auto c5 = cycle_graph(5);
  CHECK(c5.edge_count() == 5);
  CHECK(c5.adjacent(0, 4));
  auto i3 = interval_graph(3);
  CHECK(i3.size() == 4);
  CHECK(i3.reflexive());
  CHECK(looped_vertex().reflexive());
  CHECK(standard_graph(StandardKind::cycle, 6).edge_count() == 6);
}

TEST_CASE("graph construction rejects bad input") {
  CHECK_THROWS_AS(Graph::numbered(2, {{0, 2}}), InputError);
  CHECK_THROWS_AS(Graph({"a", "a"}, {}), InputError);
  auto g = Graph::numbered(3, {{0, 1}, {1, 0}, {0, 1}});
  CHECK(g.edge_count() == 1);
}

TEST_CASE("interval bigraphs") {
  auto k2 = interval_bigraph(0, 1);
  CHECK(k2.size() == 2);
  CHECK(k2.color(0) == 0);
  CHECK(k2.color(1) == 1);
  CHECK(k2.graph().adjacent(0, 1));

  auto l = interval_bigraph(-2, 3);
  CHECK(l.size() == 6);
  CHECK(l.graph().edge_count() == 5);
  CHECK(l.color(at(l.graph(), "-1")) == 1);
  // retraction onto -1..2 sending -2 to 0 and 3 to 1
  auto target = interval_bigraph(-1, 2);
  std::vector<Vertex> r{at(target.graph(), "0"), at(target.graph(), "-1"), at(target.graph(), "0"),
                        at(target.graph(), "1"),  at(target.graph(), "2"),  at(target.graph(), "1")};
  CHECK(is_bigraph_hom(l, target, r));
  CHECK_THROWS_AS(interval_bigraph(2, 1), InputError);
}

TEST_CASE("bigraph coloring must be proper") {
  auto g = Graph::numbered(2, {{0, 1}});
  CHECK_THROWS_AS(Bigraph(g, {0, 0}), InputError);
  CHECK_THROWS_AS(Bigraph(looped_vertex(), {0}), InputError);
}

TEST_CASE("products and covers") {
  auto k2c5 = product(complete_graph(2), cycle_graph(5));
  CHECK(oracle::isomorphic(k2c5, cycle_graph(10)));
  CHECK(is_isomorphic(k2c5, cycle_graph(10)));

  auto cover = kronecker_cover(complete_graph(3));
  CHECK(oracle::isomorphic(cover.bigraph.graph(), cycle_graph(6)));
  CHECK_NOTHROW(cover.deck.validate(cover.bigraph));
}

TEST_CASE("product adjacency is the conjunction of factor adjacencies") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = oracle::random_graph(4, 0.5, rng, true);
    auto h = oracle::random_graph(3, 0.5, rng, true);
    auto p = product(g, h);
    REQUIRE(p.size() == 12);
    for (Vertex a = 0; a < 4; ++a)
      for (Vertex b = 0; b < 3; ++b)
        for (Vertex a2 = 0; a2 < 4; ++a2)
          for (Vertex b2 = 0; b2 < 3; ++b2)
            CHECK(p.adjacent(a * 3 + b, a2 * 3 + b2) == (g.adjacent(a, a2) && h.adjacent(b, b2)));
  }
}

TEST_CASE("quotients by odd involutions") {
  auto cover = kronecker_cover(complete_graph(3));
  auto q = quotient_by_involution(cover.bigraph, cover.deck);
  CHECK(oracle::isomorphic(q.graph, complete_graph(3)));

  auto l = interval_bigraph(-1, 2);
  OddInvolution flip{{3, 2, 1, 0}};  // x -> 1 - x
  auto ql = quotient_by_involution(l, flip);
  REQUIRE(ql.graph.size() == 2);
  CHECK(ql.graph.names() == std::vector<std::string>{"{2,-1}", "{0,1}"});
  CHECK(ql.graph.edge_count() == 2);
  CHECK(ql.graph.adjacent(0, 1));
  CHECK(ql.graph.has_loop(1));
  CHECK_FALSE(ql.graph.has_loop(0));

  // K2 x (X / alpha) recovers X
  auto x = kronecker_cover(cycle_graph(5));
  auto back = kronecker_cover(quotient_by_involution(x.bigraph, x.deck).graph);
  CHECK(oracle::isomorphic(back.bigraph.graph(), x.bigraph.graph(), &back.bigraph.colors(), &x.bigraph.colors()));
}

TEST_CASE("odd involutions are validated") {
  auto k2 = k2_bigraph();
  OddInvolution id{{0, 1}}, swap{{1, 0}};
  CHECK_THROWS_AS(id.validate(k2), InputError);
  CHECK_NOTHROW(swap.validate(k2));
}

TEST_CASE("quotient of a random cover is the base graph") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 15; ++trial) {
    auto g = oracle::random_graph(5, 0.5, rng, true);
    auto c = kronecker_cover(g);
    auto q = quotient_by_involution(c.bigraph, c.deck);
    CHECK(oracle::isomorphic(q.graph, g));
  }
}

TEST_CASE("exponential graphs") {
  auto e = exponential(complete_graph(2), complete_graph(2));
  CHECK(e.graph().size() == 4);
  std::vector<Vertex> looped;
  for (Vertex v = 0; v < 4; ++v)
    if (e.graph().has_loop(v)) looped.push_back(v);
  REQUIRE(looped.size() == 2);
  for (Vertex v : looped) {
    auto f = e.map_of(v);
    CHECK(f[0] != f[1]);
  }
  auto eb = exponential_bigraph(k2_bigraph(), k2_bigraph());
  CHECK(oracle::isomorphic(eb.graph(), looped_vertex()));
}

TEST_CASE("looped vertices of an exponential graph are the homomorphisms") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = oracle::random_graph(3, 0.6, rng, false);
    auto h = oracle::random_graph(3, 0.6, rng, true);
    auto e = exponential(g, h);
    REQUIRE(e.graph().size() == 27);
    for (Vertex v = 0; v < e.graph().size(); ++v) CHECK(e.graph().has_loop(v) == is_hom(g, h, e.map_of(v)));
  }
}

TEST_CASE("folds") {
  CHECK(find_dismantlable(kronecker_cover(cycle_graph(5)).bigraph).empty());
  CHECK(fold_reduce(cycle_graph(5)).core == cycle_graph(5));
  CHECK(fold_reduce(cycle_graph(5)).log.empty());

  auto core = fold_reduce(interval_graph(4)).core;
  CHECK(oracle::isomorphic(core, looped_vertex()));

  for (long long n = 1; n <= 3; ++n) {
    auto res = fold_reduce(interval_bigraph(-n, n + 1));
    CHECK(res.core.size() == 2);
    CHECK(res.log.size() == static_cast<std::size_t>(2 * n));
    CHECK(oracle::isomorphic(res.core.graph(), k2_bigraph().graph(), &res.core.colors(), &k2_bigraph().colors()));
  }
}

TEST_CASE("fold logs replay: each removed vertex is dominated when it is removed") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    auto g = oracle::random_graph(7, 0.4, rng, true);
    auto res = fold_reduce(g);
    std::set<std::string> alive(g.names().begin(), g.names().end());
    for (const auto& step : res.log) {
      Vertex v = at(g, step.vertex), w = at(g, step.witness);
      REQUIRE(alive.count(step.witness));
      for (Vertex u : g.neighbors(v))
        if (alive.count(g.name(u))) CHECK(g.adjacent(w, u));
      alive.erase(step.vertex);
    }
    CHECK(alive.size() == res.core.size());
    CHECK(detail::dismantlable(res.core, nullptr).empty());
  }
}

TEST_CASE("isomorphism search") {
  auto c6 = cycle_graph(6);
  auto k2k3 = kronecker_cover(complete_graph(3)).bigraph.graph();
  auto iso = is_isomorphic(c6, k2k3);
  REQUIRE(iso);
  for (auto [u, v] : c6.edges()) CHECK(k2k3.adjacent((*iso)[u], (*iso)[v]));

  // colour-compatible relabelling exists
  CHECK(is_isomorphic(interval_bigraph(0, 1), interval_bigraph(1, 2)));
  // same graph, colourings that cannot be matched
  CHECK(is_isomorphic(interval_bigraph(0, 2).graph(), interval_bigraph(1, 3).graph()));
  CHECK_FALSE(is_isomorphic(interval_bigraph(0, 2), interval_bigraph(1, 3)));
}

TEST_CASE("isomorphism search agrees with the permutation oracle") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 60; ++trial) {
    auto g = oracle::random_graph(6, 0.5, rng, trial % 2 == 0);
    Graph h;
    if (trial % 3 == 0) {
      std::vector<Vertex> p{0, 1, 2, 3, 4, 5};
      std::shuffle(p.begin(), p.end(), rng);
      std::vector<Edge> e;
      for (auto [u, v] : g.edges()) e.emplace_back(p[u], p[v]);
      for (auto& x : e)
        if (x.first > x.second) std::swap(x.first, x.second);
      h = Graph::numbered(6, e);
    } else {
      h = oracle::random_graph(6, 0.5, rng, trial % 2 == 0);
    }
    CHECK(is_isomorphic(g, h).has_value() == oracle::isomorphic(g, h));
  }
}

TEST_CASE("times homotopy") {
  auto x = k2_bigraph();
  auto y = interval_bigraph(-1, 2);
  GraphHom inc{{at(y.graph(), "0"), at(y.graph(), "1")}};
  GraphHom shifted{{at(y.graph(), "0"), at(y.graph(), "-1")}};
  CHECK(times_homotopic(x, y, inc, shifted));

  // K2 x K3 has no dismantlable vertex, so the identity is isolated
  auto c = kronecker_cover(complete_graph(3)).bigraph;
  REQUIRE(find_dismantlable(c).empty());
  GraphHom id, rot;
  for (Vertex v = 0; v < 6; ++v) {
    id.map.push_back(v);
    rot.map.push_back((v / 3) * 3 + (v % 3 + 1) % 3);
  }
  REQUIRE(is_bigraph_hom(c, c, rot.map));
  CHECK_FALSE(times_homotopic(c, c, id, rot));
  CHECK_THROWS_AS(times_homotopic(c, c, id, GraphHom{{3, 4, 5, 0, 1, 2}}), InputError);
}

TEST_CASE("graph file round trip") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = oracle::random_graph(6, 0.4, rng, true);
    auto text = graph_to_string("G" + std::to_string(trial), g);
    auto f = parse_graph(text);
    CHECK(f.name == "G" + std::to_string(trial));
    CHECK(f.graph == g);
    CHECK_FALSE(f.colors);
    CHECK(graph_to_string(f.name, f.graph) == text);
  }
  auto x = kronecker_cover(cycle_graph(5)).bigraph;
  auto text = bigraph_to_string("K2xC5", x);
  auto f = parse_graph(text);
  CHECK(f.bigraph() == x);
  CHECK(bigraph_to_string(f.name, f.bigraph()) == text);
}

TEST_CASE("graph file errors") {
  CHECK_THROWS_AS(parse_graph("v a\n"), InputError);
  CHECK_THROWS_AS(parse_graph("graph g\nv a\ne a b\n"), InputError);
  CHECK_THROWS_AS(parse_graph("graph g\nv a\nv a\n"), InputError);
  CHECK_THROWS_AS(parse_graph("graph g\nv a c=0\nv b\n"), InputError);
  CHECK_THROWS_AS(parse_graph("graph g\nv a c=0\nv b c=0\ne a b\n"), InputError);
  CHECK_THROWS_AS(parse_graph("graph g\nv a c=2\n"), InputError);
  CHECK_THROWS_AS(parse_graph("graph g\nfoo\n"), InputError);
  CHECK_THROWS_AS(parse_graph("graph g\ngraph h\n"), InputError);
  CHECK_THROWS_AS(parse_graph("graph g\nv a\ne a\n"), InputError);
  auto f = parse_graph("# comment\ngraph g  # trailing\nv a\nv b\ne a b\ne b a\n");
  CHECK(f.graph.edge_count() == 1);
  CHECK_THROWS_AS(f.bigraph(), InputError);
}
