// Runs the nine acceptance criteria and prints one line per criterion.
// The exit status is nonzero when a criterion fails that is expected to pass;
// criterion 7 is reported but known to be refuted at the truncated level.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "boxloop/verify.hpp"
#include "oracles.hpp"

using namespace boxloop;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string id, title;
  std::function<Outcome()> run;
  bool known_failure = false;
  std::string known_reason;
};

const std::string corpus_dir = BOXLOOP_CORPUS;

Graph load(const std::string& file) {
  std::ifstream in(corpus_dir + "/" + file);
  if (!in) throw InputError("cannot open " + file);
  return read_graph(in).graph;
}

const std::vector<std::string> small_corpus{"k2.g", "k3.g", "k4.g", "k5.g", "c4.g", "c5.g", "c6.g", "c7.g"};

/// Expected homology of S^d in dims 0..3, as compact text.
std::string sphere(int d) {
  std::string s;
  for (int k = 0; k <= 3; ++k) {
    std::string g = "0";
    if (d == 0 && k == 0) g = "Z^2";
    else if (k == 0 || k == d) g = "Z";
    s += (k ? "," : "") + g;
  }
  return s;
}

Outcome a1() {
  Outcome o{true, ""};
  for (const auto& f : small_corpus) {
    auto r = check_box_iso(load(f), f);
    if (r.status != CheckStatus::pass) o.pass = false, o.detail += f + " ";
  }
  if (o.pass) o.detail = "8 graphs, equivariant isomorphisms";
  return o;
}

Outcome a2() {
  Outcome o{true, ""};
  for (const auto& f : small_corpus) {
    auto r = check_box_nbhd(load(f), f);
    if (r.status != CheckStatus::pass) o.pass = false, o.detail += f + " ";
  }
  for (std::size_t n = 2; n <= 5; ++n) {
    auto h = poset_homology(box_complex(complete_graph(n)).poset, 3).compact();
    if (h != sphere(static_cast<int>(n) - 2)) o.pass = false, o.detail += "B(K" + std::to_string(n) + ")=" + h + " ";
  }
  if (o.pass) o.detail = "8 graphs agree; B(K_n) is S^(n-2) for n=2..5";
  return o;
}

Outcome a3() {
  std::vector<std::pair<std::string, Bigraph>> xs;
  xs.emplace_back("K2", k2_bigraph());
  xs.emplace_back("K2xK3", kronecker_cover(complete_graph(3)).bigraph);
  xs.emplace_back("K2xC5", kronecker_cover(cycle_graph(5)).bigraph);
  xs.emplace_back("L0_3", interval_bigraph(0, 3));
  xs.emplace_back("Lm2_3", interval_bigraph(-2, 3));
  Outcome o{true, ""};
  for (const auto& [name, x] : xs) {
    auto r = check_clique_exp_box(x, name);
    if (r.status != CheckStatus::pass) o.pass = false, o.detail += name + " ";
  }
  if (o.pass) o.detail = "5 bigraphs agree";
  return o;
}

Outcome a4() {
  Outcome o{true, ""};
  std::size_t n = 0;
  for (const auto& e : read_manifest(corpus_dir + "/manifest")) {
    Bigraph x = e.is_bigraph() ? e.file.bigraph() : kronecker_cover(e.file.graph).bigraph;
    auto r = check_fold_invariance(x, e.file.name);
    ++n;
    if (r.status != CheckStatus::pass) o.pass = false, o.detail += e.file.name + " ";
  }
  if (o.pass) o.detail = std::to_string(n) + " bigraphs, every single fold checked";
  return o;
}

Outcome a5() {
  Outcome o{true, ""};
  auto k4 = complete_graph(4);
  auto cover = kronecker_cover(k4);
  StabilizationOptions opt;
  opt.max_level = 6;
  opt.dim = 0;
  auto rep = stabilize(omega_tower(cover.bigraph, cover_basepoint(k4, 0)), opt);
  bool tower_ok = rep.stable_at && rep.levels.back().components.size() == 1;
  bool pi1_trivial = edge_path_presentation(neighborhood_complex(k4), 0).trivial();
  if (!tower_ok) o.pass = false, o.detail += "K4 tower not stable with one component; ";
  if (!pi1_trivial) o.pass = false, o.detail += "pi1(N(K4)) not trivial; ";

  auto c5 = cycle_graph(5);
  auto census = check_loop_census(c5, 0, "C5");
  if (census.status != CheckStatus::pass) o.pass = false, o.detail += "C5 census " + std::string(to_string(census.status)) + "; ";
  auto h = homology(neighborhood_complex(c5), 1);
  if (h.group_string(1) != "Z") o.pass = false, o.detail += "H1(N(C5))=" + h.group_string(1) + "; ";
  if (o.pass)
    o.detail = "K4 omega tower stable at level " + std::to_string(*rep.stable_at) +
               " with 1 component, pi1 trivial; C5 census matches, H1=Z";
  return o;
}

/// Components of Hom(C_m, G) under the cyclic cross condition, from every
/// vertex sequence and a quadratic adjacency scan.
std::size_t brute_cycle_components(const Graph& g, std::size_t m) {
  std::vector<std::vector<Vertex>> homs;
  std::size_t total = 1;
  for (std::size_t i = 0; i < m; ++i) total *= g.size();
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<Vertex> f(m);
    std::size_t c = code;
    for (std::size_t i = 0; i < m; ++i) f[i] = static_cast<Vertex>(c % g.size()), c /= g.size();
    bool ok = true;
    for (std::size_t i = 0; i < m && ok; ++i) ok = g.adjacent(f[i], f[(i + 1) % m]);
    if (ok) homs.push_back(f);
  }
  std::vector<std::size_t> parent(homs.size());
  for (std::size_t i = 0; i < homs.size(); ++i) parent[i] = i;
  std::function<std::size_t(std::size_t)> root = [&](std::size_t x) { return parent[x] == x ? x : parent[x] = root(parent[x]); };
  for (std::size_t a = 0; a < homs.size(); ++a)
    for (std::size_t b = a + 1; b < homs.size(); ++b) {
      bool adj = true;
      for (std::size_t i = 0; i < m && adj; ++i)
        adj = g.adjacent(homs[a][i], homs[b][(i + 1) % m]) && g.adjacent(homs[b][i], homs[a][(i + 1) % m]);
      if (adj) parent[root(a)] = root(b);
    }
  std::set<std::size_t> roots;
  for (std::size_t i = 0; i < homs.size(); ++i) roots.insert(root(i));
  return roots.size();
}

Outcome a6() {
  Outcome o{true, ""};
  auto k3 = complete_graph(3);
  VerifyBudgets b;
  b.cycle_levels = 3;  // r = 2..5 even, r = 1..4 odd
  for (bool even : {true, false}) {
    auto r = check_cycle_hom_loops(k3, even, even ? "K3/even" : "K3/odd", b);
    if (r.status != CheckStatus::pass) o.pass = false, o.detail += std::string(even ? "even" : "odd") + " tower; ";
    StabilizationOptions opt;
    opt.max_level = 3;
    opt.dim = 0;
    opt.stop_when_stable = false;
    auto rep = stabilize(cycle_tower(k3, even), opt);
    for (const auto& l : rep.levels) {
      std::size_t m = even ? 2 * l.label : 2 * l.label + 1;
      std::size_t homs = oracle::count_cycle_homs(k3, m), comps = brute_cycle_components(k3, m);
      if (l.vertices != homs || l.components.size() != comps) {
        o.pass = false;
        o.detail += "C" + std::to_string(m) + " counts " + std::to_string(l.vertices) + "/" +
                    std::to_string(l.components.size()) + " vs " + std::to_string(homs) + "/" + std::to_string(comps) + "; ";
      }
    }
  }
  if (o.pass) o.detail = "stable components are circles; counts for C_4..C_10 and C_3..C_9 match brute force";
  return o;
}

Outcome a7() {
  auto cover = kronecker_cover(complete_graph(3));
  auto m = endpoint_poset_map(cover.bigraph, 1, &cover.deck);
  PosetMap pm{&m.source, &m.target, m.map};
  auto plain = quillen_b_check(pm, false);
  auto fixed = quillen_b_check(pm, true, &*m.source_action, &*m.target_action);
  Outcome o;
  o.pass = plain.status != Verdict::refuted && fixed.status != Verdict::refuted;
  o.detail = std::string("fiber pairs ") + to_string(plain.status) + ", fixed-point mode " + to_string(fixed.status);
  if (plain.status == Verdict::refuted && !plain.evidence.empty()) o.detail += "; " + plain.evidence.front();
  return o;
}

Outcome a8() {
  Outcome o{true, ""};
  auto snf = check_snf_postconditions(1000, VerifyBudgets{}.seed);
  if (snf.status != CheckStatus::pass) o.pass = false, o.detail += snf.evidence.front() + "; ";
  SuiteOptions opt;
  opt.claims = {"abelianization-h1"};
  auto rep = run_suite(read_manifest(corpus_dir + "/manifest"), opt);
  if (rep.count(CheckStatus::pass) != rep.results.size()) o.pass = false, o.detail += "abelianization mismatch; ";
  if (o.pass) o.detail = "1000 SNF samples; abelianization equals H1 on " + std::to_string(rep.results.size()) + " instances";
  return o;
}

std::string slurp_dir(const std::filesystem::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    std::ifstream in(e.path());
    std::ostringstream s;
    s << in.rdbuf();
    files[e.path().filename().string()] = s.str();
  }
  std::string out;
  for (const auto& [k, v] : files) out += k + "\n" + v;
  return out;
}

std::string run_verify(const std::filesystem::path& evidence) {
  std::string cmd = std::string(BOXLOOP_CLI) + " verify --corpus " + corpus_dir + "/manifest --evidence-dir " +
                    evidence.string() + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) throw std::runtime_error("cannot run the verify command");
  std::string out;
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, p)) > 0;) out.append(buf, n);
  pclose(p);
  return out;
}

Outcome a9() {
  auto root = std::filesystem::temp_directory_path() / ("boxloop_acceptance_" + std::to_string(::getpid()));
  std::filesystem::remove_all(root);
  auto first = run_verify(root / "a"), second = run_verify(root / "b");
  bool reports = !first.empty() && first == second;
  bool evidence = slurp_dir(root / "a") == slurp_dir(root / "b");
  std::filesystem::remove_all(root);
  Outcome o{reports && evidence, ""};
  o.detail = std::string("reports ") + (reports ? "identical" : "differ") + ", evidence files " +
             (evidence ? "identical" : "differ");
  return o;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {"A1", "box complex isomorphism", a1},
      {"A2", "box and neighborhood complex homology", a2},
      {"A3", "clique complex of the exponential vs box complex", a3},
      {"A4", "fold invariance", a4},
      {"A5", "omega tower and loop census", a5},
      {"A6", "cycle towers of K3", a6},
      {"A7", "endpoint map fiber condition at level 1", a7, true,
       "known: the level-1 truncation of K2xK3 is refuted; the claim concerns the colimit"},
      {"A8", "algebra kernel", a8},
      {"A9", "determinism of verify", a9},
  };
  int unexpected = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream line;
    line << c.id << " " << (o.pass ? "PASS" : "FAIL") << " " << c.title << " (" << o.detail << ") ";
    line.setf(std::ios::fixed);
    line.precision(1);
    line << secs << "s";
    if (!o.pass && c.known_failure) line << " [" << c.known_reason << "]";
    std::cout << line.str() << std::endl;
    if (!o.pass && !c.known_failure) ++unexpected;
  }
  return unexpected ? 1 : 0;
}
