#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "boxloop/certificates.hpp"
#include "boxloop/complexes.hpp"
#include "boxloop/graph_io.hpp"
#include "boxloop/homology.hpp"
#include "boxloop/loop_spaces.hpp"
#include "boxloop/presentation.hpp"
#include "boxloop/two_fundamental.hpp"
#include "boxloop/verify.hpp"

using namespace boxloop;

namespace {

enum Exit { ok = 0, check_failed = 1, usage = 2, budget = 3 };

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

GraphFile load_graph(const std::string& path) {
  std::istringstream in(slurp(path));
  return read_graph(in);
}

/// The bigraph a tower or bigraph construction runs on: a colored file is
/// used as is, a plain graph G becomes K2 x G with its deck involution.
struct BigraphInput {
  Bigraph x;
  std::optional<OddInvolution> alpha;
  std::optional<Graph> base_graph;
};

BigraphInput load_bigraph(const std::string& path) {
  auto f = load_graph(path);
  if (f.colors) {
    auto x = f.bigraph();
    auto alpha = detail::find_odd_involution(x);
    return {x, alpha, std::nullopt};
  }
  auto cover = kronecker_cover(f.graph);
  return {cover.bigraph, cover.deck, f.graph};
}

std::string first_tag(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string tag;
    if (ls >> tag) return tag;
  }
  return "";
}

/// A complex file, or a poset file read as its order complex.
SimplicialComplex load_complex(const std::string& path) {
  auto text = slurp(path);
  std::istringstream in(text);
  auto tag = first_tag(text);
  if (tag == "el") return order_complex(read_poset(in));
  if (tag == "facet" || tag.empty()) return read_complex(in);
  throw InputError(path + " is neither a complex nor a poset file");
}

Vertex find_vertex(const Graph& g, const std::string& name) {
  auto v = g.find(name);
  if (!v) throw InputError("unknown vertex " + name);
  return *v;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw InputError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void banner(const std::string& command, const std::vector<std::pair<std::string, std::string>>& config) {
  std::cerr << "# boxloop " << command;
  for (const auto& [k, v] : config) std::cerr << " " << k << "=" << v;
  std::cerr << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Box complexes, loop-space towers and claim checks for graphs and bigraphs"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  // build
  std::string build_kind, build_input, build_target, build_out;
  std::size_t cap = default_hom_cap;
  auto* build = app.add_subcommand("build", "Construct a poset or complex file");
  build->add_option("kind", build_kind, "box|boxb|hom|nbhd|clique|order|core")
      ->required()
      ->check(CLI::IsMember({"box", "boxb", "hom", "nbhd", "clique", "order", "core"}));
  build->add_option("input", build_input, "graph, bigraph or poset file")->required();
  build->add_option("--target", build_target, "target graph for hom");
  build->add_option("-o,--output", build_out, "output file (default stdout)");
  build->add_option("--cap", cap, "element cap")->capture_default_str();

  // inv
  std::string inv_kind, inv_input, inv_base;
  int max_dim = 3;
  auto* inv = app.add_subcommand("inv", "Invariants of a complex or poset file");
  inv->add_option("kind", inv_kind, "homology|pi0|pi1")->required()->check(CLI::IsMember({"homology", "pi0", "pi1"}));
  inv->add_option("input", inv_input, "complex or poset file")->required();
  inv->add_option("--max-dim", max_dim, "top homology dimension")->capture_default_str();
  inv->add_option("--base", inv_base, "base vertex for pi1 (default: first vertex)");

  // tower
  std::string tower_kind, tower_graph, tower_base, tower_neighbor, parity = "even", tower_out;
  StabilizationOptions sopt;
  std::size_t level_cap = default_level_cap;
  auto* tower = app.add_subcommand("tower", "Truncated loop-space tower with a stabilization report");
  tower->add_option("kind", tower_kind, "omega|free|twisted|cycle")
      ->required()
      ->check(CLI::IsMember({"omega", "free", "twisted", "cycle"}));
  tower->add_option("--graph", tower_graph, "graph or bigraph file")->required();
  tower->add_option("--levels", sopt.max_level, "highest level")->capture_default_str();
  tower->add_option("--window", sopt.window, "stabilization window")->capture_default_str();
  int tower_dim = -1;
  tower->add_option("--dim", tower_dim, "homology dimension per component (0: components only; default 0 for omega, 1 otherwise)");
  tower->add_option("--base", tower_base, "omega: base vertex (default: first)");
  tower->add_option("--neighbor", tower_neighbor, "omega: neighbour of the base (default: smallest)");
  tower->add_option("--parity", parity, "cycle: even|odd")->check(CLI::IsMember({"even", "odd"}))->capture_default_str();
  tower->add_option("--level-cap", level_cap, "vertex cap per level")->capture_default_str();
  tower->add_option("--component-cap", sopt.homology_vertex_cap, "largest component given homology")
      ->capture_default_str();
  tower->add_flag("!--no-early-stop", sopt.stop_when_stable, "build every level even after stabilizing");
  tower->add_option("-o,--output", tower_out, "output file (default stdout)");

  // loop
  std::string loop_kind, loop_graph, loop_a, loop_b, loop_base;
  std::size_t loop_len = 10, loop_level = 0;
  bool reflexive = false, loopless = false;
  auto* loop = app.add_subcommand("loop", "Based loops modulo the two moves");
  loop->add_option("kind", loop_kind, "equiv|census")->required()->check(CLI::IsMember({"equiv", "census"}));
  loop->add_option("--graph", loop_graph, "graph file")->required();
  loop->add_option("--from", loop_a, "equiv: first loop literal `loop <graph> v0 ... vn`");
  loop->add_option("--to", loop_b, "equiv: second loop literal");
  loop->add_option("--base", loop_base, "census: base vertex (default: first)");
  loop->add_option("--max-len", loop_len, "longest loop considered")->capture_default_str();
  loop->add_option("--level", loop_level, "census: omega level (at least max-len/2)")->capture_default_str();
  auto* refl = loop->add_flag("--move2-reflexive", reflexive, "move 2 along a reflexive path");
  loop->add_flag("--move2-loopless", loopless, "move 2 along a loopless path (default)")->excludes(refl);

  // verify
  std::string manifest, claims = "all", evidence_dir, verify_out;
  SuiteOptions vopt;
  bool v_reflexive = false, v_loopless = false;
  auto* verify = app.add_subcommand("verify", "Run the claim checks over a corpus manifest");
  verify->add_option("--corpus", manifest, "manifest file")->required();
  verify->add_option("--claims", claims, "all or a comma-separated list of claim ids")->capture_default_str();
  verify->add_option("--jobs", vopt.jobs, "worker threads")->capture_default_str();
  verify->add_option("--evidence-dir", evidence_dir, "write one evidence file per check here");
  verify->add_option("-o,--output", verify_out, "report file (default stdout)");
  verify->add_option("--census-length", vopt.budgets.census_length, "loop-census: longest loop")->capture_default_str();
  verify->add_option("--census-cap", vopt.budgets.census_level_cap, "loop-census: vertex cap per level")
      ->capture_default_str();
  verify->add_option("--tower-levels", vopt.budgets.tower_levels, "loop-census: omega tower levels")
      ->capture_default_str();
  verify->add_option("--cycle-levels", vopt.budgets.cycle_levels, "cycle-hom-loops: levels past the first")
      ->capture_default_str();
  verify->add_option("--tower-cap", vopt.budgets.tower_cap, "vertex cap per tower level")->capture_default_str();
  verify->add_option("--quillen-vertices", vopt.budgets.quillen_vertex_cap, "endpoint-quillen: largest bigraph")
      ->capture_default_str();
  verify->add_option("--snf-samples", vopt.budgets.snf_samples, "snf-postconditions: random matrices")
      ->capture_default_str();
  verify->add_option("--seed", vopt.budgets.seed, "snf-postconditions: seed")->capture_default_str();
  verify->add_option("--max-dim", vopt.budgets.max_dim, "homology dimensions compared")->capture_default_str();
  auto* vrefl = verify->add_flag("--move2-reflexive", v_reflexive, "loop-census: reflexive move 2");
  verify->add_flag("--move2-loopless", v_loopless, "loop-census: loopless move 2 (default)")->excludes(vrefl);

  // convert
  std::string conv_kind, conv_input, conv_out;
  auto* convert = app.add_subcommand("convert", "Derived graph files");
  convert->add_option("kind", conv_kind, "cover|quotient|fold|exp")
      ->required()
      ->check(CLI::IsMember({"cover", "quotient", "fold", "exp"}));
  convert->add_option("input", conv_input, "graph or bigraph file")->required();
  convert->add_option("-o,--output", conv_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? Exit::ok : Exit::usage;
  }

  try {
    if (*build) {
      banner("build", {{"kind", build_kind}, {"input", build_input}, {"cap", std::to_string(cap)}});
      Output out(build_out);
      auto& os = out.stream();
      if (build_kind == "box") {
        write_poset(os, box_complex(load_graph(build_input).graph, cap).poset);
      } else if (build_kind == "boxb") {
        write_poset(os, box_complex_bigraph(load_graph(build_input).bigraph(), nullptr, cap).poset);
      } else if (build_kind == "hom") {
        if (build_target.empty()) throw InputError("hom needs --target");
        write_poset(os, hom_complex(load_graph(build_input).graph, load_graph(build_target).graph, cap).poset);
      } else if (build_kind == "nbhd") {
        write_complex(os, neighborhood_complex(load_graph(build_input).graph));
      } else if (build_kind == "clique") {
        write_complex(os, clique_complex(load_graph(build_input).graph));
      } else if (build_kind == "order") {
        std::istringstream in(slurp(build_input));
        write_complex(os, order_complex(read_poset(in)));
      } else {
        std::istringstream in(slurp(build_input));
        write_poset(os, stong_core(read_poset(in)).core);
      }
      return Exit::ok;
    }

    if (*inv) {
      banner("inv", {{"kind", inv_kind}, {"input", inv_input}, {"max-dim", std::to_string(max_dim)}});
      auto k = load_complex(inv_input);
      if (inv_kind == "homology") {
        std::cout << homology(k, max_dim).to_string();
      } else if (inv_kind == "pi0") {
        std::cout << "pi0: " << homology(k, 0).components() << "\n";
      } else {
        if (k.empty()) throw InputError("empty complex has no basepoint");
        Vertex base = 0;
        if (!inv_base.empty()) {
          auto it = std::find(k.names().begin(), k.names().end(), inv_base);
          if (it == k.names().end()) throw InputError("unknown base vertex " + inv_base);
          base = static_cast<Vertex>(it - k.names().begin());
        }
        auto p = edge_path_presentation(k, base);
        std::cout << p.to_string() << "# abelianization " << abelianization(p).to_string() << "\n";
      }
      return Exit::ok;
    }

    if (*tower) {
      sopt.dim = tower_dim >= 0 ? tower_dim : (tower_kind == "omega" ? 0 : 1);
      banner("tower", {{"kind", tower_kind},
                       {"graph", tower_graph},
                       {"levels", std::to_string(sopt.max_level)},
                       {"window", std::to_string(sopt.window)},
                       {"dim", std::to_string(sopt.dim)},
                       {"parity", parity},
                       {"level-cap", std::to_string(level_cap)},
                       {"component-cap", std::to_string(sopt.homology_vertex_cap)},
                       {"early-stop", sopt.stop_when_stable ? "yes" : "no"}});
      StabilizationReport rep;
      if (tower_kind == "cycle") {
        auto f = load_graph(tower_graph);
        rep = stabilize(cycle_tower(f.graph, parity == "even", level_cap), sopt);
      } else {
        auto in = load_bigraph(tower_graph);
        if (tower_kind == "omega") {
          BasePair base;
          if (in.base_graph) {
            Vertex v = tower_base.empty() ? 0 : find_vertex(*in.base_graph, tower_base);
            std::optional<Vertex> w;
            if (!tower_neighbor.empty()) w = find_vertex(*in.base_graph, tower_neighbor);
            base = cover_basepoint(*in.base_graph, v, w);
          } else {
            const Graph& g = in.x.graph();
            base.x0 = tower_base.empty() ? in.x.part(0).at(0) : find_vertex(g, tower_base);
            if (!tower_neighbor.empty()) base.x1 = find_vertex(g, tower_neighbor);
            else if (!g.neighbors(base.x0).empty()) base.x1 = g.neighbors(base.x0).front();
            else throw InputError("base vertex is isolated");
          }
          rep = stabilize(omega_tower(in.x, base, level_cap), sopt);
        } else if (tower_kind == "free") {
          rep = stabilize(free_loop_tower(in.x, level_cap), sopt);
        } else {
          if (!in.alpha) throw InputError("twisted tower needs an odd involution; none found");
          rep = stabilize(twisted_loop_tower(in.x, *in.alpha, level_cap), sopt);
        }
      }
      Output out(tower_out);
      out.stream() << rep.to_string();
      if (rep.budget_note) std::cerr << "budget: " << *rep.budget_note << "\n";
      return rep.budget_note && !rep.stable_at ? Exit::budget : Exit::ok;
    }

    if (*loop) {
      Move2Mode mode = reflexive ? Move2Mode::reflexive : Move2Mode::loopless;
      banner("loop", {{"kind", loop_kind},
                      {"graph", loop_graph},
                      {"max-len", std::to_string(loop_len)},
                      {"move2", reflexive ? "reflexive" : "loopless"}});
      auto f = load_graph(loop_graph);
      if (loop_kind == "equiv") {
        if (loop_a.empty() || loop_b.empty()) throw InputError("equiv needs --from and --to");
        auto la = parse_loop_literal(loop_a), lb = parse_loop_literal(loop_b);
        for (const auto* l : {&la, &lb})
          if (l->graph != f.name) throw InputError("loop literal names graph " + l->graph + ", file has " + f.name);
        auto a = resolve_loop(la, f.graph), b = resolve_loop(lb, f.graph);
        auto q = equivalent_loops(a, b, loop_len, mode);
        std::cout << "verdict: " << to_string(q.verdict) << "\n";
        for (const auto& w : q.witness) std::cout << w << "\n";
        if (!q.note.empty()) std::cout << "# " << q.note << "\n";
        return Exit::ok;
      }
      Vertex v = loop_base.empty() ? 0 : find_vertex(f.graph, loop_base);
      auto census = pi2_even_classes(f.graph, v, loop_len, loop_level);
      std::size_t classes = 0;
      loop_move_classes(f.graph, v, loop_len, mode, &classes);
      std::cout << census.to_string() << "move classes: " << classes << "\n";
      return Exit::ok;
    }

    if (*verify) {
      if (claims != "all") {
        std::stringstream ss(claims);
        for (std::string id; std::getline(ss, id, ',');)
          if (!id.empty()) vopt.claims.insert(id);
      }
      if (!evidence_dir.empty()) vopt.evidence_dir = evidence_dir;
      vopt.budgets.move2 = v_reflexive ? Move2Mode::reflexive : Move2Mode::loopless;
      const auto& b = vopt.budgets;
      banner("verify", {{"corpus", manifest},
                        {"claims", claims},
                        {"jobs", std::to_string(vopt.jobs)},
                        {"census-length", std::to_string(b.census_length)},
                        {"census-cap", std::to_string(b.census_level_cap)},
                        {"tower-levels", std::to_string(b.tower_levels)},
                        {"cycle-levels", std::to_string(b.cycle_levels)},
                        {"tower-cap", std::to_string(b.tower_cap)},
                        {"quillen-vertices", std::to_string(b.quillen_vertex_cap)},
                        {"snf-samples", std::to_string(b.snf_samples)},
                        {"seed", std::to_string(b.seed)},
                        {"max-dim", std::to_string(b.max_dim)},
                        {"move2", v_reflexive ? "reflexive" : "loopless"}});
      auto corpus = read_manifest(manifest);
      auto rep = run_suite(corpus, vopt);
      Output out(verify_out);
      out.stream() << rep.to_string();
      return rep.exit_code();
    }

    if (*convert) {
      banner("convert", {{"kind", conv_kind}, {"input", conv_input}});
      auto f = load_graph(conv_input);
      Output out(conv_out);
      auto& os = out.stream();
      if (conv_kind == "cover") {
        write_bigraph(os, "K2x" + f.name, kronecker_cover(f.graph).bigraph);
      } else if (conv_kind == "quotient") {
        auto x = f.bigraph();
        auto alpha = detail::find_odd_involution(x);
        if (!alpha) throw InputError(f.name + " has no odd involution");
        write_graph(os, f.name + "_quotient", quotient_by_involution(x, *alpha).graph);
      } else if (conv_kind == "fold") {
        if (f.colors) {
          auto res = fold_reduce(f.bigraph());
          for (const auto& s : res.log) os << "# fold " << s.vertex << " into " << s.witness << "\n";
          write_bigraph(os, f.name + "_core", res.core);
        } else {
          auto res = fold_reduce(f.graph);
          for (const auto& s : res.log) os << "# fold " << s.vertex << " into " << s.witness << "\n";
          write_graph(os, f.name + "_core", res.core);
        }
      } else {
        auto exp = exponential_bigraph(k2_bigraph(), f.bigraph());
        write_graph(os, f.name + "_exp", exp.graph());
      }
      return Exit::ok;
    }
  } catch (const SizeError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return Exit::budget;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Exit::usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Exit::usage;
  }
  return Exit::usage;
}
