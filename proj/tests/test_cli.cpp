#include <catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

const std::string cli = BOXLOOP_CLI;
const std::string corpus = BOXLOOP_CORPUS;

struct Run {
  int code = -1;
  std::string out, err;
};

fs::path scratch() {
  static fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("boxloop_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

Run run(const std::string& args) {
  auto out = scratch() / "stdout", err = scratch() / "stderr";
  std::string cmd = cli + " " + args + " >" + out.string() + " 2>" + err.string();
  int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out);
  r.err = read_file(err);
  return r;
}

std::size_t count_lines(const std::string& text, const std::string& prefix) {
  std::istringstream in(text);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) n += line.rfind(prefix, 0) == 0;
  return n;
}

bool contains(const std::string& text, const std::string& needle) { return text.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("build writes posets and complexes") {
  auto box = run("build box " + corpus + "/k3.g");
  CHECK(box.code == 0);
  CHECK(count_lines(box.out, "el ") == 12);
  CHECK(contains(box.err, "# boxloop build"));

  auto nbhd = run("build nbhd " + corpus + "/k3.g");
  CHECK(nbhd.code == 0);
  CHECK(nbhd.out == "facet 0 1\nfacet 0 2\nfacet 1 2\n");

  auto clique = run("build clique " + corpus + "/k3.g");
  CHECK(clique.code == 0);
  CHECK(count_lines(clique.out, "facet") == 0);

  CHECK(run("build hom " + corpus + "/k2.g").code == 2);
  CHECK(run("build hom " + corpus + "/k2.g --target " + corpus + "/k3.g").code == 0);
}

TEST_CASE("written files are read back") {
  auto poset = scratch() / "bk3.poset";
  CHECK(run("build box " + corpus + "/k3.g -o " + poset.string()).code == 0);
  auto h = run("inv homology " + poset.string() + " --max-dim 2");
  CHECK(h.code == 0);
  CHECK(contains(h.out, "H_0: Z\nH_1: Z\nH_2: 0"));

  auto core = scratch() / "core.poset";
  CHECK(run("build core " + poset.string() + " -o " + core.string()).code == 0);
  CHECK(count_lines(read_file(core), "el ") == 12);

  auto complex = scratch() / "nk3.complex";
  CHECK(run("build nbhd " + corpus + "/k3.g -o " + complex.string()).code == 0);
  auto order = scratch() / "bk3.complex";
  CHECK(run("build order " + poset.string() + " -o " + order.string()).code == 0);
  CHECK(run("inv homology " + order.string()).out == run("inv homology " + complex.string()).out);
  CHECK(run("build order " + complex.string()).code == 2);
}

TEST_CASE("invariants of small complexes") {
  auto tri = scratch() / "tri.complex";
  write_file(tri, "facet 0 1\nfacet 1 2\nfacet 0 2\n");
  auto h = run("inv homology " + tri.string() + " --max-dim 1");
  CHECK(h.code == 0);
  CHECK(h.out == "H_0: Z\nH_1: Z\n");

  auto two = scratch() / "two.complex";
  write_file(two, "facet a\nfacet b\n");
  auto p0 = run("inv pi0 " + two.string());
  CHECK(p0.code == 0);
  CHECK(p0.out == "pi0: 2\n");

  auto disc = scratch() / "disc.complex";
  write_file(disc, "facet 0 1 2\nfacet 0 2 3\n");
  auto p1 = run("inv pi1 " + disc.string());
  CHECK(p1.code == 0);
  CHECK(contains(p1.out, "trivial"));

  auto circle = run("inv pi1 " + tri.string());
  CHECK(contains(circle.out, "# abelianization Z"));
}

TEST_CASE("towers report levels and a verdict") {
  auto k4 = run("tower omega --graph " + corpus + "/k4.g --levels 4");
  CHECK(k4.code == 0);
  CHECK(contains(k4.out, "verdict: stable@"));
  CHECK(contains(k4.out, "components=1"));

  auto cyc = run("tower cycle --graph " + corpus + "/k3.g --parity even --levels 5");
  CHECK(cyc.code == 0);
  CHECK(contains(cyc.out, "level 4: components=3; H(comp 0)=Z,Z; H(comp 1)=Z,Z; H(comp 2)=Z,Z"));

  auto zero = run("tower omega --graph " + corpus + "/k4.g --levels 0");
  CHECK(zero.code == 0);
  CHECK(count_lines(zero.out, "level ") == 1);
  CHECK(contains(zero.out, "verdict: not-stable(budget=0)"));

  auto capped = run("tower omega --graph " + corpus + "/k4.g --levels 4 --level-cap 10");
  CHECK(capped.code == 3);
  CHECK(contains(capped.err, "budget:"));

  auto free = run("tower free --graph " + corpus + "/k3.g --levels 2");
  CHECK(free.code == 0);
  CHECK(count_lines(free.out, "level ") == 3);

  CHECK(run("tower omega --graph " + corpus + "/k4.g --base 9").code == 2);
}

TEST_CASE("loop commands") {
  auto eq = run("loop equiv --graph " + corpus + "/c5.g --from 'loop C5 0 1 0' --to 'loop C5 0 4 0'");
  CHECK(eq.code == 0);
  CHECK(contains(eq.out, "verdict: equivalent"));

  auto parity = run("loop equiv --graph " + corpus + "/k3.g --from 'loop K3 0 1 2 0' --to 'loop K3 0'");
  CHECK(parity.code == 0);
  CHECK(contains(parity.out, "verdict: inequivalent"));

  auto census = run("loop census --graph " + corpus + "/c5.g --max-len 10");
  CHECK(census.code == 0);
  CHECK(contains(census.out, "components_hit=3"));

  CHECK(run("loop equiv --graph " + corpus + "/c5.g --from 'loop C5 0 2 0' --to 'loop C5 0'").code == 2);
  CHECK(run("loop equiv --graph " + corpus + "/c5.g --from 'loop C5 0' --to 'loop C5 0' --move2-reflexive "
            "--move2-loopless")
            .code == 2);
}

TEST_CASE("verify runs selected claims") {
  auto manifest = scratch() / "k3.manifest";
  write_file(manifest, fs::relative(corpus + "/k3.g", scratch()).string() + "\n");
  auto one = run("verify --corpus " + manifest.string() + " --claims box-iso");
  CHECK(one.code == 0);
  CHECK(one.out == "CHECK box-iso K3 pass box-iso__K3.txt\nsummary: pass=1 fail=0 unknown=0\n");

  auto evidence = scratch() / "evidence";
  auto two = run("verify --corpus " + manifest.string() + " --claims box-iso,box-nbhd --evidence-dir " +
                 evidence.string());
  CHECK(two.code == 0);
  CHECK(count_lines(two.out, "CHECK ") == 2);
  CHECK(fs::exists(evidence / "box-nbhd__K3.txt"));

  auto budget = run("verify --corpus " + manifest.string() + " --claims loop-census --census-cap 3 --tower-cap 3");
  CHECK(budget.code == 3);
}

TEST_CASE("verify rejects bad input") {
  auto empty = scratch() / "empty.manifest";
  write_file(empty, "# nothing here\n");
  CHECK(run("verify --corpus " + empty.string()).code == 2);

  auto missing = scratch() / "missing.manifest";
  write_file(missing, "no_such_graph.g\n");
  CHECK(run("verify --corpus " + missing.string()).code == 2);

  auto twice = scratch() / "twice.manifest";
  auto k3 = fs::relative(corpus + "/k3.g", scratch()).string();
  write_file(twice, k3 + "\n" + k3 + "\n");
  CHECK(run("verify --corpus " + twice.string()).code == 2);

  auto manifest = scratch() / "k3only.manifest";
  write_file(manifest, k3 + "\n");
  CHECK(run("verify --corpus " + manifest.string() + " --claims no-such-claim").code == 2);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run("").code == 2);
  CHECK(run("build box").code == 2);
  CHECK(run("build box " + corpus + "/k3.g --no-such-flag").code == 2);
  CHECK(run("build sphere " + corpus + "/k3.g").code == 2);
  CHECK(run("inv homology /nonexistent/file").code == 2);
  auto bad = scratch() / "bad.g";
  write_file(bad, "graph X\nv a\ne a b\n");
  CHECK(run("build box " + bad.string()).code == 2);
  CHECK(run("--help").code == 0);
}

TEST_CASE("convert between graph forms") {
  auto cover = scratch() / "cover.g";
  CHECK(run("convert cover " + corpus + "/k3.g -o " + cover.string()).code == 0);
  auto quotient = run("convert quotient " + cover.string());
  CHECK(quotient.code == 0);
  CHECK(count_lines(quotient.out, "v ") == 3);
  CHECK(count_lines(quotient.out, "e ") == 3);

  auto fold = run("convert fold " + corpus + "/tree_p4.g");
  CHECK(fold.code == 0);
  CHECK(count_lines(fold.out, "v ") == 2);
}
