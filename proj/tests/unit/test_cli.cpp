#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "layoutjudge/cli.hpp"

using namespace layoutjudge;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

}  // namespace

TEST_CASE("gen writes a graph and its native layout") {
  TempDir dir("layoutjudge_cli_gen");
  const auto r = call({"gen", "--kind", "grid", "--rows", "4", "--cols", "4", "--seed", "1", "--out-graph",
                       dir / "g.txt", "--out-layout", dir / "l.txt"});
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "g.txt"));
  CHECK(fs::exists(dir / "l.txt"));
  CHECK(slurp(dir / "g.txt").rfind("16 24\n", 0) == 0);

  const auto torus = call({"gen", "--kind", "torus2", "--rows", "4", "--cols", "4", "--out-graph", dir / "t.txt",
                           "--out-layout", dir / "t_l.txt"});
  CHECK(torus.code == 1);
}

TEST_CASE("usage errors") {
  const auto r = call({"gen", "--kind", "grid", "--frobnicate", "3", "--out-graph", "x.txt"});
  CHECK(r.code == 1);
  CHECK(r.err.find("usage error") != std::string::npos);
  CHECK(r.err.find("--out-graph") != std::string::npos);
  CHECK(call({}).code == 1);
  CHECK(call({"teleport"}).code == 1);
  CHECK(call({"layout", "--algo", "spiral", "--graph", "g", "--out", "o"}).code == 1);
  const auto help = call({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("plot-rdf") != std::string::npos);
}

TEST_CASE("data errors") {
  TempDir dir("layoutjudge_cli_err");
  std::ofstream(dir / "g.txt") << "4 2\n0 1\n2 3\n";
  std::ofstream(dir / "l.txt") << "4\n0 0\n1 0\n2 0\n3 0\n";
  const auto r = call({"compare", "--method", "stress", "--graph", dir / "g.txt", "--layout-a", dir / "l.txt",
                       "--layout-b", dir / "l.txt"});
  CHECK(r.code == 2);
  CHECK(r.err.rfind("error[DisconnectedGraph]: ", 0) == 0);
  const auto missing = call({"layout", "--algo", "fdp", "--graph", dir / "nope.txt", "--out", dir / "o.txt"});
  CHECK(missing.code == 2);
  CHECK(missing.err.rfind("error[IoError]", 0) == 0);
}

TEST_CASE("compare, config files and recorded runs") {
  TempDir dir("layoutjudge_cli_run");
  REQUIRE(call({"gen", "--kind", "GRID", "--rows", "5", "--cols", "5", "--out-graph", dir / "g.txt", "--out-layout",
                dir / "n.txt"})
              .code == 0);
  REQUIRE(call({"layout", "--algo", "fdp", "--seed", "9", "--graph", dir / "g.txt", "--out", dir / "f.txt"}).code == 0);
  REQUIRE(call({"layout", "--algo", "uniform", "--seed", "2", "--graph", dir / "g.txt", "--out", dir / "u.txt"}).code ==
          0);
  const auto v = call({"compare", "--method", "stress", "--graph", dir / "g.txt", "--layout-a", dir / "n.txt",
                       "--layout-b", dir / "u.txt"});
  CHECK(v.code == 0);
  CHECK(v.out.rfind("verdict A score=-", 0) == 0);
  CHECK(call({"compare", "--method", "model", "--graph", dir / "g.txt", "--layout-a", dir / "n.txt", "--layout-b",
              dir / "u.txt"})
            .code == 1);

  // replaying the recorded options reproduces the output byte for byte
  const std::string first = slurp(dir / "f.txt");
  fs::rename(dir / "f.txt", dir / "f_old.txt");
  REQUIRE(call({"layout", "--config", dir / "f.txt.run.txt"}).code == 0);
  CHECK(slurp(dir / "f.txt") == first);

  std::ofstream(dir / "cfg.txt") << "# defaults\nalgo = stress\nseed=4\n";
  REQUIRE(call({"layout", "--config", dir / "cfg.txt", "--seed", "5", "--graph", dir / "g.txt", "--out",
                dir / "s.txt"})
              .code == 0);
  CHECK(slurp(dir / "s.txt.run.txt").find("seed=5") != std::string::npos);
  CHECK(slurp(dir / "s.txt").find("STRESS") != std::string::npos);

  const auto syn = call({"syndromes", "--graph", dir / "g.txt", "--layout", dir / "n.txt"});
  CHECK(syn.code == 0);
  CHECK(syn.out.find("\"RDF_LOCAL_512\"") != std::string::npos);
  const auto rdf = call({"plot-rdf", "--graph", dir / "g.txt", "--layout", dir / "n.txt", "--bins", "4"});
  CHECK(rdf.code == 0);
  CHECK(rdf.out.rfind("layout,syndrome,bin,lo,hi,fraction\nn,RDF_GLOBAL,0,", 0) == 0);
}

TEST_CASE("corpus, training and evaluation") {
  TempDir dir("layoutjudge_cli_corpus");
  const std::vector<std::string> build = {"corpus", "build", "--graphs", "6", "--max-n", "30", "--seed", "2",
                                          "--ladder", "0,0.5,1", "--out"};
  auto a = build;
  a.push_back(dir / "a");
  auto b = build;
  b.push_back(dir / "b");
  REQUIRE(call(a).code == 0);
  REQUIRE(call(b).code == 0);
  CHECK(slurp(dir / "a/manifest.txt") == slurp(dir / "b/manifest.txt"));
  CHECK(slurp(dir / "a/features.tsv") == slurp(dir / "b/features.tsv"));
  CHECK(slurp(dir / "a/manifest.txt").find("config ladder=0,0.5,1\n") != std::string::npos);

  REQUIRE(call({"train", "--corpus", dir / "a", "--out", dir / "m.txt", "--epochs", "5"}).code == 0);
  CHECK(fs::exists(dir / "m.txt.loss.tsv"));
  REQUIRE(call({"gen", "--kind", "grid", "--rows", "4", "--cols", "5", "--out-graph", dir / "g.txt", "--out-layout",
                dir / "n.txt"})
              .code == 0);
  REQUIRE(call({"layout", "--algo", "phantom", "--graph", dir / "g.txt", "--out", dir / "p.txt"}).code == 0);
  const auto m = call({"compare", "--method", "model", "--model", dir / "m.txt", "--graph", dir / "g.txt",
                       "--layout-a", dir / "n.txt", "--layout-b", dir / "p.txt"});
  CHECK(m.code == 0);
  CHECK(m.out.rfind("verdict ", 0) == 0);

  const std::vector<std::string> eval = {"eval",   "--corpus", dir / "a", "--rounds", "2",   "--epochs",
                                         "5",      "--methods", "model,oracle", "--csv"};
  auto e1 = eval;
  e1.push_back(dir / "e1.csv");
  auto e2 = eval;
  e2.push_back(dir / "e2.csv");
  const auto r1 = call(e1);
  REQUIRE(r1.code == 0);
  REQUIRE(call(e2).code == 0);
  CHECK(slurp(dir / "e1.csv") == slurp(dir / "e2.csv"));
  CHECK(r1.out.find("oracle") != std::string::npos);

  const auto bad = call({"ablate", "--corpus", dir / "a", "--group", "CURVATURE"});
  CHECK(bad.code == 2);
  CHECK(bad.err.rfind("error[UnknownGroup]", 0) == 0);
}
