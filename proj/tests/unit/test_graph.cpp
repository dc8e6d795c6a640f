#include <cmath>

#include "doctest.h"
#include "layoutjudge/error.hpp"
#include "layoutjudge/generators.hpp"
#include "layoutjudge/graph.hpp"
#include "../support/oracles.hpp"

using namespace layoutjudge;

namespace {

Graph path_graph(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph(n, edges);
}

Graph complete_graph(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return Graph(n, edges);
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kIoError;
}

}  // namespace

TEST_CASE("graph construction normalizes and validates edges") {
  const Graph g(3, {{2, 0}, {1, 2}});
  CHECK(g.edges()[0] == Edge{0, 2});
  CHECK(g.edges()[1] == Edge{1, 2});
  CHECK(g.degree(2) == 2);
  CHECK(g.has_edge(0, 2));
  CHECK(g.has_edge(2, 0));
  CHECK_FALSE(g.has_edge(0, 1));
  CHECK(code_of([] { Graph(3, {{1, 1}}); }) == ErrorCode::kInvariantViolation);
  CHECK(code_of([] { Graph(3, {{0, 1}, {1, 0}}); }) == ErrorCode::kInvariantViolation);
  CHECK(code_of([] { Graph(3, {{0, 3}}); }) == ErrorCode::kInvariantViolation);
}

TEST_CASE("shortest path distances") {
  SUBCASE("path 0-1-2") {
    const auto d = shortest_path_distances(path_graph(3));
    CHECK(d(0, 2) == 2);
    CHECK(d(2, 0) == 2);
  }
  SUBCASE("3x3 grid corner to corner") {
    const auto [g, l] = gen_grid(3, 3);
    CHECK(shortest_path_distances(g)(0, 8) == 4);
  }
  SUBCASE("K4") {
    const auto d = shortest_path_distances(complete_graph(4));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) CHECK(d(i, j) == (i == j ? 0 : 1));
  }
  SUBCASE("disconnected") {
    CHECK(code_of([] { shortest_path_distances(Graph(3, {{0, 1}})); }) ==
          ErrorCode::kDisconnectedGraph);
    CHECK(code_of([] { diameter(Graph(4, {{0, 1}, {2, 3}})); }) == ErrorCode::kDisconnectedGraph);
  }
}

TEST_CASE("diameter") {
  CHECK(diameter(complete_graph(4)) == 1);
  CHECK(diameter(path_graph(10)) == 9);
  const Graph torus = gen_torus(4, 4, 2);
  const auto fw = oracle::floyd_warshall(torus);
  int oracle_max = 0;
  for (const auto& row : fw)
    for (int x : row) oracle_max = std::max(oracle_max, x);
  CHECK(oracle_max == 4);
  CHECK(diameter(torus) == 4);
}

TEST_CASE("BFS agrees with Floyd-Warshall on generated graphs") {
  std::vector<Graph> graphs;
  graphs.push_back(gen_grid(4, 6).first);
  graphs.push_back(gen_torus(3, 5, 1));
  graphs.push_back(gen_torus(5, 4, 2));
  graphs.push_back(gen_quasi(3, 3, 11).first);
  graphs.push_back(gen_lindenmayer(40, 5).first);
  graphs.push_back(gen_mosaic(1, 30, 3).first);
  graphs.push_back(gen_mosaic(2, 40, 4).first);
  graphs.push_back(gen_bottle(36, 8).first);
  for (const auto& g : graphs) {
    if (g.vertex_count() > 50) continue;
    const auto d = shortest_path_distances(g);
    const auto fw = oracle::floyd_warshall(g);
    int dmax = 0;
    for (std::size_t i = 0; i < g.vertex_count(); ++i) {
      CHECK(d(i, i) == 0);
      for (std::size_t j = 0; j < g.vertex_count(); ++j) {
        CHECK(d(i, j) == d(j, i));
        CHECK(d(i, j) == fw[i][j]);
        dmax = std::max<int>(dmax, d(i, j));
      }
    }
    CHECK(diameter(g) == static_cast<std::size_t>(dmax));
  }
}

TEST_CASE("euclidean distance") {
  Layout l;
  l.positions = {{0, 0}, {3, 4}, {1, 1}, {2, 2}, {3, 4}};
  CHECK(euclidean_distance(l, 0, 1) == doctest::Approx(5.0));
  CHECK(euclidean_distance(l, 1, 4) == 0.0);
  CHECK(euclidean_distance(l, 2, 3) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("provenance tags round-trip") {
  for (const Provenance p : {Provenance{ProvenanceKind::kNative},
                             Provenance{ProvenanceKind::kPhantom},
                             Provenance{ProvenanceKind::kWorsened, WorsenKind::kMovlsq, 0.5},
                             Provenance{ProvenanceKind::kInterpolated, WorsenKind::kPerturb, 0.25}}) {
    CHECK(parse_provenance(to_string(p)) == p);
  }
  CHECK(to_string(Provenance{ProvenanceKind::kWorsened, WorsenKind::kFlipEdges, 0.15}) ==
        "WORSENED(FLIP_EDGES,0.15)");
  CHECK(code_of([] { parse_provenance("BOGUS"); }) == ErrorCode::kParseError);
}

TEST_CASE("check_layout") {
  const Graph g = path_graph(3);
  Layout l;
  l.positions = {{0, 0}, {1, 0}};
  CHECK_THROWS_AS(check_layout(g, l), Error);
  l.positions.push_back({NAN, 0});
  CHECK_THROWS_AS(check_layout(g, l), Error);
  l.positions.back() = {2, 0};
  CHECK_NOTHROW(check_layout(g, l));
}
