#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "layoutjudge/error.hpp"
#include "layoutjudge/generators.hpp"
#include "layoutjudge/layout_engine.hpp"
#include "../support/oracles.hpp"

using namespace layoutjudge;

namespace {

Graph path_graph(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph(n, edges);
}

Graph cycle_graph(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex i = 0; i < n; ++i) edges.emplace_back(i, static_cast<Vertex>((i + 1) % n));
  return Graph(n, edges);
}

void check_normalized(const Layout& l, const Graph& g) {
  double cx = 0.0;
  double cy = 0.0;
  for (const auto& p : l.positions) cx += p.x, cy += p.y;
  CHECK(std::abs(cx / l.size()) < 1e-12);
  CHECK(std::abs(cy / l.size()) < 1e-12);
  double total = 0.0;
  for (const auto& e : g.edges()) total += euclidean_distance(l, e.u, e.v);
  CHECK(total / g.edge_count() == doctest::Approx(1.0).epsilon(1e-12));
}

bool nearly_equal(const Layout& a, const Layout& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a.positions[i].x - b.positions[i].x) > tol) return false;
    if (std::abs(a.positions[i].y - b.positions[i].y) > tol) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("normalize_layout") {
  const auto [g, native] = gen_grid(4, 5);
  const Layout once = normalize_layout(native, g);
  check_normalized(once, g);
  CHECK(nearly_equal(normalize_layout(once, g), once, 1e-12));

  Layout moved = native;
  for (auto& p : moved.positions) p = Vec2{7.0 * p.x + 3.0, 7.0 * p.y - 2.0};
  CHECK(nearly_equal(normalize_layout(moved, g), once, 1e-12));

  Layout coincident = native;
  for (auto& p : coincident.positions) p = {1.5, 1.5};
  try {
    normalize_layout(coincident, g);
    FAIL("expected DegenerateLayout");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateLayout);
  }
}

TEST_CASE("force-directed: path, triangle, determinism") {
  const Graph p3 = path_graph(3);
  const Layout l = layout_force_directed(p3, LayoutParams::force_directed(5));
  check_normalized(l, p3);
  const Vec2 a = l.positions[0] - l.positions[1];
  const Vec2 b = l.positions[2] - l.positions[1];
  const double cosine = (a.x * b.x + a.y * b.y) / (norm(a) * norm(b));
  const double angle = std::acos(std::clamp(cosine, -1.0, 1.0));
  CHECK(std::abs(angle - std::numbers::pi) < 5.0 * std::numbers::pi / 180.0);
  CHECK(oracle::scale_invariant_stress(l, p3) < 1e-3);

  const Graph k3(3, {{0, 1}, {1, 2}, {0, 2}});
  const Layout t = layout_force_directed(k3, LayoutParams::force_directed(9));
  const double s01 = euclidean_distance(t, 0, 1);
  const double s12 = euclidean_distance(t, 1, 2);
  const double s02 = euclidean_distance(t, 0, 2);
  const double lo = std::min({s01, s12, s02});
  const double hi = std::max({s01, s12, s02});
  CHECK(hi / lo < 1.01);

  const auto g = gen_grid(5, 5).first;
  CHECK(layout_force_directed(g, LayoutParams::force_directed(3)) ==
        layout_force_directed(g, LayoutParams::force_directed(3)));
  CHECK_FALSE(layout_force_directed(g, LayoutParams::force_directed(3)) ==
              layout_force_directed(g, LayoutParams::force_directed(4)));
  CHECK_THROWS_AS(layout_force_directed(Graph(3, {{0, 1}}), LayoutParams::force_directed(1)), Error);
}

TEST_CASE("stress majorization") {
  const Graph p4 = path_graph(4);
  const Layout l = layout_stress_min(p4, LayoutParams::stress(2));
  check_normalized(l, p4);
  CHECK(oracle::scale_invariant_stress(l, p4) < 1e-6);

  const Graph c4 = cycle_graph(4);
  const Layout sq = layout_stress_min(c4, LayoutParams::stress(8));
  double lo = 1e9;
  double hi = 0.0;
  for (const auto& e : c4.edges()) {
    const double len = euclidean_distance(sq, e.u, e.v);
    lo = std::min(lo, len);
    hi = std::max(hi, len);
  }
  CHECK(hi / lo < 1.01);
  // diagonals of a square
  CHECK(euclidean_distance(sq, 0, 2) == doctest::Approx(std::sqrt(2.0)).epsilon(0.01));

  for (const Graph& g : {gen_grid(6, 6).first, gen_torus(5, 6, 2), gen_lindenmayer(40, 3).first}) {
    const auto result = stress_majorization(g, LayoutParams::stress(17));
    REQUIRE(result.stress_history.size() >= 2);
    for (std::size_t i = 1; i < result.stress_history.size(); ++i) {
      CHECK(result.stress_history[i] <= result.stress_history[i - 1] * (1.0 + 1e-12));
    }
    CHECK(result.stress_history.size() <= 201);
    const Layout start = layout_random(g, RandomDistribution::kUniform, 0);
    CHECK(oracle::scale_invariant_stress(result.layout, g) <
          oracle::scale_invariant_stress(start, g));
  }
}

TEST_CASE("random layouts") {
  const auto g = gen_grid(10, 10).first;
  for (auto dist : {RandomDistribution::kUniform, RandomDistribution::kNormal}) {
    const Layout a = layout_random(g, dist, 42);
    CHECK(a == layout_random(g, dist, 42));
    CHECK(a.size() == 100);
    check_normalized(a, g);
  }
  CHECK(layout_random(g, RandomDistribution::kUniform, 1).provenance.kind ==
        ProvenanceKind::kRandomUniform);
}

TEST_CASE("phantom graph and layout") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph ph = phantom_graph(30, 45, seed);
    CHECK(ph.vertex_count() == 30);
    CHECK(ph.edge_count() == 45);
    CHECK(ph.is_connected());
  }
  CHECK(phantom_graph(10, 9, 4).is_connected());
  CHECK_THROWS_AS(phantom_graph(10, 8, 4), Error);

  const auto [g, native] = gen_grid(6, 6);
  const Layout ph = layout_phantom(g, 77);
  CHECK(ph.size() == g.vertex_count());
  CHECK(ph == layout_phantom(g, 77));
  CHECK(ph.provenance.kind == ProvenanceKind::kPhantom);
  check_normalized(ph, g);
  CHECK(oracle::scale_invariant_stress(ph, g) >
        oracle::scale_invariant_stress(normalize_layout(native, g), g));
}
