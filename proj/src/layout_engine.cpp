#include "layoutjudge/layout_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <Eigen/Dense>

#include "layoutjudge/error.hpp"
#include "layoutjudge/rng.hpp"
#include "layoutjudge/simd/kernels.hpp"

namespace layoutjudge {
namespace {

void require_connected(const Graph& g) {
  if (!g.is_connected()) throw Error(ErrorCode::kDisconnectedGraph, "layout requires a connected graph");
}

Layout make_layout(const std::vector<double>& xs, const std::vector<double>& ys,
                   ProvenanceKind kind) {
  Layout layout;
  layout.provenance.kind = kind;
  layout.positions.resize(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) layout.positions[i] = {xs[i], ys[i]};
  return layout;
}

double weighted_stress(const std::vector<double>& xs, const std::vector<double>& ys,
                       const DistanceMatrix& hops, std::vector<double>& row) {
  const auto& k = simd::kernels();
  const std::size_t n = xs.size();
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t count = n - i - 1;
    k.distances_from(xs.data() + i + 1, ys.data() + i + 1, count, xs[i], ys[i], row.data());
    const std::uint16_t* h = hops.row(i).data() + i + 1;
    // sum (d_gamma - d_G)^2 / d_G^2 = sum (d_gamma/d_G)^2 - 2 sum d_gamma/d_G + count
    double a = 0.0;
    double b = 0.0;
    k.stress_moments(row.data(), h, count, &a, &b);
    total += a - 2.0 * b + static_cast<double>(count);
  }
  return total;
}

// PivotMDS: classical MDS restricted to k pivot columns chosen by max-min
// distance from a seeded first pivot. With k == n this is classical MDS.
void pivot_mds(const DistanceMatrix& hops, std::uint64_t seed, std::vector<double>& xs,
               std::vector<double>& ys) {
  constexpr std::size_t kPivots = 50;
  const std::size_t n = hops.size();
  const std::size_t k = std::min(n, kPivots);
  Rng rng(seed);
  std::vector<std::size_t> pivots;
  std::vector<std::uint16_t> nearest(n, std::numeric_limits<std::uint16_t>::max());
  std::size_t next = static_cast<std::size_t>(rng.below(n));
  for (std::size_t p = 0; p < k; ++p) {
    pivots.push_back(next);
    const auto row = hops.row(next);
    std::size_t best = 0;
    for (std::size_t v = 0; v < n; ++v) {
      nearest[v] = std::min(nearest[v], row[v]);
      if (nearest[v] > nearest[best]) best = v;
    }
    next = best;
  }

  Eigen::MatrixXd c(n, k);
  for (std::size_t j = 0; j < k; ++j) {
    const auto row = hops.row(pivots[j]);
    for (std::size_t i = 0; i < n; ++i) c(i, j) = double(row[i]) * double(row[i]);
  }
  const Eigen::VectorXd col_mean = c.colwise().mean();
  const Eigen::VectorXd row_mean = c.rowwise().mean();
  const double grand = c.mean();
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < n; ++i)
      c(i, j) = -0.5 * (c(i, j) - row_mean(i) - col_mean(j) + grand);

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c.transpose() * c);
  // eigenvalues ascending; the two largest span the embedding
  const Eigen::VectorXd ax = c * eig.eigenvectors().col(k - 1);
  const Eigen::VectorXd ay = k >= 2 ? Eigen::VectorXd(c * eig.eigenvectors().col(k - 2))
                                    : Eigen::VectorXd::Zero(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = ax(i);
    ys[i] = ay(i);
  }
}

}  // namespace

Layout normalize_layout(const Layout& layout, const Graph& g) {
  check_layout(g, layout);
  if (g.edge_count() == 0) throw Error(ErrorCode::kDegenerateLayout, "graph has no edges");
  const std::size_t n = layout.size();
  Vec2 center;
  for (const auto& p : layout.positions) center = center + p;
  center = center * (1.0 / static_cast<double>(n));

  double total = 0.0;
  for (const auto& e : g.edges()) total += euclidean_distance(layout, e.u, e.v);
  const double mean_edge = total / static_cast<double>(g.edge_count());
  if (!(mean_edge > 0.0) || !std::isfinite(mean_edge)) {
    throw Error(ErrorCode::kDegenerateLayout, "mean edge length is zero");
  }

  Layout out = layout;
  const double scale = 1.0 / mean_edge;
  for (auto& p : out.positions) p = (p - center) * scale;
  return out;
}

Layout layout_force_directed(const Graph& g, const LayoutParams& params) {
  require_connected(g);
  const std::size_t n = g.vertex_count();
  Rng rng(params.seed);
  const double side = std::sqrt(static_cast<double>(n));
  std::vector<double> xs(n);
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = rng.uniform(0.0, side);
    ys[i] = rng.uniform(0.0, side);
  }
  if (n == 1 || g.edge_count() == 0) return make_layout(xs, ys, ProvenanceKind::kFdp);

  const auto& k = simd::kernels();
  constexpr double kIdeal = 1.0;
  const double k_sq = kIdeal * kIdeal;
  const double min_sq = 1e-12;
  const double t0 = std::max(0.1 * side, 0.5);
  std::vector<double> fx(n);
  std::vector<double> fy(n);

  for (int it = 0; it < params.iterations; ++it) {
    const double temperature =
        t0 * (1.0 - static_cast<double>(it) / params.iterations) + 1e-3 * kIdeal;
    for (std::size_t i = 0; i < n; ++i) k.repulsion(xs.data(), ys.data(), n, i, k_sq, min_sq, &fx[i], &fy[i]);
    for (const auto& e : g.edges()) {
      const double dx = xs[e.u] - xs[e.v];
      const double dy = ys[e.u] - ys[e.v];
      const double d = std::sqrt(dx * dx + dy * dy);
      const double s = d / kIdeal;  // (d^2 / k) along the unit vector
      fx[e.u] -= dx * s;
      fy[e.u] -= dy * s;
      fx[e.v] += dx * s;
      fy[e.v] += dy * s;
    }
    double max_move = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double len = std::sqrt(fx[i] * fx[i] + fy[i] * fy[i]);
      if (len <= 0.0) continue;
      const double step = std::min(len, temperature);
      xs[i] += fx[i] / len * step;
      ys[i] += fy[i] / len * step;
      max_move = std::max(max_move, step);
    }
    if (max_move < params.tolerance * kIdeal) break;
  }
  return normalize_layout(make_layout(xs, ys, ProvenanceKind::kFdp), g);
}

StressMajorizationResult stress_majorization(const Graph& g, const LayoutParams& params) {
  require_connected(g);
  const DistanceMatrix hops = shortest_path_distances(g);
  const std::size_t n = g.vertex_count();
  std::vector<double> xs(n);
  std::vector<double> ys(n);
  pivot_mds(hops, params.seed, xs, ys);

  StressMajorizationResult result;
  std::vector<double> row(n);
  double stress = weighted_stress(xs, ys, hops, row);
  result.stress_history.push_back(stress);
  const auto& k = simd::kernels();
  for (int it = 0; it < params.iterations && n > 1; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double sx = 0.0;
      double sy = 0.0;
      double wsum = 0.0;
      k.majorization_row(xs.data(), ys.data(), hops.row(i).data(), n, i, &sx, &sy, &wsum);
      xs[i] = sx / wsum;
      ys[i] = sy / wsum;
    }
    const double next = weighted_stress(xs, ys, hops, row);
    result.stress_history.push_back(next);
    const double change = std::abs(stress - next) / std::max(stress, 1e-300);
    stress = next;
    if (change < params.tolerance) break;
  }
  result.layout = normalize_layout(make_layout(xs, ys, ProvenanceKind::kStressMin), g);
  return result;
}

Layout layout_stress_min(const Graph& g, const LayoutParams& params) {
  return stress_majorization(g, params).layout;
}

Layout layout_random(const Graph& g, RandomDistribution dist, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = g.vertex_count();
  std::vector<double> xs(n);
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (dist == RandomDistribution::kUniform) {
      xs[i] = rng.uniform();
      ys[i] = rng.uniform();
    } else {
      xs[i] = rng.normal();
      ys[i] = rng.normal();
    }
  }
  const auto kind = dist == RandomDistribution::kUniform ? ProvenanceKind::kRandomUniform
                                                         : ProvenanceKind::kRandomNormal;
  return normalize_layout(make_layout(xs, ys, kind), g);
}

Graph phantom_graph(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n < 2 || m + 1 < n) {
    throw Error(ErrorCode::kDisconnectedGraph, "phantom graph needs n >= 2 and m >= n - 1");
  }
  if (m > n * (n - 1) / 2) throw Error(ErrorCode::kInvariantViolation, "too many edges for a simple graph");
  Rng rng(seed);

  // Wilson's algorithm on the complete graph.
  std::vector<char> in_tree(n, 0);
  std::vector<std::size_t> next(n, 0);
  in_tree[rng.below(n)] = 1;
  std::vector<std::pair<Vertex, Vertex>> edges;
  std::set<std::pair<Vertex, Vertex>> present;
  auto add = [&](std::size_t a, std::size_t b) {
    const std::pair<Vertex, Vertex> key{static_cast<Vertex>(std::min(a, b)),
                                        static_cast<Vertex>(std::max(a, b))};
    if (present.insert(key).second) edges.push_back(key);
  };
  for (std::size_t start = 0; start < n; ++start) {
    std::size_t u = start;
    while (!in_tree[u]) {
      std::size_t v = rng.below(n - 1);
      if (v >= u) ++v;
      next[u] = v;
      u = v;
    }
    for (u = start; !in_tree[u]; u = next[u]) {
      in_tree[u] = 1;
      add(u, next[u]);
    }
  }
  while (edges.size() < m) {
    const auto a = static_cast<std::size_t>(rng.below(n));
    const auto b = static_cast<std::size_t>(rng.below(n));
    if (a != b) add(a, b);
  }
  return Graph(n, edges);
}

Layout layout_phantom(const Graph& g, std::uint64_t seed) {
  require_connected(g);
  const Graph phantom = phantom_graph(g.vertex_count(), g.edge_count(), seed);
  Layout layout =
      layout_force_directed(phantom, LayoutParams::force_directed(Rng::derive(seed, 0xFA)));
  layout.provenance.kind = ProvenanceKind::kPhantom;
  return normalize_layout(layout, g);
}

}  // namespace layoutjudge
