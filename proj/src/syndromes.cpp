#include "layoutjudge/syndromes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "layoutjudge/error.hpp"
#include "layoutjudge/simd/kernels.hpp"

namespace layoutjudge {
namespace {

Vec2 canonical_sign(Vec2 v) {
  if (v.x < 0.0 || (v.x == 0.0 && v.y < 0.0)) return {-v.x, -v.y};
  return v;
}

Vec2 unit(Vec2 v) { return v * (1.0 / norm(v)); }

}  // namespace

PrincipalAxes principal_axes(const Layout& layout) {
  const std::size_t n = layout.size();
  if (n == 0) throw Error(ErrorCode::kDegenerateLayout, "empty layout");
  Vec2 mean;
  for (const auto& p : layout.positions) mean = mean + p;
  mean = mean * (1.0 / static_cast<double>(n));
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  for (const auto& p : layout.positions) {
    const Vec2 d = p - mean;
    a += d.x * d.x;
    b += d.x * d.y;
    c += d.y * d.y;
  }
  a /= static_cast<double>(n);
  b /= static_cast<double>(n);
  c /= static_cast<double>(n);
  if (!(a + c > 0.0)) throw Error(ErrorCode::kDegenerateLayout, "positions have zero covariance");

  const double half_trace = 0.5 * (a + c);
  const double gap = std::hypot(0.5 * (a - c), b);
  PrincipalAxes axes;
  axes.lambda1 = half_trace + gap;
  axes.lambda2 = half_trace - gap;
  if (gap <= 1e-12 * half_trace) {
    axes.v1 = {1.0, 0.0};
    axes.v2 = {0.0, 1.0};
    return axes;
  }
  Vec2 v1;
  if (b == 0.0) {
    v1 = a >= c ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
  } else if (a >= c) {
    v1 = unit({axes.lambda1 - c, b});
  } else {
    v1 = unit({b, axes.lambda1 - a});
  }
  axes.v1 = canonical_sign(v1);
  axes.v2 = canonical_sign({-axes.v1.y, axes.v1.x});
  return axes;
}

Princomp princomp(const Layout& layout) {
  const PrincipalAxes axes = principal_axes(layout);
  Vec2 mean;
  for (const auto& p : layout.positions) mean = mean + p;
  mean = mean * (1.0 / static_cast<double>(layout.size()));
  Princomp out;
  out.first.reserve(layout.size());
  out.second.reserve(layout.size());
  for (const auto& p : layout.positions) {
    const Vec2 d = p - mean;
    out.first.push_back(d.x * axes.v1.x + d.y * axes.v1.y);
    out.second.push_back(d.x * axes.v2.x + d.y * axes.v2.y);
  }
  return out;
}

std::vector<double> angular(const Graph& g, const Layout& layout) {
  check_layout(g, layout);
  constexpr double kTurn = 2.0 * std::numbers::pi;
  std::vector<double> out;
  std::vector<double> polar;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    const auto nbrs = g.neighbors(v);
    polar.clear();
    for (Vertex u : nbrs) {
      const Vec2 d = layout.positions[u] - layout.positions[v];
      if (d.x == 0.0 && d.y == 0.0) {
        throw Error(ErrorCode::kZeroLengthEdge,
                    "edge " + std::to_string(v) + "-" + std::to_string(u) + " has zero length");
      }
      polar.push_back(std::atan2(d.y, d.x));
    }
    if (polar.size() == 1) {
      out.push_back(kTurn);
      continue;
    }
    if (polar.empty()) continue;
    std::sort(polar.begin(), polar.end(), std::greater<>());
    for (std::size_t i = 0; i + 1 < polar.size(); ++i) out.push_back(polar[i] - polar[i + 1]);
    out.push_back(polar.back() + kTurn - polar.front());
  }
  return out;
}

std::vector<double> edge_length(const Graph& g, const Layout& layout) {
  check_layout(g, layout);
  std::vector<double> out;
  out.reserve(g.edge_count());
  for (const auto& e : g.edges()) out.push_back(euclidean_distance(layout, e.u, e.v));
  return out;
}

std::vector<double> rdf_global(const Layout& layout) {
  const std::size_t n = layout.size();
  std::vector<double> xs(n);
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = layout.positions[i].x;
    ys[i] = layout.positions[i].y;
  }
  std::vector<double> out(n * (n - (n > 0 ? 1 : 0)) / 2);
  const auto& k = simd::kernels();
  std::size_t at = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t count = n - i - 1;
    k.distances_from(xs.data() + i + 1, ys.data() + i + 1, count, xs[i], ys[i], out.data() + at);
    at += count;
  }
  return out;
}

std::vector<double> rdf_local(const Graph& g, const Layout& layout, int d) {
  check_layout(g, layout);
  const DistanceMatrix hops = shortest_path_distances(g);
  const std::vector<double> all = rdf_global(layout);
  std::vector<double> out;
  const std::size_t n = g.vertex_count();
  std::size_t at = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++at) {
      if (hops(i, j) <= d) out.push_back(all[at]);
    }
  }
  return out;
}

std::vector<double> tension(const Graph& g, const Layout& layout) {
  check_layout(g, layout);
  const DistanceMatrix hops = shortest_path_distances(g);
  std::vector<double> out = rdf_global(layout);
  const std::size_t n = g.vertex_count();
  std::size_t at = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++at) out[at] /= hops(i, j);
  }
  return out;
}

PairTable::PairTable(const Graph& g, const Layout& layout)
    : PairTable(shortest_path_distances(g), layout) {
  check_layout(g, layout);
}

PairTable::PairTable(const DistanceMatrix& hops, const Layout& layout) {
  const std::size_t n = hops.size();
  if (layout.size() != n) throw Error(ErrorCode::kDimensionMismatch, "layout does not match graph");
  const std::vector<double> all = rdf_global(layout);
  // counting sort by hop distance keeps row-major order within each distance
  const std::size_t max_hop = n > 1 ? hops.max() : 0;
  std::vector<std::size_t> start(max_hop + 2, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = hops.row(i);
    for (std::size_t j = i + 1; j < n; ++j) ++start[row[j] + 1];
  }
  for (std::size_t h = 1; h < start.size(); ++h) start[h] += start[h - 1];
  euclid_.resize(all.size());
  hops_.resize(all.size());
  std::size_t at = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = hops.row(i);
    for (std::size_t j = i + 1; j < n; ++j, ++at) {
      const std::size_t slot = start[row[j]]++;
      euclid_[slot] = all[at];
      hops_[slot] = row[j];
    }
  }
}

std::size_t PairTable::prefix(std::size_t d) const {
  const auto it = std::upper_bound(hops_.begin(), hops_.end(), d,
                                   [](std::size_t v, std::uint16_t h) { return v < h; });
  return static_cast<std::size_t>(it - hops_.begin());
}

std::vector<double> PairTable::local(std::size_t d) const {
  return {euclid_.begin(), euclid_.begin() + static_cast<std::ptrdiff_t>(prefix(d))};
}

std::vector<double> PairTable::tension() const {
  std::vector<double> out(euclid_.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = euclid_[k] / hops_[k];
  return out;
}

}  // namespace layoutjudge
