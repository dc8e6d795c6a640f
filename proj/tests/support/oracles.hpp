#pragma once

// Independent reference computations used by the unit and acceptance tests.
// These deliberately avoid the library's own kernels.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "layoutjudge/graph.hpp"

namespace oracle {

inline std::vector<std::vector<int>> floyd_warshall(const layoutjudge::Graph& g) {
  const int n = static_cast<int>(g.vertex_count());
  const int inf = std::numeric_limits<int>::max() / 4;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (int i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : g.edges()) d[e.u][e.v] = d[e.v][e.u] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

/// Scale-invariant weighted stress by brute-force scan over scales, refined by
/// golden-section search. Slow but shares no code with the library.
inline double stress_at(const layoutjudge::Layout& l, const std::vector<std::vector<int>>& d,
                        double scale) {
  double s = 0.0;
  const std::size_t n = l.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = l.positions[i].x - l.positions[j].x;
      const double dy = l.positions[i].y - l.positions[j].y;
      const double e = scale * std::hypot(dx, dy) - d[i][j];
      s += e * e / (static_cast<double>(d[i][j]) * d[i][j]);
    }
  }
  return s;
}

inline double scale_invariant_stress(const layoutjudge::Layout& l, const layoutjudge::Graph& g) {
  const auto d = floyd_warshall(g);
  double best_scale = 0.0;
  double best = stress_at(l, d, 0.0);
  for (int k = 1; k <= 400; ++k) {
    const double s = 0.01 * k;
    const double v = stress_at(l, d, s);
    if (v < best) best = v, best_scale = s;
  }
  double lo = std::max(0.0, best_scale - 0.01);
  double hi = best_scale + 0.01;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 100; ++it) {
    const double a = hi - phi * (hi - lo);
    const double b = lo + phi * (hi - lo);
    if (stress_at(l, d, a) < stress_at(l, d, b)) hi = b; else lo = a;
  }
  return std::min(best, stress_at(l, d, 0.5 * (lo + hi)));
}

struct StressMin {
  double scale;
  double minimum;
};

/// min over L of sum (d_layout - L d_G)^2 / d_G^2, at L* = sum(d_layout/d_G) / pairs.
inline StressMin closed_form_stress_min(const layoutjudge::Layout& l, const layoutjudge::Graph& g) {
  const auto d = floyd_warshall(g);
  const std::size_t n = l.size();
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dg = d[i][j];
      num += std::hypot(l.positions[i].x - l.positions[j].x, l.positions[i].y - l.positions[j].y) / dg;
      den += 1.0;
    }
  }
  const double best = num / den;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dg = d[i][j];
      const double e =
          std::hypot(l.positions[i].x - l.positions[j].x, l.positions[i].y - l.positions[j].y) - best * dg;
      s += e * e / (dg * dg);
    }
  }
  return {best, s};
}

/// Crossing count by solving p + t r = q + u s for every pair of edges without
/// a shared endpoint. Parallel pairs are skipped, so inputs must be in
/// general position.
inline std::size_t crossing_count(const layoutjudge::Layout& l, const layoutjudge::Graph& g) {
  const auto& edges = g.edges();
  std::size_t count = 0;
  for (std::size_t a = 0; a < edges.size(); ++a) {
    for (std::size_t b = a + 1; b < edges.size(); ++b) {
      const auto& e = edges[a];
      const auto& f = edges[b];
      if (e.u == f.u || e.u == f.v || e.v == f.u || e.v == f.v) continue;
      const auto p = l.positions[e.u];
      const auto q = l.positions[f.u];
      const double rx = l.positions[e.v].x - p.x, ry = l.positions[e.v].y - p.y;
      const double sx = l.positions[f.v].x - q.x, sy = l.positions[f.v].y - q.y;
      const double den = rx * sy - ry * sx;
      if (den == 0.0) continue;
      const double t = ((q.x - p.x) * sy - (q.y - p.y) * sx) / den;
      const double u = ((q.x - p.x) * ry - (q.y - p.y) * rx) / den;
      if (t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0) ++count;
    }
  }
  return count;
}

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace oracle
