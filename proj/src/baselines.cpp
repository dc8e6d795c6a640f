#include "layoutjudge/baselines.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <numeric>

#include "layoutjudge/error.hpp"
#include "layoutjudge/layout_engine.hpp"
#include "layoutjudge/nelder_mead.hpp"
#include "layoutjudge/parallel.hpp"
#include "layoutjudge/rng.hpp"
#include "layoutjudge/simd/kernels.hpp"
#include "layoutjudge/syndromes.hpp"

namespace layoutjudge {
namespace {

void check_sizes(const DistanceMatrix& hops, const Layout& layout) {
  if (hops.size() != layout.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "layout size does not match the graph");
  }
}

// Layout distances of every pair i < j, row-major, plus their hop distances.
struct PairDistances {
  std::vector<double> gamma;
  std::vector<double> graph;
};

PairDistances pair_distances(const DistanceMatrix& hops, const Layout& layout) {
  check_sizes(hops, layout);
  const std::size_t n = layout.size();
  std::vector<double> xs(n);
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = layout.positions[i].x;
    ys[i] = layout.positions[i].y;
  }
  PairDistances out;
  out.gamma.resize(n * (n - 1) / 2);
  out.graph.resize(out.gamma.size());
  const auto& k = simd::kernels();
  std::size_t at = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t count = n - i - 1;
    k.distances_from(xs.data() + i + 1, ys.data() + i + 1, count, xs[i], ys[i], out.gamma.data() + at);
    const auto row = hops.row(i);
    for (std::size_t j = 0; j < count; ++j) out.graph[at + j] = row[i + 1 + j];
    at += count;
  }
  return out;
}

double stress_of(const PairDistances& p, double scale) {
  double total = 0.0;
  for (std::size_t i = 0; i < p.gamma.size(); ++i) {
    const double diff = p.gamma[i] - scale * p.graph[i];
    total += diff * diff / (p.graph[i] * p.graph[i]);
  }
  return total;
}

double cross(Vec2 o, Vec2 a, Vec2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

int orientation(Vec2 o, Vec2 a, Vec2 b) {
  constexpr double kEps = 1e-12;
  const double c = cross(o, a, b);
  return c > kEps ? 1 : (c < -kEps ? -1 : 0);
}

bool within(double lo_a, double hi_a, double lo_b, double hi_b) {
  return std::max(lo_a, lo_b) <= std::min(hi_a, hi_b);
}

double crossing_angle(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
  const Vec2 u = p2 - p1;
  const Vec2 v = q2 - q1;
  const double c = std::abs(u.x * v.x + u.y * v.y) / (norm(u) * norm(v));
  return std::acos(std::min(1.0, c));
}

}  // namespace

double stress_at_scale(const DistanceMatrix& hops, const Layout& layout, double scale) {
  return stress_of(pair_distances(hops, layout), scale);
}

double stress_at_scale(const Graph& g, const Layout& layout, double scale) {
  return stress_at_scale(shortest_path_distances(g), layout, scale);
}

StressFit fit_stress_scale(const DistanceMatrix& hops, const Layout& layout) {
  const PairDistances p = pair_distances(hops, layout);
  if (p.gamma.empty()) return {};
  double ratio = 0.0;
  for (std::size_t i = 0; i < p.gamma.size(); ++i) ratio += p.gamma[i] / p.graph[i];
  const double l0 = ratio / static_cast<double>(p.gamma.size());
  if (!(l0 > 0.0)) throw Error(ErrorCode::kDegenerateLayout, "all vertices coincide");

  // exact quadratic through (l0/2, s0), (l0, s1), (2 l0, s2)
  const double x0 = 0.5 * l0;
  const double x1 = l0;
  const double x2 = 2.0 * l0;
  const double s0 = stress_of(p, x0);
  const double s1 = stress_of(p, x1);
  const double s2 = stress_of(p, x2);
  const double d01 = (s1 - s0) / (x1 - x0);
  const double d12 = (s2 - s1) / (x2 - x1);
  const double a = (d12 - d01) / (x2 - x0);
  const double b = d01 - a * (x0 + x1);
  const double c = s0 - x0 * (a * x0 + b);
  const double scale = -b / (2.0 * a);
  return {scale, std::max(0.0, c - b * b / (4.0 * a))};
}

StressFit fit_stress_scale(const Graph& g, const Layout& layout) {
  return fit_stress_scale(shortest_path_distances(g), layout);
}

double scale_invariant_stress(const DistanceMatrix& hops, const Layout& layout) {
  const StressFit fit = fit_stress_scale(hops, layout);
  return fit.scale > 0.0 ? fit.minimum / (fit.scale * fit.scale) : 0.0;
}

double scale_invariant_stress(const Graph& g, const Layout& layout) {
  return scale_invariant_stress(shortest_path_distances(g), layout);
}

Verdict stress_discriminate(const DistanceMatrix& hops, const Layout& a, const Layout& b) {
  return verdict_from(scale_invariant_stress(hops, a) - scale_invariant_stress(hops, b));
}

bool segments_cross(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
  const int o1 = orientation(q1, q2, p1);
  const int o2 = orientation(q1, q2, p2);
  const int o3 = orientation(p1, p2, q1);
  const int o4 = orientation(p1, p2, q2);
  if (o1 == 0 && o2 == 0 && o3 == 0 && o4 == 0) {
    return within(std::min(p1.x, p2.x), std::max(p1.x, p2.x), std::min(q1.x, q2.x),
                  std::max(q1.x, q2.x)) &&
           within(std::min(p1.y, p2.y), std::max(p1.y, p2.y), std::min(q1.y, q2.y),
                  std::max(q1.y, q2.y));
  }
  return o1 * o2 <= 0 && o3 * o4 <= 0;
}

QualityMetrics quality_metrics(const Graph& g, const Layout& raw) {
  check_layout(g, raw);
  QualityMetrics m;
  const auto angles = angular(g, raw);
  m.ar = std::numbers::pi;
  for (const double a : angles) m.ar = std::min(m.ar, a);
  if (g.edge_count() == 0) {
    m.cr = std::numbers::pi / 2;
    return m;
  }

  const Layout layout = normalize_layout(raw, g);
  const auto lengths = edge_length(g, layout);
  const double mean = std::accumulate(lengths.begin(), lengths.end(), 0.0) / lengths.size();
  double var = 0.0;
  for (const double l : lengths) var += (l - mean) * (l - mean);
  m.el = std::sqrt(var / lengths.size());

  // sweep over edges sorted by their left end; only x-overlapping pairs are tested
  const auto& edges = g.edges();
  const auto& pos = layout.positions;
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> left(edges.size());
  std::vector<double> right(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    left[e] = std::min(pos[edges[e].u].x, pos[edges[e].v].x);
    right[e] = std::max(pos[edges[e].u].x, pos[edges[e].v].x);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return left[a] != left[b] ? left[a] < left[b] : a < b;
  });

  std::vector<std::size_t> counts(edges.size(), 0);
  std::vector<double> angles_min(edges.size(), std::numbers::pi / 2);
  parallel_for(edges.size(), [&](std::size_t i) {
    const Edge& e = edges[order[i]];
    for (std::size_t j = i + 1; j < order.size() && left[order[j]] <= right[order[i]] + 1e-12; ++j) {
      const Edge& f = edges[order[j]];
      if (e.u == f.u || e.u == f.v || e.v == f.u || e.v == f.v) continue;
      if (!segments_cross(pos[e.u], pos[e.v], pos[f.u], pos[f.v])) continue;
      ++counts[i];
      angles_min[i] = std::min(angles_min[i], crossing_angle(pos[e.u], pos[e.v], pos[f.u], pos[f.v]));
    }
  });
  m.cc = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  m.cr = *std::min_element(angles_min.begin(), angles_min.end());
  return m;
}

std::array<double, kCombMetrics> metric_values(const QualityMetrics& m) {
  return {static_cast<double>(m.cc), m.cr, m.ar, m.el};
}

std::vector<double> z_scores(std::span<const double> values) {
  std::vector<double> z(values.size(), 0.0);
  if (values.empty()) return z;
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double var = 0.0;
  for (const double v : values) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / n);
  if (!(sd > 0.0)) return z;
  for (std::size_t i = 0; i < values.size(); ++i) z[i] = (values[i] - mean) / sd;
  return z;
}

std::vector<double> comb_scores(const CombWeights& w, std::span<const QualityMetrics> layouts) {
  std::vector<double> scores(layouts.size(), 0.0);
  std::vector<double> column(layouts.size());
  for (std::size_t k = 0; k < kCombMetrics; ++k) {
    for (std::size_t i = 0; i < layouts.size(); ++i) column[i] = metric_values(layouts[i])[k];
    const auto z = z_scores(column);
    for (std::size_t i = 0; i < layouts.size(); ++i) scores[i] += w[k] * z[i];
  }
  return scores;
}

Verdict comb_discriminate(const CombWeights& w, const QualityMetrics& a, const QualityMetrics& b) {
  const QualityMetrics both[] = {a, b};
  const auto scores = comb_scores(w, both);
  return verdict_from(scores[1] - scores[0]);
}

Verdict comb_discriminate(const CombWeights& w, const Graph& g, const Layout& a, const Layout& b) {
  return comb_discriminate(w, quality_metrics(g, a), quality_metrics(g, b));
}

namespace {

// For two layouts z_b = -z_a per metric, so COMB(b) - COMB(a) = w . delta with
// delta = z_b - z_a in {-2, 0, 2}.
struct PairDelta {
  std::array<double, kCombMetrics> delta;
  bool label_b;
};

std::vector<PairDelta> pair_deltas(std::span<const CombPair> pairs) {
  std::vector<PairDelta> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    PairDelta d{};
    const auto va = metric_values(p.a);
    const auto vb = metric_values(p.b);
    for (std::size_t k = 0; k < kCombMetrics; ++k) {
      const double two[] = {va[k], vb[k]};
      const auto z = z_scores(two);
      d.delta[k] = z[1] - z[0];
    }
    d.label_b = p.t > 0.0;
    out.push_back(d);
  }
  return out;
}

double accuracy_of(std::span<const double> w, const std::vector<PairDelta>& deltas) {
  std::size_t correct = 0;
  for (const auto& d : deltas) {
    double t = 0.0;
    for (std::size_t k = 0; k < kCombMetrics; ++k) t += w[k] * d.delta[k];
    const bool says_b = !(t < 0.0);
    correct += says_b == d.label_b ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(deltas.size());
}

}  // namespace

double comb_training_accuracy(const CombWeights& w, std::span<const CombPair> pairs) {
  if (pairs.empty()) throw Error(ErrorCode::kEmptyInput, "no training pairs");
  return accuracy_of(w, pair_deltas(pairs));
}

CombWeights comb_fit_weights(std::span<const CombPair> pairs, const CombFitOptions& options) {
  if (pairs.empty()) throw Error(ErrorCode::kEmptyInput, "no training pairs");
  const auto deltas = pair_deltas(pairs);
  const auto objective = [&](std::span<const double> w) { return -accuracy_of(w, deltas); };

  const auto restarts = static_cast<std::size_t>(std::max(1, options.restarts));
  std::vector<NelderMeadResult> results(restarts);
  parallel_for(restarts, [&](std::size_t r) {
    Rng rng(Rng::derive(options.seed, r));
    std::vector<double> x0(kCombMetrics);
    double len = 0.0;
    while (!(len > 0.0)) {
      len = 0.0;
      for (auto& v : x0) {
        v = rng.normal();
        len += v * v;
      }
      len = std::sqrt(len);
    }
    for (auto& v : x0) v /= len;
    results[r] = nelder_mead(objective, x0, 0.5, options.iterations);
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < restarts; ++r) {
    if (results[r].value < results[best].value) best = r;
  }
  CombWeights w{};
  // all-zero weights are never worse than the tie convention; keep the better
  const CombWeights zero{};
  if (-results[best].value < accuracy_of(zero, deltas)) return zero;
  std::copy(results[best].x.begin(), results[best].x.end(), w.begin());
  return w;
}

namespace {
constexpr const char* kMetricNames[kCombMetrics] = {"CC", "CR", "AR", "EL"};
}

void write_comb_weights(const CombWeights& w, std::ostream& out) {
  out << "comb-weights 1\n";
  char buf[32];
  for (std::size_t k = 0; k < kCombMetrics; ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", w[k]);
    out << kMetricNames[k] << ' ' << buf << '\n';
  }
}

CombWeights read_comb_weights(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("comb-weights", 0) != 0) {
    throw Error(ErrorCode::kParseError, "not a comb weights file");
  }
  if (line != "comb-weights 1") throw Error(ErrorCode::kVersionMismatch, "unsupported comb weights version");
  CombWeights w{};
  for (std::size_t k = 0; k < kCombMetrics; ++k) {
    std::string name;
    std::string value;
    if (!std::getline(in, line)) throw Error(ErrorCode::kParseError, "comb weights file is truncated");
    std::istringstream fields(line);
    fields >> name >> value;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (name != kMetricNames[k] || ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(v)) {
      throw Error(ErrorCode::kParseError, "bad comb weight line '" + line + "'");
    }
    w[k] = v;
  }
  return w;
}

}  // namespace layoutjudge
