#include "layoutjudge/corruption.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "layoutjudge/error.hpp"
#include "layoutjudge/layout_engine.hpp"
#include "layoutjudge/rng.hpp"

namespace layoutjudge {
namespace {

Vec2 centroid(const Layout& l) {
  Vec2 c;
  for (const auto& p : l.positions) c = c + p;
  return c * (1.0 / static_cast<double>(std::max<std::size_t>(l.size(), 1)));
}

double rms_radius(const Layout& l, Vec2 c) {
  double s = 0.0;
  for (const auto& p : l.positions) {
    const Vec2 d = p - c;
    s += d.x * d.x + d.y * d.y;
  }
  return std::sqrt(s / static_cast<double>(std::max<std::size_t>(l.size(), 1)));
}

void perturb(Layout& out, double r, Rng& rng) {
  const double sigma = r * rms_radius(out, centroid(out));
  for (auto& p : out.positions) {
    p.x += sigma * rng.normal();
    p.y += sigma * rng.normal();
  }
}

void flip_nodes(Layout& out, std::size_t swaps, Rng& rng) {
  const std::size_t n = out.size();
  if (n < 2) return;
  for (std::size_t k = 0; k < swaps; ++k) {
    const auto u = static_cast<std::size_t>(rng.below(n));
    auto v = static_cast<std::size_t>(rng.below(n - 1));
    if (v >= u) ++v;
    std::swap(out.positions[u], out.positions[v]);
  }
}

void flip_edges(const Graph& g, Layout& out, std::size_t swaps, Rng& rng) {
  if (g.edge_count() == 0) return;
  for (std::size_t k = 0; k < swaps; ++k) {
    const Edge e = g.edges()[rng.below(g.edge_count())];
    std::swap(out.positions[e.u], out.positions[e.v]);
  }
}

// Affine MLS deformation (Schaefer, McPhail, Warren 2006) with w = 1/|p_i - v|^2.
void movlsq(Layout& out, double r, Rng& rng) {
  constexpr int kControls = 6;
  const Vec2 c = centroid(out);
  double radius = 0.0;
  for (const auto& p : out.positions) radius = std::max(radius, norm(p - c));
  const double shift = 0.5 * r * rms_radius(out, c);

  Vec2 src[kControls];
  Vec2 dst[kControls];
  for (int i = 0; i < kControls; ++i) {
    const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double b = rng.uniform(0.0, 2.0 * std::numbers::pi);
    src[i] = c + Vec2{std::cos(a), std::sin(a)} * radius;
    dst[i] = src[i] + Vec2{std::cos(b), std::sin(b)} * shift;
  }

  for (auto& v : out.positions) {
    double w[kControls];
    int hit = -1;
    double wsum = 0.0;
    Vec2 ps;
    Vec2 qs;
    for (int i = 0; i < kControls; ++i) {
      const Vec2 d = src[i] - v;
      const double d2 = d.x * d.x + d.y * d.y;
      if (d2 == 0.0) {
        hit = i;
        break;
      }
      w[i] = 1.0 / d2;
      wsum += w[i];
      ps = ps + src[i] * w[i];
      qs = qs + dst[i] * w[i];
    }
    if (hit >= 0) {
      v = dst[hit];
      continue;
    }
    ps = ps * (1.0 / wsum);
    qs = qs * (1.0 / wsum);
    // A = sum w p^T p (2x2 symmetric), B = sum w p^T q
    double a11 = 0, a12 = 0, a22 = 0, b11 = 0, b12 = 0, b21 = 0, b22 = 0;
    for (int i = 0; i < kControls; ++i) {
      const Vec2 ph = src[i] - ps;
      const Vec2 qh = dst[i] - qs;
      a11 += w[i] * ph.x * ph.x;
      a12 += w[i] * ph.x * ph.y;
      a22 += w[i] * ph.y * ph.y;
      b11 += w[i] * ph.x * qh.x;
      b12 += w[i] * ph.x * qh.y;
      b21 += w[i] * ph.y * qh.x;
      b22 += w[i] * ph.y * qh.y;
    }
    const double det = a11 * a22 - a12 * a12;
    if (!(std::abs(det) > 0.0)) {
      v = v - ps + qs;
      continue;
    }
    const double i11 = a22 / det;
    const double i12 = -a12 / det;
    const double i22 = a11 / det;
    // M = A^-1 B; f(v) = (v - p*) M + q*
    const double m11 = i11 * b11 + i12 * b21;
    const double m12 = i11 * b12 + i12 * b22;
    const double m21 = i12 * b11 + i22 * b21;
    const double m22 = i12 * b12 + i22 * b22;
    const Vec2 d = v - ps;
    v = {d.x * m11 + d.y * m21 + qs.x, d.x * m12 + d.y * m22 + qs.y};
  }
}

}  // namespace

std::size_t worsen_swap_count(WorsenKind kind, double r, std::size_t n, std::size_t m) {
  switch (kind) {
    case WorsenKind::kFlipNodes: return static_cast<std::size_t>(std::ceil(r * n / 2.0));
    case WorsenKind::kFlipEdges: return static_cast<std::size_t>(std::ceil(r * m));
    default: return 0;
  }
}

Layout worsen(const Graph& g, const Layout& layout, const WorsenSpec& spec) {
  check_layout(g, layout);
  if (!(spec.r >= 0.0 && spec.r <= 1.0)) {
    throw Error(ErrorCode::kInvariantViolation, "worsening rate must lie in [0, 1]");
  }
  Layout out = layout;
  out.provenance = {ProvenanceKind::kWorsened, spec.kind, spec.r};
  Rng rng(spec.seed);
  switch (spec.kind) {
    case WorsenKind::kPerturb:
      if (spec.r > 0.0) perturb(out, spec.r, rng);
      break;
    case WorsenKind::kFlipNodes:
      flip_nodes(out, worsen_swap_count(spec.kind, spec.r, g.vertex_count(), g.edge_count()), rng);
      break;
    case WorsenKind::kFlipEdges:
      flip_edges(g, out, worsen_swap_count(spec.kind, spec.r, g.vertex_count(), g.edge_count()), rng);
      break;
    case WorsenKind::kMovlsq:
      movlsq(out, spec.r, rng);
      break;
  }
  return out;
}

Layout interpolate(const Graph& g, const Layout& a, const Layout& b, double r) {
  if (a.size() != b.size() || a.size() != g.vertex_count()) {
    throw Error(ErrorCode::kDimensionMismatch, "interpolated layouts differ in vertex count");
  }
  Layout out = a;
  out.provenance = {ProvenanceKind::kInterpolated, WorsenKind::kPerturb, r};
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.positions[i] = a.positions[i] * (1.0 - r) + b.positions[i] * r;
  }
  return normalize_layout(out, g);
}

const char* to_string(PairKind kind) {
  switch (kind) {
    case PairKind::kProperGarbage: return "PROPER_GARBAGE";
    case PairKind::kWorsening: return "WORSENING";
    case PairKind::kInterpolation: return "INTERPOLATION";
  }
  return "?";
}

PairSet make_labeled_pairs(const Graph& g, const std::vector<Layout>& proper,
                           const std::vector<Layout>& garbage, const AugmentConfig& config,
                           std::uint64_t seed) {
  if (proper.empty() || garbage.empty()) {
    throw Error(ErrorCode::kEmptyInput, "pairs need at least one proper and one garbage layout");
  }
  PairSet set;
  set.layouts = proper;
  set.layouts.insert(set.layouts.end(), garbage.begin(), garbage.end());

  auto emit = [&](std::size_t a, std::size_t b, double t, PairKind kind) {
    if (std::abs(t) < config.t_min) return;
    set.pairs.push_back({a, b, t, kind});
    set.pairs.push_back({b, a, -t, kind});
  };

  for (std::size_t p = 0; p < proper.size(); ++p) {
    for (std::size_t q = 0; q < garbage.size(); ++q) {
      emit(p, proper.size() + q, -1.0, PairKind::kProperGarbage);
    }
  }

  // (layout index, badness) chains; t = badness(a) - badness(b)
  auto emit_chain = [&](const std::vector<std::pair<std::size_t, double>>& chain, PairKind kind,
                        bool skip_ends) {
    for (std::size_t i = 0; i < chain.size(); ++i) {
      for (std::size_t j = i + 1; j < chain.size(); ++j) {
        const double r1 = chain[i].second;
        const double r2 = chain[j].second;
        if (skip_ends && r1 == 0.0 && r2 == 1.0) continue;
        emit(chain[i].first, chain[j].first, r1 - r2, kind);
      }
    }
  };

  Rng rng(seed);
  const std::size_t offset =
      config.worsen_kinds.empty() ? 0 : static_cast<std::size_t>(rng.below(config.worsen_kinds.size()));

  for (std::size_t p = 0; p < proper.size(); ++p) {
    if (!config.worsen_kinds.empty() && !config.ladder.empty()) {
      const WorsenKind kind = config.worsen_kinds[(p + offset) % config.worsen_kinds.size()];
      std::vector<std::pair<std::size_t, double>> chain;
      for (double r : config.ladder) {
        if (r == 0.0) {
          chain.emplace_back(p, 0.0);
          continue;
        }
        set.layouts.push_back(worsen(g, proper[p], {kind, r, rng.next_u64()}));
        chain.emplace_back(set.layouts.size() - 1, r);
      }
      emit_chain(chain, PairKind::kWorsening, false);
    }

    if (!config.interpolation.empty()) {
      const std::size_t q = static_cast<std::size_t>(rng.below(garbage.size()));
      std::vector<std::pair<std::size_t, double>> chain;
      for (double r : config.interpolation) {
        if (r == 0.0) {
          chain.emplace_back(p, 0.0);
        } else if (r == 1.0) {
          chain.emplace_back(proper.size() + q, 1.0);
        } else {
          set.layouts.push_back(interpolate(g, proper[p], garbage[q], r));
          chain.emplace_back(set.layouts.size() - 1, r);
        }
      }
      emit_chain(chain, PairKind::kInterpolation, true);
    }
  }
  return set;
}

}  // namespace layoutjudge
