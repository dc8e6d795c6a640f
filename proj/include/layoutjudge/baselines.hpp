#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "layoutjudge/graph.hpp"
#include "layoutjudge/verdict.hpp"

namespace layoutjudge {

/// sum over pairs of (d_layout - L d_G)^2 / d_G^2. Throws DisconnectedGraph.
double stress_at_scale(const Graph& g, const Layout& layout, double scale);
double stress_at_scale(const DistanceMatrix& hops, const Layout& layout, double scale);

struct StressFit {
  double scale = 0.0;    // L*
  double minimum = 0.0;  // stress at L*, clamped at 0
};

/// Fits the exact quadratic through the stress at L0/2, L0 and 2 L0
/// (L0 = mean of d_layout / d_G) and returns its vertex. Throws
/// DisconnectedGraph and DegenerateLayout.
StressFit fit_stress_scale(const Graph& g, const Layout& layout);
StressFit fit_stress_scale(const DistanceMatrix& hops, const Layout& layout);

/// minimum / L*^2: the fitted stress of the layout shrunk by L*, so one hop
/// is one unit. Unchanged by rotating, moving or scaling the layout.
double scale_invariant_stress(const Graph& g, const Layout& layout);
double scale_invariant_stress(const DistanceMatrix& hops, const Layout& layout);

/// t = stress(a) - stress(b): lower stress wins.
Verdict stress_discriminate(const DistanceMatrix& hops, const Layout& a, const Layout& b);

struct QualityMetrics {
  std::size_t cc = 0;  // crossing count
  double cr = 0.0;     // smallest crossing angle, pi/2 without crossings
  double ar = 0.0;     // smallest angle between adjacent edges, pi without any
  double el = 0.0;     // population stddev of edge lengths (normalized layout)
  friend bool operator==(const QualityMetrics&, const QualityMetrics&) = default;
};

/// Two closed segments cross when they share no endpoint and intersect;
/// orientations within 1e-12 count as collinear and touching counts.
bool segments_cross(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2);

/// Metrics of the normalized layout. Throws ZeroLengthEdge.
QualityMetrics quality_metrics(const Graph& g, const Layout& layout);

inline constexpr std::size_t kCombMetrics = 4;
using CombWeights = std::array<double, kCombMetrics>;  // CC, CR, AR, EL

std::array<double, kCombMetrics> metric_values(const QualityMetrics& m);

/// (v - mean) / population stddev; 0 where the stddev is 0.
std::vector<double> z_scores(std::span<const double> values);

/// COMB of each layout in a set: sum_M w_M z_M, z taken across the set.
std::vector<double> comb_scores(const CombWeights& w, std::span<const QualityMetrics> layouts);

/// Higher COMB wins: t = COMB(b) - COMB(a).
Verdict comb_discriminate(const CombWeights& w, const QualityMetrics& a, const QualityMetrics& b);
Verdict comb_discriminate(const CombWeights& w, const Graph& g, const Layout& a, const Layout& b);

struct CombPair {
  QualityMetrics a;
  QualityMetrics b;
  double t = 0.0;  // label
};

/// Fraction of pairs whose verdict matches the label's side (ties go to b).
double comb_training_accuracy(const CombWeights& w, std::span<const CombPair> pairs);

struct CombFitOptions {
  int restarts = 10;
  int iterations = 200;
  std::uint64_t seed = 0;
};

/// Nelder-Mead maximization of comb_training_accuracy from seeded unit-sphere
/// starting points; the best restart wins. Throws EmptyInput.
CombWeights comb_fit_weights(std::span<const CombPair> pairs, const CombFitOptions& options);

/// "comb-weights 1" then one "<metric> <weight>" line per metric.
void write_comb_weights(const CombWeights& w, std::ostream& out);
/// Throws ParseError and VersionMismatch.
CombWeights read_comb_weights(std::istream& in);

}  // namespace layoutjudge
