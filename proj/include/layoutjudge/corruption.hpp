#pragma once

#include <cstdint>
#include <vector>

#include "layoutjudge/graph.hpp"

namespace layoutjudge {

struct WorsenSpec {
  WorsenKind kind = WorsenKind::kPerturb;
  double r = 0.0;  // in [0, 1]
  std::uint64_t seed = 0;
};

/// Number of swaps FLIP_NODES (ceil(r*n/2)) or FLIP_EDGES (ceil(r*m)) applies;
/// zero for the other kinds.
std::size_t worsen_swap_count(WorsenKind kind, double r, std::size_t n, std::size_t m);

/// Degrades a (normalized) layout by an amount controlled by r. The result is
/// not renormalized, so FLIP_* keep the coordinate multiset intact.
///   PERTURB     Gaussian noise, sigma = r * RMS radius about the centroid
///   FLIP_NODES  swap the positions of random vertex pairs
///   FLIP_EDGES  swap the positions of the endpoints of random edges
///   MOVLSQ      affine moving-least-squares warp driven by 6 control points on
///               the bounding circle, displaced by r * RMS radius / 2
Layout worsen(const Graph& g, const Layout& layout, const WorsenSpec& spec);

/// (1 - r) * a + r * b per vertex, then normalized. Throws DimensionMismatch.
Layout interpolate(const Graph& g, const Layout& a, const Layout& b, double r);

enum class PairKind { kProperGarbage, kWorsening, kInterpolation };

const char* to_string(PairKind kind);

/// Indices refer to the layout list of the enclosing PairSet. t < 0 means
/// layout a is the better one.
struct LabeledPair {
  std::size_t a = 0;
  std::size_t b = 0;
  double t = 0.0;
  PairKind kind = PairKind::kProperGarbage;
  friend bool operator==(const LabeledPair&, const LabeledPair&) = default;
};

struct AugmentConfig {
  std::vector<double> ladder{0.0, 0.15, 0.5, 1.0};
  std::vector<double> interpolation{0.0, 0.25, 0.75, 1.0};
  /// Worsening kinds handed out round-robin to the proper layouts, starting
  /// at a seeded offset.
  std::vector<WorsenKind> worsen_kinds{WorsenKind::kPerturb, WorsenKind::kFlipNodes,
                                       WorsenKind::kFlipEdges, WorsenKind::kMovlsq};
  double t_min = 0.2;
};

struct PairSet {
  /// proper layouts, then garbage layouts, then every derived layout
  std::vector<Layout> layouts;
  std::vector<LabeledPair> pairs;
};

/// Emits, each together with its swapped twin (negated t):
///  - every proper layout against every garbage layout, t = -1;
///  - for each proper layout, its worsening ladder: layouts at r1 < r2 give
///    t = r1 - r2;
///  - for each proper layout and one seeded garbage partner, interpolations at
///    r1 < r2 give t = r1 - r2, except (0, 1), which repeats the first kind.
/// Pairs with |t| < t_min are dropped. Inputs are expected normalized.
/// Throws EmptyInput when either list is empty.
PairSet make_labeled_pairs(const Graph& g, const std::vector<Layout>& proper,
                           const std::vector<Layout>& garbage, const AugmentConfig& config,
                           std::uint64_t seed);

}  // namespace layoutjudge
