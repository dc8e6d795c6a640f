#pragma once

#include <cstdint>
#include <vector>

#include "layoutjudge/graph.hpp"

namespace layoutjudge {

struct LayoutParams {
  int iterations = 1;
  std::uint64_t seed = 0;
  double tolerance = 1e-4;

  /// Spring embedder: 500 cooling steps, stop once no vertex moves more than
  /// tolerance (in ideal-edge-length units).
  static LayoutParams force_directed(std::uint64_t seed) { return {500, seed, 1e-4}; }
  /// Stress majorization: 200 sweeps, stop on relative stress change < 1e-7.
  static LayoutParams stress(std::uint64_t seed) { return {200, seed, 1e-7}; }
};

/// Translates the centroid to the origin and scales the mean edge length to
/// 1. Rotation is left alone. Throws DegenerateLayout when the graph has no
/// edges or the mean edge length is zero.
Layout normalize_layout(const Layout& layout, const Graph& g);

/// Fruchterman-Reingold spring embedder with all-pairs repulsion and a
/// linearly cooling temperature, from a seeded uniform start. Output is
/// normalized. Throws DisconnectedGraph.
Layout layout_force_directed(const Graph& g, const LayoutParams& params);

struct StressMajorizationResult {
  Layout layout;                       // normalized
  std::vector<double> stress_history;  // weighted stress at L = 1; [0] is the start
};

/// Localized stress majorization with weights 1/dist_G^2. The start is a
/// PivotMDS embedding whose pivots are picked max-min from a seeded first
/// vertex. Each sweep updates vertices in place, which never increases the
/// stress. Throws DisconnectedGraph.
StressMajorizationResult stress_majorization(const Graph& g, const LayoutParams& params);
Layout layout_stress_min(const Graph& g, const LayoutParams& params);

enum class RandomDistribution { kUniform, kNormal };

/// i.i.d. coordinates (unit square or standard normal), then normalized.
Layout layout_random(const Graph& g, RandomDistribution dist, std::uint64_t seed);

/// Random connected graph with n vertices and m edges: a uniform spanning tree
/// (Wilson's loop-erased walks on K_n) plus uniformly drawn non-edges.
Graph phantom_graph(std::size_t n, std::size_t m, std::uint64_t seed);

/// Force-directed layout of phantom_graph(n, m), with its coordinates handed
/// to g's vertices by index.
Layout layout_phantom(const Graph& g, std::uint64_t seed);

}  // namespace layoutjudge
