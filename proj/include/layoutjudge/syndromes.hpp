#pragma once

#include <cstdint>
#include <vector>

#include "layoutjudge/graph.hpp"

namespace layoutjudge {

struct PrincipalAxes {
  Vec2 v1;  // larger eigenvalue
  Vec2 v2;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

/// Eigenvectors of the population covariance of the positions, ordered by
/// descending eigenvalue. Each vector's first nonzero component is positive.
/// When the eigenvalues are equal (relative 1e-12) the axes are (1,0), (0,1).
/// Throws DegenerateLayout when the covariance is zero.
PrincipalAxes principal_axes(const Layout& layout);

struct Princomp {
  std::vector<double> first;   // PRINCOMP1
  std::vector<double> second;  // PRINCOMP2
};

/// Centered projections of every position onto v1 and v2.
Princomp princomp(const Layout& layout);

/// Clockwise angles between consecutive incident edges of every vertex of
/// degree >= 2, plus one 2*pi per degree-1 vertex. Vertex order, then
/// clockwise from the edge with the largest polar angle. Throws ZeroLengthEdge.
std::vector<double> angular(const Graph& g, const Layout& layout);

/// One value per edge, in edge order.
std::vector<double> edge_length(const Graph& g, const Layout& layout);

/// |p_i - p_j| for every unordered pair i < j, row-major.
std::vector<double> rdf_global(const Layout& layout);

/// Pairs with graph distance <= d. Throws DisconnectedGraph.
std::vector<double> rdf_local(const Graph& g, const Layout& layout, int d);

/// |p_i - p_j| / dist_G(i, j) for every unordered pair. Throws DisconnectedGraph.
std::vector<double> tension(const Graph& g, const Layout& layout);

/// Every unordered pair's Euclidean and graph distance, stably sorted by graph
/// distance, so RDF_LOCAL(d) is a prefix.
class PairTable {
 public:
  PairTable(const Graph& g, const Layout& layout);
  /// Same, reusing a precomputed distance matrix of g.
  PairTable(const DistanceMatrix& hops, const Layout& layout);

  std::size_t size() const { return euclid_.size(); }
  const std::vector<double>& euclid() const { return euclid_; }
  const std::vector<std::uint16_t>& hops() const { return hops_; }
  std::size_t diameter() const { return hops_.empty() ? 0 : hops_.back(); }
  /// Number of leading pairs with hop distance <= d.
  std::size_t prefix(std::size_t d) const;
  std::vector<double> local(std::size_t d) const;
  std::vector<double> tension() const;

 private:
  std::vector<double> euclid_;
  std::vector<std::uint16_t> hops_;
};

}  // namespace layoutjudge
