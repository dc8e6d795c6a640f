#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace layoutjudge {

using Vertex = std::uint32_t;

struct Edge {
  Vertex u;  // u < v
  Vertex v;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable simple undirected graph on dense vertex ids 0..n-1.
class Graph {
 public:
  Graph() = default;

  /// Validates and normalizes the edge list: each pair is stored once with
  /// u < v, in the order given. Throws InvariantViolation on self-loops,
  /// duplicate edges or out-of-range endpoints.
  Graph(std::size_t vertex_count, std::span<const std::pair<Vertex, Vertex>> edges);
  Graph(std::size_t vertex_count, std::initializer_list<std::pair<Vertex, Vertex>> edges);

  std::size_t vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const Vertex> neighbors(Vertex v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(Vertex a, Vertex b) const;
  bool is_connected() const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Vertex> adjacency_;  // sorted within each vertex block
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
};

double norm(Vec2 v);

enum class ProvenanceKind {
  kNative,
  kFdp,
  kStressMin,
  kRandomUniform,
  kRandomNormal,
  kPhantom,
  kWorsened,
  kInterpolated,
};

enum class WorsenKind { kPerturb, kFlipNodes, kFlipEdges, kMovlsq };

struct Provenance {
  ProvenanceKind kind = ProvenanceKind::kNative;
  WorsenKind worsen = WorsenKind::kPerturb;  // meaningful for kWorsened only
  double r = 0.0;                            // kWorsened and kInterpolated

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// "NATIVE", "FDP", ..., "WORSENED(PERTURB,0.5)", "INTERPOLATED(0.25)".
std::string to_string(const Provenance& p);
Provenance parse_provenance(const std::string& text);
std::string to_string(WorsenKind kind);
WorsenKind parse_worsen_kind(const std::string& text);

bool is_proper(ProvenanceKind kind);
bool is_garbage(ProvenanceKind kind);

/// Per-vertex 2-D positions for one graph.
struct Layout {
  std::string graph_id;
  std::vector<Vec2> positions;
  Provenance provenance;

  std::size_t size() const { return positions.size(); }
  friend bool operator==(const Layout&, const Layout&) = default;
};

double euclidean_distance(const Layout& layout, Vertex u, Vertex v);

/// Throws InvariantViolation unless positions.size() == g.vertex_count() and
/// all coordinates are finite.
void check_layout(const Graph& g, const Layout& layout);

/// Dense all-pairs hop distances (16-bit).
class DistanceMatrix {
 public:
  static constexpr std::size_t kMaxVertices = 4000;

  DistanceMatrix() = default;
  DistanceMatrix(std::size_t n, std::vector<std::uint16_t> entries)
      : n_(n), entries_(std::move(entries)) {}

  std::size_t size() const { return n_; }
  std::uint16_t operator()(std::size_t u, std::size_t v) const { return entries_[u * n_ + v]; }
  std::span<const std::uint16_t> row(std::size_t u) const {
    return {entries_.data() + u * n_, n_};
  }
  std::uint16_t max() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint16_t> entries_;
};

/// BFS from every vertex. Throws DisconnectedGraph if any pair is unreachable
/// and GraphTooLarge above DistanceMatrix::kMaxVertices.
DistanceMatrix shortest_path_distances(const Graph& g);

/// Throws DisconnectedGraph.
std::size_t diameter(const Graph& g);

}  // namespace layoutjudge
