#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "layoutjudge/graph.hpp"

namespace layoutjudge {

enum class GeneratorKind {
  kGrid,
  kTorus1,
  kTorus2,
  kLindenmayer,
  kQuasi3d,
  kQuasi4d,
  kQuasi5d,
  kQuasi6d,
  kMosaic1,
  kMosaic2,
  kBottle,
};

inline constexpr GeneratorKind kAllGeneratorKinds[] = {
    GeneratorKind::kGrid,    GeneratorKind::kTorus1,  GeneratorKind::kTorus2,
    GeneratorKind::kLindenmayer, GeneratorKind::kQuasi3d, GeneratorKind::kQuasi4d,
    GeneratorKind::kQuasi5d, GeneratorKind::kQuasi6d, GeneratorKind::kMosaic1,
    GeneratorKind::kMosaic2, GeneratorKind::kBottle,
};

std::string to_string(GeneratorKind kind);
GeneratorKind parse_generator_kind(const std::string& text);
bool has_native_layout(GeneratorKind kind);

/// Grid and torus kinds use rows/cols; QUASI kinds use extent (derived from
/// target_n when extent is 0); every other kind uses target_n.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::kGrid;
  int rows = 0;
  int cols = 0;
  int extent = 0;
  int target_n = 0;
  std::uint64_t seed = 0;
};

/// Single-line description, e.g. "GRID rows=8 cols=8 seed=42".
std::string to_string(const GeneratorSpec& spec);
/// Inverse of to_string; missing keys stay 0. Throws ParseError.
GeneratorSpec parse_generator_spec(const std::string& text);

struct GeneratedGraph {
  Graph graph;
  std::optional<Layout> native;  // provenance NATIVE when present
};

/// Dispatches on spec.kind. Throws SizeTooSmall when the size parameters
/// violate the generator's precondition.
GeneratedGraph generate(const GeneratorSpec& spec);

/// Unit-spaced rows x cols lattice; vertex r*cols + c sits at (c, r).
std::pair<Graph, Layout> gen_grid(int rows, int cols);

/// Grid with wrap edges: order 1 joins the first and last rows (cylinder),
/// order 2 also joins the first and last columns. rows, cols >= 3.
Graph gen_torus(int rows, int cols, int order);

enum class LindenmayerRule { kSingleton, kStar, kWheel, kRing, kClique, kGrid };

/// Largest vertex-count increase a single replacement can cause: a 5x5 grid
/// replacing one vertex.
inline constexpr int kLindenmayerMaxGrowth = 24;

/// Stochastic L-system: starts from one vertex and replaces random vertices
/// with small substructures until at least target_n vertices exist.
std::pair<Graph, Layout> gen_lindenmayer(int target_n, std::uint64_t seed);

/// Extent^dim primitive cubic lattice projected onto a seeded random 2-plane.
std::pair<Graph, Layout> gen_quasi(int dim, int extent, std::uint64_t seed);

/// round(target_n^(1/dim)), at least 2.
int quasi_extent_for(int dim, int target_n);

enum class MosaicRule { kStar, kFlower, kShape };

/// Planar face-subdivision state. Faces are vertex cycles in counter-clockwise
/// order; the outer face is never subdivided. Exposed so the individual rules
/// can be checked in isolation.
class MosaicBuilder {
 public:
  explicit MosaicBuilder(int sides);

  /// Applies rule to face index; the first resulting face takes that index
  /// and the rest are appended.
  void apply(MosaicRule rule, std::size_t face);

  std::size_t vertex_count() const { return positions_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<std::vector<Vertex>>& faces() const { return faces_; }
  Graph graph() const;
  Layout layout() const;

 private:
  Vertex add_vertex(Vec2 p);
  void add_edge(Vertex a, Vertex b);
  Vertex subdivide(Vertex a, Vertex b);
  Vec2 centroid(const std::vector<Vertex>& face) const;
  bool occupied(Vec2 p) const;
  Vec2 interior_point(const std::vector<Vertex>& face) const;
  Vec2 edge_point(Vertex a, Vertex b) const;
  void replace_face(std::size_t face, std::vector<std::vector<Vertex>> pieces);

  std::vector<Vec2> positions_;
  std::vector<std::pair<Vertex, Vertex>> edges_;
  std::vector<std::vector<Vertex>> faces_;
};

/// variant 1: one random face and rule per step; variant 2: one random rule
/// applied to every face of the current round. Stops as soon as at least
/// target_n vertices exist.
std::pair<Graph, Layout> gen_mosaic(int variant, int target_n, std::uint64_t seed);

/// Quad mesh of rings x segments vertices over a seeded solid of revolution,
/// drawn in axonometric projection.
std::pair<Graph, Layout> gen_bottle_mesh(int rings, int segments, std::uint64_t seed);
std::pair<Graph, Layout> gen_bottle(int target_n, std::uint64_t seed);

}  // namespace layoutjudge
