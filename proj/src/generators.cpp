#include "layoutjudge/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "layoutjudge/error.hpp"
#include "layoutjudge/rng.hpp"

namespace layoutjudge {
namespace {

using EdgeList = std::vector<std::pair<Vertex, Vertex>>;

Layout native_layout(std::vector<Vec2> positions) {
  Layout layout;
  layout.positions = std::move(positions);
  layout.provenance.kind = ProvenanceKind::kNative;
  return layout;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kSizeTooSmall, what);
}

}  // namespace

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::kGrid: return "GRID";
    case GeneratorKind::kTorus1: return "TORUS1";
    case GeneratorKind::kTorus2: return "TORUS2";
    case GeneratorKind::kLindenmayer: return "LINDENMAYER";
    case GeneratorKind::kQuasi3d: return "QUASI3D";
    case GeneratorKind::kQuasi4d: return "QUASI4D";
    case GeneratorKind::kQuasi5d: return "QUASI5D";
    case GeneratorKind::kQuasi6d: return "QUASI6D";
    case GeneratorKind::kMosaic1: return "MOSAIC1";
    case GeneratorKind::kMosaic2: return "MOSAIC2";
    case GeneratorKind::kBottle: return "BOTTLE";
  }
  return "?";
}

GeneratorKind parse_generator_kind(const std::string& text) {
  std::string upper;
  for (char c : text) upper += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (auto kind : kAllGeneratorKinds) {
    if (to_string(kind) == upper) return kind;
  }
  throw Error(ErrorCode::kParseError, "unknown generator kind '" + text + "'");
}

bool has_native_layout(GeneratorKind kind) {
  return kind != GeneratorKind::kTorus1 && kind != GeneratorKind::kTorus2;
}

std::string to_string(const GeneratorSpec& spec) {
  std::string out = to_string(spec.kind);
  switch (spec.kind) {
    case GeneratorKind::kGrid:
    case GeneratorKind::kTorus1:
    case GeneratorKind::kTorus2:
      out += " rows=" + std::to_string(spec.rows) + " cols=" + std::to_string(spec.cols);
      break;
    case GeneratorKind::kQuasi3d:
    case GeneratorKind::kQuasi4d:
    case GeneratorKind::kQuasi5d:
    case GeneratorKind::kQuasi6d:
      out += " extent=" + std::to_string(spec.extent) + " target_n=" + std::to_string(spec.target_n);
      break;
    default:
      out += " target_n=" + std::to_string(spec.target_n);
      break;
  }
  return out + " seed=" + std::to_string(spec.seed);
}

GeneratorSpec parse_generator_spec(const std::string& text) {
  std::istringstream in(text);
  std::string token;
  if (!(in >> token)) throw Error(ErrorCode::kParseError, "empty generator spec");
  GeneratorSpec spec;
  spec.kind = parse_generator_kind(token);
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kParseError, "expected key=value, got '" + token + "'");
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    try {
      std::size_t used = 0;
      if (key == "seed") {
        spec.seed = std::stoull(value, &used);
      } else {
        const int v = std::stoi(value, &used);
        if (key == "rows") spec.rows = v;
        else if (key == "cols") spec.cols = v;
        else if (key == "extent") spec.extent = v;
        else if (key == "target_n") spec.target_n = v;
        else throw Error(ErrorCode::kParseError, "unknown generator key '" + key + "'");
      }
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kParseError, "bad value in '" + token + "'");
    }
  }
  return spec;
}

GeneratedGraph generate(const GeneratorSpec& spec) {
  auto with_native = [](std::pair<Graph, Layout> p) {
    return GeneratedGraph{std::move(p.first), std::move(p.second)};
  };
  auto quasi = [&](int dim) {
    const int extent = spec.extent > 0 ? spec.extent : quasi_extent_for(dim, spec.target_n);
    return with_native(gen_quasi(dim, extent, spec.seed));
  };
  switch (spec.kind) {
    case GeneratorKind::kGrid: return with_native(gen_grid(spec.rows, spec.cols));
    case GeneratorKind::kTorus1: return {gen_torus(spec.rows, spec.cols, 1), std::nullopt};
    case GeneratorKind::kTorus2: return {gen_torus(spec.rows, spec.cols, 2), std::nullopt};
    case GeneratorKind::kLindenmayer: return with_native(gen_lindenmayer(spec.target_n, spec.seed));
    case GeneratorKind::kQuasi3d: return quasi(3);
    case GeneratorKind::kQuasi4d: return quasi(4);
    case GeneratorKind::kQuasi5d: return quasi(5);
    case GeneratorKind::kQuasi6d: return quasi(6);
    case GeneratorKind::kMosaic1: return with_native(gen_mosaic(1, spec.target_n, spec.seed));
    case GeneratorKind::kMosaic2: return with_native(gen_mosaic(2, spec.target_n, spec.seed));
    case GeneratorKind::kBottle: return with_native(gen_bottle(spec.target_n, spec.seed));
  }
  throw Error(ErrorCode::kInvariantViolation, "unhandled generator kind");
}

// ---------------------------------------------------------------------------
// GRID / TORUS

namespace {

EdgeList lattice_edges(int rows, int cols) {
  EdgeList edges;
  auto id = [cols](int r, int c) { return static_cast<Vertex>(r * cols + c); };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
    }
  }
  return edges;
}

}  // namespace

std::pair<Graph, Layout> gen_grid(int rows, int cols) {
  require(rows >= 2 && cols >= 2, "grid needs rows, cols >= 2");
  std::vector<Vec2> positions;
  positions.reserve(static_cast<std::size_t>(rows * cols));
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) positions.push_back({double(c), double(r)});
  }
  const EdgeList edges = lattice_edges(rows, cols);
  return {Graph(static_cast<std::size_t>(rows * cols), edges), native_layout(std::move(positions))};
}

Graph gen_torus(int rows, int cols, int order) {
  require(rows >= 3 && cols >= 3, "torus needs rows, cols >= 3");
  if (order != 1 && order != 2) {
    throw Error(ErrorCode::kInvariantViolation, "torus order must be 1 or 2");
  }
  EdgeList edges = lattice_edges(rows, cols);
  auto id = [cols](int r, int c) { return static_cast<Vertex>(r * cols + c); };
  for (int c = 0; c < cols; ++c) edges.emplace_back(id(0, c), id(rows - 1, c));
  if (order == 2) {
    for (int r = 0; r < rows; ++r) edges.emplace_back(id(r, 0), id(r, cols - 1));
  }
  return Graph(static_cast<std::size_t>(rows * cols), edges);
}

// ---------------------------------------------------------------------------
// LINDENMAYER

namespace {

class LSystem {
 public:
  LSystem() : positions_{{0.0, 0.0}}, adjacency_(1) {}

  std::size_t size() const { return positions_.size(); }

  void replace(Vertex v, LindenmayerRule rule, Rng& rng) {
    if (rule == LindenmayerRule::kSingleton) return;

    std::vector<Vertex> nbrs(adjacency_[v].begin(), adjacency_[v].end());
    const Vec2 center = positions_[v];
    const double radius = disc_radius(v);

    if (rule == LindenmayerRule::kGrid) {
      replace_with_grid(v, rng.between(3, 5), rng.between(3, 5), center, radius);
      return;
    }

    // Neighbors in angular order around v, so the stitched edges fan out
    // without crossing each other.
    std::sort(nbrs.begin(), nbrs.end(), [&](Vertex a, Vertex b) {
      return angle_from(center, a) < angle_from(center, b);
    });
    const int d = static_cast<int>(nbrs.size());
    const int s = std::max(rng.between(3, 8), d);
    const double phase = d > 0 ? angle_from(center, nbrs[0]) : rng.uniform(0.0, 2.0 * std::numbers::pi);

    for (Vertex u : nbrs) unlink(v, u);

    const bool keep_center = rule == LindenmayerRule::kStar || rule == LindenmayerRule::kWheel;
    std::vector<Vertex> ring(static_cast<std::size_t>(s));
    for (int j = 0; j < s; ++j) {
      const double a = phase + 2.0 * std::numbers::pi * j / s;
      const Vec2 p = center + Vec2{std::cos(a), std::sin(a)} * radius;
      if (j == 0 && !keep_center) {
        positions_[v] = p;
        ring[0] = v;
      } else {
        ring[static_cast<std::size_t>(j)] = add_vertex(p);
      }
    }

    if (keep_center) {
      for (Vertex w : ring) link(v, w);
    }
    if (rule == LindenmayerRule::kWheel || rule == LindenmayerRule::kRing) {
      for (int j = 0; j < s; ++j) link(ring[j], ring[(j + 1) % s]);
    }
    if (rule == LindenmayerRule::kClique) {
      for (int a = 0; a < s; ++a) {
        for (int b = a + 1; b < s; ++b) link(ring[a], ring[b]);
      }
    }
    for (int i = 0; i < d; ++i) link(nbrs[i], ring[static_cast<std::size_t>(i * s / d)]);
  }

  std::size_t degree(Vertex v) const { return adjacency_[v].size(); }

  std::pair<Graph, Layout> finish() const {
    EdgeList edges;
    for (Vertex v = 0; v < adjacency_.size(); ++v) {
      for (Vertex w : adjacency_[v]) {
        if (v < w) edges.emplace_back(v, w);
      }
    }
    return {Graph(positions_.size(), edges), native_layout(positions_)};
  }

 private:
  double angle_from(Vec2 c, Vertex u) const {
    return std::atan2(positions_[u].y - c.y, positions_[u].x - c.x);
  }

  // Replacement structures live inside a disc that stays clear of every
  // other vertex, so coordinates remain distinct.
  double disc_radius(Vertex v) const {
    double nearest = std::numeric_limits<double>::infinity();
    for (Vertex u = 0; u < positions_.size(); ++u) {
      if (u != v) nearest = std::min(nearest, norm(positions_[u] - positions_[v]));
    }
    return std::isfinite(nearest) ? 0.4 * nearest : 1.0;
  }

  Vertex add_vertex(Vec2 p) {
    positions_.push_back(p);
    adjacency_.emplace_back();
    return static_cast<Vertex>(positions_.size() - 1);
  }

  void link(Vertex a, Vertex b) {
    adjacency_[a].insert(b);
    adjacency_[b].insert(a);
  }

  void unlink(Vertex a, Vertex b) {
    adjacency_[a].erase(b);
    adjacency_[b].erase(a);
  }

  void replace_with_grid(Vertex v, int rows, int cols, Vec2 center, double radius) {
    const double half_w = (cols - 1) / 2.0;
    const double half_h = (rows - 1) / 2.0;
    const double step = radius / std::hypot(half_w, half_h);
    const int center_r = rows / 2;
    const int center_c = cols / 2;
    std::vector<Vertex> ids(static_cast<std::size_t>(rows * cols));
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const Vec2 p = center + Vec2{(c - half_w) * step, (r - half_h) * step};
        if (r == center_r && c == center_c) {
          positions_[v] = p;
          ids[static_cast<std::size_t>(r * cols + c)] = v;
        } else {
          ids[static_cast<std::size_t>(r * cols + c)] = add_vertex(p);
        }
      }
    }
    for (const auto& [a, b] : lattice_edges(rows, cols)) link(ids[a], ids[b]);
  }

  std::vector<Vec2> positions_;
  std::vector<std::set<Vertex>> adjacency_;
};

}  // namespace

std::pair<Graph, Layout> gen_lindenmayer(int target_n, std::uint64_t seed) {
  require(target_n >= 2, "lindenmayer needs target_n >= 2");
  Rng rng(seed);
  LSystem system;
  constexpr LindenmayerRule kRules[] = {LindenmayerRule::kSingleton, LindenmayerRule::kStar,
                                        LindenmayerRule::kWheel,     LindenmayerRule::kRing,
                                        LindenmayerRule::kClique,    LindenmayerRule::kGrid};
  while (system.size() < static_cast<std::size_t>(target_n)) {
    const auto v = static_cast<Vertex>(rng.below(system.size()));
    // The grid rule only applies to isolated vertices.
    const std::size_t rule_count = system.degree(v) == 0 ? 6 : 5;
    system.replace(v, kRules[rng.below(rule_count)], rng);
  }
  return system.finish();
}

// ---------------------------------------------------------------------------
// QUASI<n>D

int quasi_extent_for(int dim, int target_n) {
  const double e = std::round(std::pow(std::max(target_n, 1), 1.0 / dim));
  return std::max(2, static_cast<int>(e));
}

std::pair<Graph, Layout> gen_quasi(int dim, int extent, std::uint64_t seed) {
  if (dim < 3 || dim > 6) throw Error(ErrorCode::kInvariantViolation, "quasi dimension must be 3..6");
  require(extent >= 2, "quasi lattice needs extent >= 2");
  std::size_t n = 1;
  for (int k = 0; k < dim; ++k) n *= static_cast<std::size_t>(extent);
  if (n > DistanceMatrix::kMaxVertices) {
    throw Error(ErrorCode::kGraphTooLarge, "quasi lattice has " + std::to_string(n) + " vertices");
  }

  // Orthonormal basis of a random 2-plane in R^dim.
  Rng rng(seed);
  std::vector<double> b1(static_cast<std::size_t>(dim));
  std::vector<double> b2(static_cast<std::size_t>(dim));
  auto normalize = [](std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    s = std::sqrt(s);
    for (double& x : v) x /= s;
  };
  for (double& x : b1) x = rng.normal();
  normalize(b1);
  for (double& x : b2) x = rng.normal();
  double dot = 0.0;
  for (int k = 0; k < dim; ++k) dot += b1[k] * b2[k];
  for (int k = 0; k < dim; ++k) b2[k] -= dot * b1[k];
  normalize(b2);

  std::vector<Vec2> positions(n);
  EdgeList edges;
  std::vector<int> coord(static_cast<std::size_t>(dim), 0);
  for (std::size_t id = 0; id < n; ++id) {
    std::size_t rest = id;
    std::size_t stride = 1;
    Vec2 p;
    for (int k = 0; k < dim; ++k) {
      coord[k] = static_cast<int>(rest % static_cast<std::size_t>(extent));
      rest /= static_cast<std::size_t>(extent);
      p.x += coord[k] * b1[k];
      p.y += coord[k] * b2[k];
      if (coord[k] + 1 < extent) {
        edges.emplace_back(static_cast<Vertex>(id), static_cast<Vertex>(id + stride));
      }
      stride *= static_cast<std::size_t>(extent);
    }
    positions[id] = p;
  }
  return {Graph(n, edges), native_layout(std::move(positions))};
}

// ---------------------------------------------------------------------------
// MOSAIC

MosaicBuilder::MosaicBuilder(int sides) {
  require(sides >= 3, "mosaic polygon needs at least 3 sides");
  std::vector<Vertex> face;
  for (int i = 0; i < sides; ++i) {
    const double a = 2.0 * std::numbers::pi * i / sides;
    face.push_back(add_vertex({std::cos(a), std::sin(a)}));
  }
  for (int i = 0; i < sides; ++i) add_edge(face[i], face[(i + 1) % sides]);
  faces_.push_back(std::move(face));
}

Vertex MosaicBuilder::add_vertex(Vec2 p) {
  positions_.push_back(p);
  return static_cast<Vertex>(positions_.size() - 1);
}

bool MosaicBuilder::occupied(Vec2 p) const {
  for (const auto& q : positions_) {
    if (norm(p - q) < 1e-9) return true;
  }
  return false;
}

// Face centroid, or when a vertex already sits there, a point pulled
// progressively toward the first face vertex.
Vec2 MosaicBuilder::interior_point(const std::vector<Vertex>& face) const {
  const Vec2 c = centroid(face);
  Vec2 p = c;
  for (int k = 1; occupied(p) && k < 10; ++k) p = c + (positions_[face[0]] - c) * (0.1 * k);
  return p;
}

// Edge midpoint, or when taken, a point slid along the edge.
Vec2 MosaicBuilder::edge_point(Vertex a, Vertex b) const {
  const Vec2 pa = positions_[a];
  const Vec2 d = positions_[b] - pa;
  Vec2 p = pa + d * 0.5;
  for (int k = 1; occupied(p) && k < 5; ++k) p = pa + d * (0.5 + 0.08 * (k % 2 ? k : -k));
  return p;
}

void MosaicBuilder::add_edge(Vertex a, Vertex b) { edges_.emplace_back(std::min(a, b), std::max(a, b)); }

Vec2 MosaicBuilder::centroid(const std::vector<Vertex>& face) const {
  Vec2 c;
  for (Vertex v : face) c = c + positions_[v];
  return c * (1.0 / static_cast<double>(face.size()));
}

// Splits edge (a, b) at its midpoint and threads the new vertex into every
// face that has a and b adjacent on its boundary.
Vertex MosaicBuilder::subdivide(Vertex a, Vertex b) {
  const auto key = std::make_pair(std::min(a, b), std::max(a, b));
  const auto it = std::find(edges_.begin(), edges_.end(), key);
  if (it == edges_.end()) throw Error(ErrorCode::kInvariantViolation, "subdividing a missing edge");
  edges_.erase(it);
  const Vertex w = add_vertex(edge_point(a, b));
  add_edge(a, w);
  add_edge(w, b);
  for (auto& face : faces_) {
    const std::size_t k = face.size();
    for (std::size_t i = 0; i < k; ++i) {
      const Vertex p = face[i];
      const Vertex q = face[(i + 1) % k];
      if ((p == a && q == b) || (p == b && q == a)) {
        face.insert(face.begin() + static_cast<std::ptrdiff_t>(i + 1), w);
        break;
      }
    }
  }
  return w;
}

void MosaicBuilder::replace_face(std::size_t face, std::vector<std::vector<Vertex>> pieces) {
  faces_[face] = std::move(pieces[0]);
  for (std::size_t i = 1; i < pieces.size(); ++i) faces_.push_back(std::move(pieces[i]));
}

void MosaicBuilder::apply(MosaicRule rule, std::size_t face) {
  const std::vector<Vertex> boundary = faces_.at(face);
  const std::size_t k = boundary.size();
  const Vec2 mid = interior_point(boundary);
  std::vector<std::vector<Vertex>> pieces;

  switch (rule) {
    case MosaicRule::kStar: {
      const Vertex c = add_vertex(mid);
      for (std::size_t i = 0; i < k; ++i) {
        add_edge(c, boundary[i]);
        pieces.push_back({boundary[i], boundary[(i + 1) % k], c});
      }
      break;
    }
    case MosaicRule::kFlower:
    case MosaicRule::kShape: {
      std::vector<Vertex> split(k);
      for (std::size_t i = 0; i < k; ++i) split[i] = subdivide(boundary[i], boundary[(i + 1) % k]);
      if (rule == MosaicRule::kFlower) {
        const Vertex c = add_vertex(mid);
        for (std::size_t i = 0; i < k; ++i) {
          add_edge(c, split[i]);
          pieces.push_back({split[(i + k - 1) % k], boundary[i], split[i], c});
        }
      } else {
        for (std::size_t i = 0; i < k; ++i) add_edge(split[i], split[(i + 1) % k]);
        pieces.push_back(split);
        for (std::size_t i = 0; i < k; ++i) {
          pieces.push_back({split[(i + k - 1) % k], boundary[i], split[i]});
        }
      }
      break;
    }
  }
  replace_face(face, std::move(pieces));
}

Graph MosaicBuilder::graph() const { return Graph(positions_.size(), edges_); }

Layout MosaicBuilder::layout() const { return native_layout(positions_); }

std::pair<Graph, Layout> gen_mosaic(int variant, int target_n, std::uint64_t seed) {
  require(target_n >= 3, "mosaic needs target_n >= 3");
  if (variant != 1 && variant != 2) {
    throw Error(ErrorCode::kInvariantViolation, "mosaic variant must be 1 or 2");
  }
  Rng rng(seed);
  MosaicBuilder mosaic(rng.between(3, 8));
  constexpr MosaicRule kRules[] = {MosaicRule::kStar, MosaicRule::kFlower, MosaicRule::kShape};
  auto done = [&] { return mosaic.vertex_count() >= static_cast<std::size_t>(target_n); };

  while (!done()) {
    if (variant == 1) {
      const auto face = static_cast<std::size_t>(rng.below(mosaic.faces().size()));
      mosaic.apply(kRules[rng.below(3)], face);
    } else {
      const std::size_t round_faces = mosaic.faces().size();
      for (std::size_t f = 0; f < round_faces && !done(); ++f) {
        mosaic.apply(kRules[rng.below(3)], f);
      }
    }
  }
  return {mosaic.graph(), mosaic.layout()};
}

// ---------------------------------------------------------------------------
// BOTTLE

std::pair<Graph, Layout> gen_bottle_mesh(int rings, int segments, std::uint64_t seed) {
  require(rings >= 2 && segments >= 3, "bottle needs rings >= 2, segments >= 3");
  Rng rng(seed);

  // Piecewise-linear radius profile over 4..8 control radii in [0.5, 2].
  const int controls = rng.between(4, 8);
  std::vector<double> profile(static_cast<std::size_t>(controls));
  for (double& r : profile) r = rng.uniform(0.5, 2.0);
  auto radius_at = [&](double t) {
    const double x = t * (controls - 1);
    const int i = std::min(static_cast<int>(x), controls - 2);
    const double f = x - i;
    return (1.0 - f) * profile[i] + f * profile[i + 1];
  };

  const double azimuth = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double elevation = std::numbers::pi / 6.0;
  const double ring_spacing = 2.0 * std::numbers::pi / segments;

  std::vector<Vec2> positions;
  positions.reserve(static_cast<std::size_t>(rings * segments));
  for (int k = 0; k < rings; ++k) {
    const double radius = radius_at(static_cast<double>(k) / (rings - 1));
    const double z = k * ring_spacing;
    for (int j = 0; j < segments; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / segments + azimuth;
      const double x = radius * std::cos(phi);
      const double depth = radius * std::sin(phi);
      positions.push_back({x, z * std::cos(elevation) + depth * std::sin(elevation)});
    }
  }

  EdgeList edges;
  auto id = [segments](int k, int j) { return static_cast<Vertex>(k * segments + j); };
  for (int k = 0; k < rings; ++k) {
    for (int j = 0; j < segments; ++j) {
      edges.emplace_back(id(k, j), id(k, (j + 1) % segments));
      if (k + 1 < rings) edges.emplace_back(id(k, j), id(k + 1, j));
    }
  }
  return {Graph(positions.size(), edges), native_layout(std::move(positions))};
}

std::pair<Graph, Layout> gen_bottle(int target_n, std::uint64_t seed) {
  require(target_n >= 8, "bottle needs target_n >= 8");
  Rng rng(Rng::derive(seed, 0xB0771E));
  const int segments = std::clamp(rng.between(6, 12), 4, target_n / 2);
  const int rings = std::max(2, static_cast<int>(std::lround(double(target_n) / segments)));
  return gen_bottle_mesh(rings, segments, seed);
}

}  // namespace layoutjudge
