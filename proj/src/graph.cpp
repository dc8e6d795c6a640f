#include "layoutjudge/graph.hpp"

#include <charconv>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>

#include "layoutjudge/error.hpp"

namespace layoutjudge {

Graph::Graph(std::size_t vertex_count, std::span<const std::pair<Vertex, Vertex>> edges)
    : n_(vertex_count) {
  edges_.reserve(edges.size());
  std::set<Edge> seen;
  std::vector<std::size_t> degree(n_, 0);
  for (const auto& [a, b] : edges) {
    if (a >= n_ || b >= n_) {
      throw Error(ErrorCode::kInvariantViolation,
                  "edge (" + std::to_string(a) + "," + std::to_string(b) + ") out of range");
    }
    if (a == b) {
      throw Error(ErrorCode::kInvariantViolation, "self-loop at vertex " + std::to_string(a));
    }
    const Edge e{std::min(a, b), std::max(a, b)};
    if (!seen.insert(e).second) {
      throw Error(ErrorCode::kInvariantViolation,
                  "duplicate edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
    }
    edges_.push_back(e);
    ++degree[e.u];
    ++degree[e.v];
  }

  offsets_.assign(n_ + 1, 0);
  for (std::size_t v = 0; v < n_; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  adjacency_.resize(offsets_[n_]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges_) {
    adjacency_[fill[e.u]++] = e.v;
    adjacency_[fill[e.v]++] = e.u;
  }
  for (std::size_t v = 0; v < n_; ++v) {
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
  }
}

Graph::Graph(std::size_t vertex_count, std::initializer_list<std::pair<Vertex, Vertex>> edges)
    : Graph(vertex_count, std::span<const std::pair<Vertex, Vertex>>(edges.begin(), edges.size())) {}

bool Graph::has_edge(Vertex a, Vertex b) const {
  const auto nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

bool Graph::is_connected() const {
  if (n_ == 0) return false;
  std::vector<char> seen(n_, 0);
  std::vector<Vertex> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    for (Vertex w : neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n_;
}

// Same expression as the distance kernels, so edge lengths and pair
// distances agree bit for bit.
double norm(Vec2 v) { return std::sqrt(v.x * v.x + v.y * v.y); }

namespace {

const char* kind_name(ProvenanceKind kind) {
  switch (kind) {
    case ProvenanceKind::kNative: return "NATIVE";
    case ProvenanceKind::kFdp: return "FDP";
    case ProvenanceKind::kStressMin: return "STRESS_MIN";
    case ProvenanceKind::kRandomUniform: return "RANDOM_UNIFORM";
    case ProvenanceKind::kRandomNormal: return "RANDOM_NORMAL";
    case ProvenanceKind::kPhantom: return "PHANTOM";
    case ProvenanceKind::kWorsened: return "WORSENED";
    case ProvenanceKind::kInterpolated: return "INTERPOLATED";
  }
  return "?";
}

std::string format_r(double r) {
  // shortest text that reads back to the same double
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, r);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string to_string(WorsenKind kind) {
  switch (kind) {
    case WorsenKind::kPerturb: return "PERTURB";
    case WorsenKind::kFlipNodes: return "FLIP_NODES";
    case WorsenKind::kFlipEdges: return "FLIP_EDGES";
    case WorsenKind::kMovlsq: return "MOVLSQ";
  }
  return "?";
}

WorsenKind parse_worsen_kind(const std::string& text) {
  std::string upper = text;
  for (auto& c : upper) c = (c == '-') ? '_' : static_cast<char>(std::toupper(c));
  for (auto kind : {WorsenKind::kPerturb, WorsenKind::kFlipNodes, WorsenKind::kFlipEdges,
                    WorsenKind::kMovlsq}) {
    if (to_string(kind) == upper) return kind;
  }
  throw Error(ErrorCode::kParseError, "unknown worsening kind '" + text + "'");
}

std::string to_string(const Provenance& p) {
  switch (p.kind) {
    case ProvenanceKind::kWorsened:
      return std::string("WORSENED(") + to_string(p.worsen) + "," + format_r(p.r) + ")";
    case ProvenanceKind::kInterpolated:
      return "INTERPOLATED(" + format_r(p.r) + ")";
    default:
      return kind_name(p.kind);
  }
}

Provenance parse_provenance(const std::string& text) {
  Provenance p;
  const auto open = text.find('(');
  const std::string head = text.substr(0, open);
  bool known = false;
  for (auto kind : {ProvenanceKind::kNative, ProvenanceKind::kFdp, ProvenanceKind::kStressMin,
                    ProvenanceKind::kRandomUniform, ProvenanceKind::kRandomNormal,
                    ProvenanceKind::kPhantom, ProvenanceKind::kWorsened,
                    ProvenanceKind::kInterpolated}) {
    if (head == kind_name(kind)) {
      p.kind = kind;
      known = true;
      break;
    }
  }
  if (!known) throw Error(ErrorCode::kParseError, "unknown provenance '" + text + "'");
  const bool parametric =
      p.kind == ProvenanceKind::kWorsened || p.kind == ProvenanceKind::kInterpolated;
  if (parametric != (open != std::string::npos) || (parametric && text.back() != ')')) {
    throw Error(ErrorCode::kParseError, "malformed provenance '" + text + "'");
  }
  if (parametric) {
    std::string args = text.substr(open + 1, text.size() - open - 2);
    if (p.kind == ProvenanceKind::kWorsened) {
      const auto comma = args.find(',');
      if (comma == std::string::npos) {
        throw Error(ErrorCode::kParseError, "malformed provenance '" + text + "'");
      }
      p.worsen = parse_worsen_kind(args.substr(0, comma));
      args = args.substr(comma + 1);
    }
    try {
      p.r = std::stod(args);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParseError, "malformed provenance '" + text + "'");
    }
  }
  return p;
}

bool is_proper(ProvenanceKind kind) {
  return kind == ProvenanceKind::kNative || kind == ProvenanceKind::kFdp ||
         kind == ProvenanceKind::kStressMin;
}

bool is_garbage(ProvenanceKind kind) {
  return kind == ProvenanceKind::kRandomUniform || kind == ProvenanceKind::kRandomNormal ||
         kind == ProvenanceKind::kPhantom;
}

double euclidean_distance(const Layout& layout, Vertex u, Vertex v) {
  return norm(layout.positions[u] - layout.positions[v]);
}

void check_layout(const Graph& g, const Layout& layout) {
  if (layout.positions.size() != g.vertex_count()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "layout has " + std::to_string(layout.positions.size()) +
                    " positions for a graph with " + std::to_string(g.vertex_count()) +
                    " vertices");
  }
  for (const auto& p : layout.positions) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorCode::kInvariantViolation, "non-finite layout coordinate");
    }
  }
}

std::uint16_t DistanceMatrix::max() const {
  return entries_.empty() ? 0 : *std::max_element(entries_.begin(), entries_.end());
}

DistanceMatrix shortest_path_distances(const Graph& g) {
  const std::size_t n = g.vertex_count();
  if (n > DistanceMatrix::kMaxVertices) {
    throw Error(ErrorCode::kGraphTooLarge,
                std::to_string(n) + " vertices exceeds the dense distance limit of " +
                    std::to_string(DistanceMatrix::kMaxVertices));
  }
  constexpr auto kUnreached = std::numeric_limits<std::uint16_t>::max();
  std::vector<std::uint16_t> entries(n * n, kUnreached);
  std::vector<Vertex> queue(n);
  for (std::size_t source = 0; source < n; ++source) {
    std::uint16_t* row = entries.data() + source * n;
    row[source] = 0;
    std::size_t head = 0;
    std::size_t tail = 0;
    queue[tail++] = static_cast<Vertex>(source);
    while (head < tail) {
      const Vertex v = queue[head++];
      for (Vertex w : g.neighbors(v)) {
        if (row[w] == kUnreached) {
          row[w] = static_cast<std::uint16_t>(row[v] + 1);
          queue[tail++] = w;
        }
      }
    }
    if (tail != n) {
      throw Error(ErrorCode::kDisconnectedGraph,
                  "vertex " + std::to_string(source) + " reaches only " + std::to_string(tail) +
                      " of " + std::to_string(n) + " vertices");
    }
  }
  return DistanceMatrix(n, std::move(entries));
}

std::size_t diameter(const Graph& g) { return shortest_path_distances(g).max(); }

}  // namespace layoutjudge
