#include "layoutjudge/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "layoutjudge/error.hpp"

namespace layoutjudge {
namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  /// Next non-blank, non-comment line. Comment lines are handed to on_comment.
  template <class OnComment>
  bool next(std::string& line, OnComment&& on_comment) {
    while (std::getline(in_, line)) {
      ++number_;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      if (line[first] == '#') {
        on_comment(line.substr(first + 1));
        continue;
      }
      return true;
    }
    return false;
  }

  bool next(std::string& line) {
    return next(line, [](const std::string&) {});
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::kParseError, "line " + std::to_string(number_) + ": " + what);
  }

  std::size_t number() const { return number_; }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

Graph read_graph(std::istream& in) {
  LineReader reader(in);
  std::string line;
  if (!reader.next(line)) reader.fail("missing 'n m' header");
  long long n = -1;
  long long m = -1;
  {
    std::istringstream header(line);
    std::string extra;
    if (!(header >> n >> m) || (header >> extra) || n < 1 || m < 0) {
      reader.fail("expected 'n m' header with n >= 1, m >= 0");
    }
  }

  std::vector<std::pair<Vertex, Vertex>> edges;
  edges.reserve(static_cast<std::size_t>(m));
  std::set<std::pair<Vertex, Vertex>> seen;
  while (reader.next(line)) {
    if (static_cast<long long>(edges.size()) == m) reader.fail("more than " + std::to_string(m) + " edges");
    std::istringstream row(line);
    long long u = -1;
    long long v = -1;
    std::string extra;
    if (!(row >> u >> v) || (row >> extra)) reader.fail("expected 'u v'");
    if (u < 0 || v < 0 || u >= n || v >= n) reader.fail("vertex index out of range");
    if (u == v) reader.fail("self-loop at vertex " + std::to_string(u));
    const std::pair<Vertex, Vertex> key{static_cast<Vertex>(std::min(u, v)), static_cast<Vertex>(std::max(u, v))};
    if (!seen.insert(key).second) {
      reader.fail("duplicate edge " + std::to_string(key.first) + " " + std::to_string(key.second));
    }
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  if (static_cast<long long>(edges.size()) != m) {
    reader.fail("edge count mismatch: header says " + std::to_string(m) + ", found " +
                std::to_string(edges.size()));
  }
  return Graph(static_cast<std::size_t>(n), edges);
}

Graph read_graph(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_graph(in);
}

void write_graph(const Graph& g, std::ostream& out, const std::vector<std::string>& labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) out << "# label " << i << ' ' << labels[i] << '\n';
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

void write_graph(const Graph& g, const std::filesystem::path& path,
                 const std::vector<std::string>& labels) {
  auto out = open_out(path);
  write_graph(g, out, labels);
}

Layout read_layout(std::istream& in) {
  LineReader reader(in);
  Layout layout;
  std::string line;
  auto on_comment = [&](const std::string& comment) {
    const std::string text = trim(comment);
    if (text.rfind("graph ", 0) == 0) {
      layout.graph_id = trim(text.substr(6));
    } else if (text.rfind("provenance ", 0) == 0) {
      layout.provenance = parse_provenance(trim(text.substr(11)));
    }
  };
  if (!reader.next(line, on_comment)) reader.fail("missing vertex count header");
  long long n = -1;
  {
    std::istringstream header(line);
    std::string extra;
    if (!(header >> n) || (header >> extra) || n < 1) reader.fail("expected vertex count n >= 1");
  }
  layout.positions.reserve(static_cast<std::size_t>(n));
  while (reader.next(line, on_comment)) {
    if (static_cast<long long>(layout.positions.size()) == n) {
      reader.fail("count mismatch: more than " + std::to_string(n) + " rows");
    }
    std::istringstream row(line);
    std::string xs;
    std::string ys;
    std::string extra;
    if (!(row >> xs >> ys) || (row >> extra)) reader.fail("expected 'x y'");
    Vec2 p;
    try {
      std::size_t used_x = 0;
      std::size_t used_y = 0;
      p.x = std::stod(xs, &used_x);
      p.y = std::stod(ys, &used_y);
      if (used_x != xs.size() || used_y != ys.size()) reader.fail("malformed coordinate");
    } catch (const std::logic_error&) {
      reader.fail("malformed coordinate");
    }
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) reader.fail("non-finite coordinate");
    layout.positions.push_back(p);
  }
  if (static_cast<long long>(layout.positions.size()) != n) {
    reader.fail("count mismatch: header says " + std::to_string(n) + " rows, found " +
                std::to_string(layout.positions.size()));
  }
  return layout;
}

Layout read_layout(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_layout(in);
}

Layout read_layout(const std::filesystem::path& path, const Graph& g) {
  Layout layout = read_layout(path);
  if (layout.size() != g.vertex_count()) {
    throw Error(ErrorCode::kParseError,
                path.string() + ": count mismatch: " + std::to_string(layout.size()) +
                    " rows for a graph with " + std::to_string(g.vertex_count()) + " vertices");
  }
  return layout;
}

void write_layout(const Layout& layout, std::ostream& out) {
  if (!layout.graph_id.empty()) out << "# graph " << layout.graph_id << '\n';
  out << "# provenance " << to_string(layout.provenance) << '\n';
  out << layout.size() << '\n';
  char buf[64];
  for (const auto& p : layout.positions) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.x, p.y);
    out << buf;
  }
}

void write_layout(const Layout& layout, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_layout(layout, out);
}

ImportedGraph import_edge_list(std::istream& in) {
  LineReader reader(in);
  std::map<std::string, Vertex> ids;
  ImportedGraph result;
  std::vector<std::pair<Vertex, Vertex>> edges;
  std::set<std::pair<Vertex, Vertex>> seen;
  auto id_of = [&](const std::string& label) {
    auto [it, inserted] = ids.emplace(label, static_cast<Vertex>(result.labels.size()));
    if (inserted) result.labels.push_back(label);
    return it->second;
  };
  std::string line;
  while (reader.next(line)) {
    std::istringstream row(line);
    std::string a;
    std::string b;
    if (!(row >> a >> b)) reader.fail("expected two vertex labels");
    if (a == b) reader.fail("self-loop at vertex '" + a + "'");
    const Vertex u = id_of(a);
    const Vertex v = id_of(b);
    if (seen.insert(std::minmax(u, v)).second) edges.emplace_back(u, v);
  }
  if (result.labels.empty()) throw Error(ErrorCode::kEmptyInput, "edge list has no edges");
  result.graph = Graph(result.labels.size(), edges);
  if (!result.graph.is_connected()) {
    throw Error(ErrorCode::kDisconnectedGraph, "imported graph is not connected");
  }
  return result;
}

ImportedGraph import_edge_list(const std::filesystem::path& path) {
  auto in = open_in(path);
  return import_edge_list(in);
}

}  // namespace layoutjudge
