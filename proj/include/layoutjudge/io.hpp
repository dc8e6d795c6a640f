#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "layoutjudge/graph.hpp"

namespace layoutjudge {

// Graph file:   first line "n m", then m lines "u v" (0-based). Lines starting
//               with '#' are comments.
// Layout file:  first line "n", then n lines "x y"; row i is vertex i.
//               "# graph <id>" and "# provenance <tag>" comments are written
//               and read back when present.
// Coordinates are written with 17 significant digits, so read(write(x)) == x.

Graph read_graph(std::istream& in);
Graph read_graph(const std::filesystem::path& path);
/// labels, if non-empty, are stored as "# label <id> <name>" comment lines.
void write_graph(const Graph& g, std::ostream& out, const std::vector<std::string>& labels = {});
void write_graph(const Graph& g, const std::filesystem::path& path,
                 const std::vector<std::string>& labels = {});

Layout read_layout(std::istream& in);
Layout read_layout(const std::filesystem::path& path);
/// Also checks the row count against g.
Layout read_layout(const std::filesystem::path& path, const Graph& g);
void write_layout(const Layout& layout, std::ostream& out);
void write_layout(const Layout& layout, const std::filesystem::path& path);

struct ImportedGraph {
  Graph graph;
  std::vector<std::string> labels;  // labels[id] = original vertex label
};

/// Generic edge list with arbitrary whitespace-separated vertex labels, one
/// edge per line. Labels are remapped to dense ids in order of appearance;
/// duplicate edges are collapsed. Self-loops and disconnected graphs are
/// rejected.
ImportedGraph import_edge_list(std::istream& in);
ImportedGraph import_edge_list(const std::filesystem::path& path);

}  // namespace layoutjudge
