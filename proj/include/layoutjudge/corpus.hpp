#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "layoutjudge/baselines.hpp"
#include "layoutjudge/corruption.hpp"
#include "layoutjudge/features.hpp"
#include "layoutjudge/generators.hpp"
#include "layoutjudge/graph.hpp"

namespace layoutjudge {

struct CorpusConfig {
  std::size_t graph_count = 120;
  int min_n = 16;  // target sizes are log-uniform in [min_n, max_n]
  int max_n = 400;
  /// Generator kinds, cycled through in order.
  std::vector<GeneratorKind> kinds{std::begin(kAllGeneratorKinds), std::end(kAllGeneratorKinds)};
  AugmentConfig augment;
};

/// "key=value" lines; unknown keys throw ParseError. Keys: graphs, min_n,
/// max_n, kinds (comma list), ladder, interpolation, worsen_kinds, t_min.
CorpusConfig parse_corpus_config(std::istream& in);
std::string to_string(const CorpusConfig& config);

struct CorpusGraph {
  std::string id;
  GeneratorSpec spec;
  Graph graph;
};

struct CorpusLayout {
  std::size_t graph = 0;  // index into Corpus::graphs
  Layout layout;
};

struct CorpusPair {
  std::size_t a = 0;  // indices into Corpus::layouts, both of the same graph
  std::size_t b = 0;
  double t = 0.0;
  PairKind kind = PairKind::kProperGarbage;
  friend bool operator==(const CorpusPair&, const CorpusPair&) = default;
};

struct Corpus {
  CorpusConfig config;
  std::uint64_t seed = 0;
  std::vector<CorpusGraph> graphs;
  std::vector<CorpusLayout> layouts;
  std::vector<CorpusPair> pairs;
  /// Per layout, filled by compute_features / compute_baseline_inputs.
  std::vector<FeatureVector> features;
  std::vector<double> stress;
  std::vector<QualityMetrics> metrics;

  std::size_t graph_of_pair(std::size_t pair) const { return layouts[pairs[pair].a].graph; }
};

/// Generator spec of the i-th corpus graph: kind config.kinds[i % k], size
/// drawn log-uniformly from the seeded stream.
GeneratorSpec corpus_graph_spec(const CorpusConfig& config, std::size_t index, std::uint64_t seed);

/// Per graph: proper layouts native (if any), force-directed and stress (a
/// second force-directed seed stands in for a missing native layout);
/// garbage layouts phantom and random; then the labeled pairs of
/// make_labeled_pairs. Features are computed too. Graphs are built in
/// parallel, each from its own derived seed.
Corpus build_corpus(const CorpusConfig& config, std::uint64_t seed);

void compute_features(Corpus& corpus);
/// Scale-invariant stress and quality metrics of every layout.
void compute_baseline_inputs(Corpus& corpus);

/// Line records with a version header: config, graph specs, layout
/// provenance plus a hash of the coordinates, and pairs.
void write_manifest(const Corpus& corpus, std::ostream& out);
std::string manifest_text(const Corpus& corpus);

/// Directory with manifest.txt, graphs/, layouts/ and features.tsv.
void save_corpus(const Corpus& corpus, const std::filesystem::path& dir);
/// Throws IoError, ParseError and VersionMismatch.
Corpus load_corpus(const std::filesystem::path& dir);

}  // namespace layoutjudge
