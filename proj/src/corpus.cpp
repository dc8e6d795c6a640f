#include "layoutjudge/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "layoutjudge/error.hpp"
#include "layoutjudge/io.hpp"
#include "layoutjudge/layout_engine.hpp"
#include "layoutjudge/parallel.hpp"
#include "layoutjudge/rng.hpp"

namespace layoutjudge {
namespace {

constexpr char kMagic[] = "layoutjudge-corpus";
constexpr int kVersion = 1;

std::string shortest(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + shortest(values[i]);
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw Error(ErrorCode::kParseError, "bad number '" + s + "'");
  return v;
}

long long to_integer(const std::string& s) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw Error(ErrorCode::kParseError, "bad integer '" + s + "'");
  return v;
}

PairKind parse_pair_kind(const std::string& s) {
  for (auto k : {PairKind::kProperGarbage, PairKind::kWorsening, PairKind::kInterpolation}) {
    if (s == to_string(k)) return k;
  }
  throw Error(ErrorCode::kParseError, "unknown pair kind '" + s + "'");
}

std::uint64_t layout_hash(const Layout& l) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](double v) {
    unsigned char bytes[sizeof v];
    std::memcpy(bytes, &v, sizeof v);
    for (unsigned char c : bytes) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& p : l.positions) feed(p.x), feed(p.y);
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

int quasi_dim(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::kQuasi3d: return 3;
    case GeneratorKind::kQuasi4d: return 4;
    case GeneratorKind::kQuasi5d: return 5;
    case GeneratorKind::kQuasi6d: return 6;
    default: return 0;
  }
}

struct GraphBuild {
  CorpusGraph graph;
  PairSet set;
};

GraphBuild build_graph(const CorpusConfig& config, std::size_t index, std::uint64_t seed) {
  const std::uint64_t gseed = Rng::derive(seed, 0x1000 + index);
  GraphBuild out;
  out.graph.spec = corpus_graph_spec(config, index, seed);
  char id[32];
  std::snprintf(id, sizeof id, "g%03zu", index);
  out.graph.id = std::string(id) + "-" + to_string(out.graph.spec.kind);
  auto generated = generate(out.graph.spec);
  out.graph.graph = std::move(generated.graph);
  const Graph& g = out.graph.graph;

  std::vector<Layout> proper;
  if (generated.native) {
    proper.push_back(normalize_layout(*generated.native, g));
  } else {
    proper.push_back(layout_force_directed(g, LayoutParams::force_directed(Rng::derive(gseed, 3))));
  }
  proper.push_back(layout_force_directed(g, LayoutParams::force_directed(Rng::derive(gseed, 1))));
  proper.push_back(layout_stress_min(g, LayoutParams::stress(Rng::derive(gseed, 2))));

  std::vector<Layout> garbage;
  garbage.push_back(layout_phantom(g, Rng::derive(gseed, 4)));
  Rng pick(Rng::derive(gseed, 5));
  const auto dist = pick.below(2) == 0 ? RandomDistribution::kUniform : RandomDistribution::kNormal;
  garbage.push_back(layout_random(g, dist, Rng::derive(gseed, 6)));

  out.set = make_labeled_pairs(g, proper, garbage, config.augment, Rng::derive(gseed, 7));
  for (auto& l : out.set.layouts) l.graph_id = out.graph.id;
  return out;
}

// Runs body(graph, hops, first, last) for each graph's layout range.
template <class Body>
void for_each_graph(const Corpus& corpus, Body body) {
  std::vector<std::size_t> first(corpus.graphs.size() + 1, corpus.layouts.size());
  for (std::size_t i = corpus.layouts.size(); i-- > 0;) first[corpus.layouts[i].graph] = i;
  for (std::size_t g = corpus.graphs.size(); g-- > 0;) first[g] = std::min(first[g], first[g + 1]);
  parallel_for(corpus.graphs.size(), [&](std::size_t g) {
    if (first[g] == first[g + 1]) return;
    const DistanceMatrix hops = shortest_path_distances(corpus.graphs[g].graph);
    body(g, hops, first[g], first[g + 1]);
  });
}

}  // namespace

CorpusConfig parse_corpus_config(std::istream& in) {
  CorpusConfig c;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kParseError, "expected key=value, got '" + line + "'");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    auto reals = [&] {
      std::vector<double> v;
      for (const auto& part : split(value, ',')) v.push_back(to_double(part));
      return v;
    };
    if (key == "graphs") {
      c.graph_count = static_cast<std::size_t>(to_integer(value));
    } else if (key == "min_n") {
      c.min_n = static_cast<int>(to_integer(value));
    } else if (key == "max_n") {
      c.max_n = static_cast<int>(to_integer(value));
    } else if (key == "kinds") {
      c.kinds.clear();
      for (const auto& part : split(value, ',')) c.kinds.push_back(parse_generator_kind(part));
    } else if (key == "ladder") {
      c.augment.ladder = reals();
    } else if (key == "interpolation") {
      c.augment.interpolation = reals();
    } else if (key == "worsen_kinds") {
      c.augment.worsen_kinds.clear();
      for (const auto& part : split(value, ',')) c.augment.worsen_kinds.push_back(parse_worsen_kind(part));
    } else if (key == "t_min") {
      c.augment.t_min = to_double(value);
    } else {
      throw Error(ErrorCode::kParseError, "unknown corpus key '" + key + "'");
    }
  }
  if (c.kinds.empty()) throw Error(ErrorCode::kParseError, "kinds is empty");
  if (c.min_n < 8 || c.max_n < c.min_n) throw Error(ErrorCode::kParseError, "need 8 <= min_n <= max_n");
  return c;
}

std::string to_string(const CorpusConfig& c) {
  std::string kinds;
  for (std::size_t i = 0; i < c.kinds.size(); ++i) kinds += (i ? "," : "") + to_string(c.kinds[i]);
  std::string worsen;
  for (std::size_t i = 0; i < c.augment.worsen_kinds.size(); ++i) {
    worsen += (i ? "," : "") + to_string(c.augment.worsen_kinds[i]);
  }
  return "graphs=" + std::to_string(c.graph_count) + "\nmin_n=" + std::to_string(c.min_n) +
         "\nmax_n=" + std::to_string(c.max_n) + "\nkinds=" + kinds + "\nladder=" + join(c.augment.ladder) +
         "\ninterpolation=" + join(c.augment.interpolation) + "\nworsen_kinds=" + worsen +
         "\nt_min=" + shortest(c.augment.t_min) + "\n";
}

GeneratorSpec corpus_graph_spec(const CorpusConfig& config, std::size_t index, std::uint64_t seed) {
  Rng rng(Rng::derive(seed, index));
  GeneratorSpec spec;
  spec.kind = config.kinds[index % config.kinds.size()];
  const double lo = std::log(static_cast<double>(config.min_n));
  const double hi = std::log(static_cast<double>(config.max_n));
  const int n = static_cast<int>(std::lround(std::exp(rng.uniform(lo, hi))));
  spec.target_n = n;
  spec.seed = rng.next_u64();
  const double aspect = std::exp(rng.uniform(std::log(0.6), std::log(1.0 / 0.6)));
  auto lattice = [&](int least) {
    spec.rows = std::max(least, static_cast<int>(std::lround(std::sqrt(n * aspect))));
    spec.cols = std::max(least, static_cast<int>(std::lround(static_cast<double>(n) / spec.rows)));
  };
  switch (spec.kind) {
    case GeneratorKind::kGrid: lattice(2); break;
    case GeneratorKind::kTorus1:
    case GeneratorKind::kTorus2: lattice(3); break;
    default: break;
  }
  if (const int dim = quasi_dim(spec.kind)) {
    int extent = quasi_extent_for(dim, n);
    while (extent > 2 && std::pow(extent, dim) > config.max_n) --extent;
    spec.extent = extent;
  }
  return spec;
}

Corpus build_corpus(const CorpusConfig& config, std::uint64_t seed) {
  if (config.kinds.empty()) throw Error(ErrorCode::kEmptyInput, "no generator kinds");
  std::vector<GraphBuild> builds(config.graph_count);
  parallel_for(config.graph_count, [&](std::size_t i) { builds[i] = build_graph(config, i, seed); });

  Corpus corpus;
  corpus.config = config;
  corpus.seed = seed;
  for (std::size_t i = 0; i < builds.size(); ++i) {
    const std::size_t offset = corpus.layouts.size();
    for (auto& l : builds[i].set.layouts) corpus.layouts.push_back({i, std::move(l)});
    for (const auto& p : builds[i].set.pairs) corpus.pairs.push_back({offset + p.a, offset + p.b, p.t, p.kind});
    corpus.graphs.push_back(std::move(builds[i].graph));
  }
  compute_features(corpus);
  return corpus;
}

void compute_features(Corpus& corpus) {
  corpus.features.assign(corpus.layouts.size(), FeatureVector{});
  for_each_graph(corpus, [&](std::size_t g, const DistanceMatrix& hops, std::size_t first, std::size_t last) {
    for (std::size_t i = first; i < last; ++i) {
      corpus.features[i] = feature_vector(corpus.graphs[g].graph, hops, corpus.layouts[i].layout);
    }
  });
}

void compute_baseline_inputs(Corpus& corpus) {
  corpus.stress.assign(corpus.layouts.size(), 0.0);
  corpus.metrics.assign(corpus.layouts.size(), QualityMetrics{});
  for_each_graph(corpus, [&](std::size_t g, const DistanceMatrix& hops, std::size_t first, std::size_t last) {
    for (std::size_t i = first; i < last; ++i) {
      corpus.stress[i] = scale_invariant_stress(hops, corpus.layouts[i].layout);
      corpus.metrics[i] = quality_metrics(corpus.graphs[g].graph, corpus.layouts[i].layout);
    }
  });
}

void write_manifest(const Corpus& corpus, std::ostream& out) {
  out << kMagic << ' ' << kVersion << '\n';
  out << "seed " << corpus.seed << '\n';
  std::istringstream config(to_string(corpus.config));
  for (std::string line; std::getline(config, line);) out << "config " << line << '\n';
  for (const auto& g : corpus.graphs) {
    out << "graph " << g.id << ' ' << g.graph.vertex_count() << ' ' << g.graph.edge_count() << ' '
        << to_string(g.spec) << '\n';
  }
  for (std::size_t i = 0; i < corpus.layouts.size(); ++i) {
    const auto& l = corpus.layouts[i];
    out << "layout " << i << ' ' << l.graph << ' ' << to_string(l.layout.provenance) << ' '
        << hex64(layout_hash(l.layout)) << '\n';
  }
  for (const auto& p : corpus.pairs) {
    out << "pair " << p.a << ' ' << p.b << ' ' << full(p.t) << ' ' << to_string(p.kind) << '\n';
  }
}

std::string manifest_text(const Corpus& corpus) {
  std::ostringstream out;
  write_manifest(corpus, out);
  return out.str();
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir / "graphs", ec);
  std::filesystem::create_directories(dir / "layouts", ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir.string());
  {
    std::ofstream out(dir / "manifest.txt", std::ios::binary);
    write_manifest(corpus, out);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write manifest");
  }
  for (const auto& g : corpus.graphs) write_graph(g.graph, dir / "graphs" / (g.id + ".txt"));
  for (std::size_t i = 0; i < corpus.layouts.size(); ++i) {
    write_layout(corpus.layouts[i].layout, dir / "layouts" / (std::to_string(i) + ".txt"));
  }
  if (corpus.features.size() == corpus.layouts.size()) {
    std::ofstream out(dir / "features.tsv", std::ios::binary);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < corpus.layouts.size(); ++i) ids.push_back(std::to_string(i));
    write_feature_table(out, ids, corpus.features);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write features");
  }
}

Corpus load_corpus(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.txt", std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + (dir / "manifest.txt").string());
  Corpus corpus;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kParseError, "empty manifest");
  {
    std::istringstream head(line);
    std::string magic;
    int version = 0;
    head >> magic >> version;
    if (magic != kMagic) throw Error(ErrorCode::kParseError, "not a corpus manifest");
    if (version != kVersion) throw Error(ErrorCode::kVersionMismatch, "corpus manifest version " + std::to_string(version));
  }
  std::string config_text;
  std::vector<std::string> hashes;
  while (std::getline(in, line)) {
    std::istringstream rec(line);
    std::string kind;
    rec >> kind;
    if (kind == "seed") {
      rec >> corpus.seed;
    } else if (kind == "config") {
      config_text += line.substr(7) + "\n";
    } else if (kind == "graph") {
      CorpusGraph g;
      std::size_t n = 0;
      std::size_t m = 0;
      rec >> g.id >> n >> m;
      std::string spec;
      std::getline(rec >> std::ws, spec);
      g.spec = parse_generator_spec(spec);
      g.graph = read_graph(dir / "graphs" / (g.id + ".txt"));
      if (g.graph.vertex_count() != n || g.graph.edge_count() != m) {
        throw Error(ErrorCode::kParseError, "graph " + g.id + " does not match the manifest");
      }
      corpus.graphs.push_back(std::move(g));
    } else if (kind == "layout") {
      std::size_t index = 0;
      CorpusLayout l;
      std::string provenance;
      std::string hash;
      rec >> index >> l.graph >> provenance >> hash;
      if (index != corpus.layouts.size() || l.graph >= corpus.graphs.size()) {
        throw Error(ErrorCode::kParseError, "layout records out of order");
      }
      l.layout = read_layout(dir / "layouts" / (std::to_string(index) + ".txt"), corpus.graphs[l.graph].graph);
      if (hex64(layout_hash(l.layout)) != hash) {
        throw Error(ErrorCode::kChecksumMismatch, "layout " + std::to_string(index) + " differs from the manifest");
      }
      corpus.layouts.push_back(std::move(l));
    } else if (kind == "pair") {
      CorpusPair p;
      std::string t;
      std::string pk;
      rec >> p.a >> p.b >> t >> pk;
      p.t = to_double(t);
      p.kind = parse_pair_kind(pk);
      if (p.a >= corpus.layouts.size() || p.b >= corpus.layouts.size() ||
          corpus.layouts[p.a].graph != corpus.layouts[p.b].graph) {
        throw Error(ErrorCode::kParseError, "pair references layouts of different graphs");
      }
      corpus.pairs.push_back(p);
    } else if (!kind.empty()) {
      throw Error(ErrorCode::kParseError, "unknown manifest record '" + kind + "'");
    }
  }
  std::istringstream config(config_text);
  corpus.config = parse_corpus_config(config);

  std::ifstream features(dir / "features.tsv", std::ios::binary);
  if (features) {
    auto table = read_feature_table(features);
    if (table.rows.size() != corpus.layouts.size()) {
      throw Error(ErrorCode::kParseError, "feature table does not match the layouts");
    }
    corpus.features = std::move(table.rows);
  } else {
    compute_features(corpus);
  }
  return corpus;
}

}  // namespace layoutjudge
