#include "layoutjudge/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "layoutjudge/error.hpp"
#include "layoutjudge/layout_engine.hpp"
#include "layoutjudge/simd/kernels.hpp"
#include "layoutjudge/syndromes.hpp"

namespace layoutjudge {
namespace {

constexpr std::size_t kMaxBins = 512;
constexpr int kMinLogBins = 3;
constexpr int kMaxLogBins = 9;
constexpr std::size_t kGridPoints = 1024;
constexpr int kRdfLocalCount = 10;

// Spans below this (relative to max(1, |value|)) count as constant, and bin
// positions are nudged up by kBinSnap, so values that agree up to rounding
// (e.g. the edge lengths of a rotated lattice) bin identically.
constexpr double kFlatSpan = 1e-9;
constexpr double kBinSnap = 1e-9;

void require_nonempty(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "syndrome has no values");
}

struct Range {
  double lo = 0.0;
  double span = 0.0;  // zero when flat
};

Range range_of(std::span<const double> values) {
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
  return {lo, hi - lo > kFlatSpan * scale ? hi - lo : 0.0};
}

std::size_t bin_of(double v, const Range& r, std::size_t bins) {
  if (r.span == 0.0) return 0;
  const double t = (v - r.lo) / r.span + kBinSnap;
  return std::min(static_cast<std::size_t>(t * static_cast<double>(bins)), bins - 1);
}

// Reduction of one syndrome into the (mean, rms, eta, sigma) block.
void push_stats(std::vector<double>& out, std::span<const double> values, bool with_mean) {
  if (with_mean) out.push_back(mean_of(values));
  out.push_back(rms_of(values));
  const EntropyFit fit = entropy_regression(values);
  out.push_back(fit.intercept);
  out.push_back(fit.slope);
}

}  // namespace

std::vector<double> histogram(std::span<const double> values, std::size_t bins) {
  require_nonempty(values);
  if (bins == 0) throw Error(ErrorCode::kEmptyInput, "histogram needs at least one bin");
  const Range r = range_of(values);
  std::vector<double> counts(bins, 0.0);
  for (double v : values) counts[bin_of(v, r, bins)] += 1.0;
  const double inv = 1.0 / static_cast<double>(values.size());
  for (double& c : counts) c *= inv;
  return counts;
}

double entropy(std::span<const double> h) {
  double e = 0.0;
  for (double p : h) {
    if (p > 0.0) e -= p * std::log2(p);
  }
  return e;
}

EntropyFit fit_line(std::span<const double> xs, std::span<const double> ys) {
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  return {my - slope * mx, slope};
}

EntropyFit entropy_regression(std::span<const double> values) {
  require_nonempty(values);
  // floor(512 t) >> k == floor((512 >> k) t), so one pass over the finest
  // binning serves every beta.
  const Range r = range_of(values);
  std::vector<double> fine(kMaxBins, 0.0);
  for (double v : values) fine[bin_of(v, r, kMaxBins)] += 1.0;
  const double inv = 1.0 / static_cast<double>(values.size());
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> coarse;
  for (int lb = kMinLogBins; lb <= kMaxLogBins; ++lb) {
    const std::size_t bins = std::size_t{1} << lb;
    const std::size_t shift = kMaxLogBins - lb;
    coarse.assign(bins, 0.0);
    for (std::size_t b = 0; b < kMaxBins; ++b) coarse[b >> shift] += fine[b];
    for (double& c : coarse) c *= inv;
    xs.push_back(lb);
    ys.push_back(entropy(coarse));
  }
  return fit_line(xs, ys);
}

double differential_entropy(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2 || range_of(values).span == 0.0) return 0.0;
  const double mu = mean_of(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mu) * (v - mu);
  const double stddev = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(stddev > 0.0)) return 0.0;

  const double sigma = 3.5 * stddev * std::pow(static_cast<double>(n), -1.0 / 3.0);
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it - 4.0 * sigma;
  const double hi = *hi_it + 4.0 * sigma;
  const double step = (hi - lo) / static_cast<double>(kGridPoints - 1);
  const double inv_two_var = 1.0 / (2.0 * sigma * sigma);
  // exp(-40.5) is far below double resolution of the summed density
  const double reach = 9.0 * sigma;

  std::vector<double> density(kGridPoints, 0.0);
  const auto& k = simd::kernels();
  for (double v : values) {
    const double first = std::ceil((v - reach - lo) / step);
    const double last = std::floor((v + reach - lo) / step) + 1.0;
    const auto a = static_cast<std::size_t>(std::clamp(first, 0.0, double(kGridPoints)));
    const auto b = static_cast<std::size_t>(std::clamp(last, 0.0, double(kGridPoints)));
    if (a < b) k.gaussian_accumulate(lo, step, a, b, v, inv_two_var, density.data());
  }

  const double norm = 1.0 / (static_cast<double>(n) * sigma * std::sqrt(2.0 * std::numbers::pi));
  double integral = 0.0;
  for (std::size_t j = 0; j < kGridPoints; ++j) {
    const double f = density[j] * norm;
    const double term = f > 0.0 ? -f * std::log2(f) : 0.0;
    integral += (j == 0 || j + 1 == kGridPoints) ? 0.5 * term : term;
  }
  return integral * step;
}

double mean_of(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double rms_of(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s / static_cast<double>(values.size()));
}

const std::array<std::string, kLayoutFeatureCount>& layout_feature_names() {
  static const auto names = [] {
    std::array<std::string, kLayoutFeatureCount> out;
    std::size_t at = 0;
    for (const char* v : {"PRINVEC1", "PRINVEC2"}) {
      out[at++] = std::string(v) + ".x";
      out[at++] = std::string(v) + ".y";
    }
    for (const char* s : {"PRINCOMP1", "PRINCOMP2", "ANGULAR", "EDGE_LENGTH", "RDF_GLOBAL", "TENSION"}) {
      for (const char* stat : {"mean", "rms", "eta", "sigma"}) {
        if (std::string(s) == "EDGE_LENGTH" && std::string(stat) == "mean") continue;
        out[at++] = std::string(s) + "." + stat;
      }
    }
    for (int i = 0; i < kRdfLocalCount; ++i) {
      for (const char* stat : {"mean", "rms", "entropy"}) {
        out[at++] = "RDF_LOCAL_" + std::to_string(i) + "." + stat;
      }
    }
    return out;
  }();
  return names;
}

const std::array<std::string, kGraphFeatureCount>& graph_feature_names() {
  static const std::array<std::string, kGraphFeatureCount> names{"GRAPH.log_n", "GRAPH.log_m"};
  return names;
}

std::uint64_t feature_order_hash() {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= '\n';
    h *= 0x100000001b3ULL;
  };
  for (const auto& n : layout_feature_names()) feed(n);
  for (const auto& n : graph_feature_names()) feed(n);
  return h;
}

std::string feature_group(std::size_t column) {
  const std::string& name = layout_feature_names().at(column);
  const std::string head = name.substr(0, name.find('.'));
  return head.rfind("RDF_LOCAL", 0) == 0 ? "RDF_LOCAL" : head;
}

const std::vector<std::string>& syndrome_groups() {
  static const std::vector<std::string> groups{"PRINVEC1", "PRINVEC2",    "PRINCOMP1",
                                               "PRINCOMP2", "ANGULAR",    "EDGE_LENGTH",
                                               "RDF_GLOBAL", "RDF_LOCAL", "TENSION"};
  return groups;
}

FeatureVector feature_vector(const Graph& g, const Layout& layout) {
  return feature_vector(g, shortest_path_distances(g), layout);
}

FeatureVector feature_vector(const Graph& g, const DistanceMatrix& hops, const Layout& raw) {
  const Layout layout = normalize_layout(raw, g);
  std::vector<double> f;
  f.reserve(kLayoutFeatureCount);

  const PrincipalAxes axes = principal_axes(layout);
  f.insert(f.end(), {axes.v1.x, axes.v1.y, axes.v2.x, axes.v2.y});
  const Princomp pc = princomp(layout);
  push_stats(f, pc.first, true);
  push_stats(f, pc.second, true);
  push_stats(f, angular(g, layout), true);
  push_stats(f, edge_length(g, layout), false);

  const PairTable pairs(hops, layout);
  push_stats(f, pairs.euclid(), true);
  push_stats(f, pairs.tension(), true);

  const std::size_t diam = pairs.diameter();
  std::size_t prev_count = 0;
  double cached_entropy = 0.0;
  for (int i = 0; i < kRdfLocalCount; ++i) {
    const std::size_t d = std::min<std::size_t>(std::size_t{1} << i, diam);
    const std::size_t count = pairs.prefix(d);
    const std::span<const double> local(pairs.euclid().data(), count);
    if (i == 0 || count != prev_count) cached_entropy = differential_entropy(local);
    prev_count = count;
    f.insert(f.end(), {mean_of(local), rms_of(local), cached_entropy});
  }

  FeatureVector out;
  std::copy(f.begin(), f.end(), out.layout.begin());
  out.graph = {std::log(static_cast<double>(g.vertex_count())),
               std::log(static_cast<double>(g.edge_count()))};
  for (double v : out.layout) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvariantViolation, "non-finite feature");
  }
  return out;
}

void write_feature_table(std::ostream& out, const std::vector<std::string>& ids,
                         const std::vector<FeatureVector>& rows) {
  if (ids.size() != rows.size()) throw Error(ErrorCode::kDimensionMismatch, "ids and rows differ");
  out << "id";
  for (const auto& n : layout_feature_names()) out << '\t' << n;
  for (const auto& n : graph_feature_names()) out << '\t' << n;
  out << '\n';
  char buf[32];
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out << ids[r];
    for (double v : rows[r].layout) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << '\t' << buf;
    }
    for (double v : rows[r].graph) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << '\t' << buf;
    }
    out << '\n';
  }
}

FeatureTable read_feature_table(std::istream& in) {
  FeatureTable table;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": " + msg);
  };
  if (!std::getline(in, line)) fail("missing header");
  ++line_no;
  {
    std::istringstream header(line);
    std::string col;
    std::vector<std::string> cols;
    while (std::getline(header, col, '\t')) cols.push_back(col);
    std::vector<std::string> expected{"id"};
    for (const auto& n : layout_feature_names()) expected.push_back(n);
    for (const auto& n : graph_feature_names()) expected.push_back(n);
    if (cols != expected) fail("unexpected feature columns");
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, '\t')) cells.push_back(cell);
    if (cells.size() != 1 + kLayoutFeatureCount + kGraphFeatureCount) fail("wrong column count");
    FeatureVector fv;
    for (std::size_t c = 0; c < kLayoutFeatureCount + kGraphFeatureCount; ++c) {
      char* end = nullptr;
      const double v = std::strtod(cells[c + 1].c_str(), &end);
      if (end == cells[c + 1].c_str() || *end != '\0') fail("bad number '" + cells[c + 1] + "'");
      if (c < kLayoutFeatureCount) fv.layout[c] = v; else fv.graph[c - kLayoutFeatureCount] = v;
    }
    table.ids.push_back(cells[0]);
    table.rows.push_back(fv);
  }
  return table;
}

}  // namespace layoutjudge
