#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "layoutjudge/graph.hpp"

namespace layoutjudge {

inline constexpr std::size_t kLayoutFeatureCount = 57;
inline constexpr std::size_t kGraphFeatureCount = 2;

/// Bin counts over [min(S), max(S)] divided by |S|; max(S) falls in the last
/// bin and a constant S puts everything in bin 0. A span below 1e-9 (relative
/// to max(1, |S|)) counts as constant. Throws EmptyInput.
std::vector<double> histogram(std::span<const double> values, std::size_t bins);

/// -sum p log2 p with 0 log 0 = 0.
double entropy(std::span<const double> histogram);

struct EntropyFit {
  double intercept = 0.0;  // eta
  double slope = 0.0;      // sigma
};

/// Least-squares line through (x_k, y_k).
EntropyFit fit_line(std::span<const double> xs, std::span<const double> ys);

/// Histogram entropies for beta = 8, 16, ..., 512 regressed on log2(beta).
/// Throws EmptyInput.
EntropyFit entropy_regression(std::span<const double> values);

/// Entropy (bits) of a Gaussian KDE of the values with Scott's bandwidth
/// 3.5 * stddev * N^(-1/3), integrated by the trapezoid rule on 1024 points
/// over [min - 4 sigma, max + 4 sigma]. Zero when the values are constant (as
/// for histogram) or fewer than two.
double differential_entropy(std::span<const double> values);

/// Mean and root mean square.
double mean_of(std::span<const double> values);
double rms_of(std::span<const double> values);

struct FeatureVector {
  std::array<double, kLayoutFeatureCount> layout{};
  std::array<double, kGraphFeatureCount> graph{};
  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Column names in vector order:
///   PRINVEC1.x PRINVEC1.y PRINVEC2.x PRINVEC2.y
///   PRINCOMP1.{mean,rms,eta,sigma} PRINCOMP2.{...} ANGULAR.{...}
///   EDGE_LENGTH.{rms,eta,sigma} RDF_GLOBAL.{mean,rms,eta,sigma} TENSION.{...}
///   RDF_LOCAL_<i>.{mean,rms,entropy} for d = 2^i, i = 0..9
const std::array<std::string, kLayoutFeatureCount>& layout_feature_names();
const std::array<std::string, kGraphFeatureCount>& graph_feature_names();

/// FNV-1a 64 over the newline-joined feature names.
std::uint64_t feature_order_hash();

/// Syndrome group of a layout feature column, e.g. "RDF_LOCAL".
std::string feature_group(std::size_t column);
const std::vector<std::string>& syndrome_groups();

/// Normalizes the layout, computes its syndromes and reduces them. RDF_LOCAL
/// distances beyond the diameter are clamped to it. Graph features are
/// (ln n, ln m). Throws DisconnectedGraph, DegenerateLayout, ZeroLengthEdge.
FeatureVector feature_vector(const Graph& g, const Layout& layout);
/// Same, reusing g's distance matrix.
FeatureVector feature_vector(const Graph& g, const DistanceMatrix& hops, const Layout& layout);

/// Tab-separated: a header row ("id" and the 59 column names), then one row
/// per layout with values written to 17 significant digits.
void write_feature_table(std::ostream& out, const std::vector<std::string>& ids,
                         const std::vector<FeatureVector>& rows);
struct FeatureTable {
  std::vector<std::string> ids;
  std::vector<FeatureVector> rows;
};
FeatureTable read_feature_table(std::istream& in);

}  // namespace layoutjudge
