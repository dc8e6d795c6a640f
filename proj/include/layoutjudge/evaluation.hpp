#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "layoutjudge/corpus.hpp"
#include "layoutjudge/discriminator.hpp"

namespace layoutjudge {

struct Split {
  std::vector<std::size_t> train;  // pair indices
  std::vector<std::size_t> test;
  std::vector<std::size_t> test_graphs;
};

/// Sets aside round(test_fraction * graphs) graphs (at least 1, at most all
/// but one) with every pair of theirs. Throws TooFewGraphs below 5 graphs.
Split split_by_graph(const Corpus& corpus, double test_fraction, std::uint64_t seed);

/// Correct iff sign(predicted) == sign(label); predicted 0 is wrong.
/// Throws EmptyInput and DimensionMismatch.
double accuracy(std::span<const double> predicted, std::span<const double> labels);

/// Predicted t for a corpus pair.
using PairScorer = std::function<double(std::size_t pair)>;
/// Fits on the training pairs of one round and returns its scorer.
using Method = std::function<PairScorer(const Corpus& corpus, std::span<const std::size_t> train,
                                        std::uint64_t seed)>;

Method model_method(const TrainConfig& config);
/// Needs compute_baseline_inputs.
Method stress_method();
Method comb_method(const CombFitOptions& options = {});
/// Reads the labels; inverted negates them.
Method oracle_method(bool inverted = false);
/// Seeded fair coin per pair.
Method coin_flip_method();

/// Accuracy restricted to one pair kind; NaN when a round has none.
struct KindAccuracy {
  PairKind kind;
  std::vector<double> folds;
};

struct EvalReport {
  std::string method;
  std::vector<double> fold_accuracy;
  std::vector<std::size_t> fold_pairs;  // test pairs per round
  std::vector<KindAccuracy> by_kind;
  double mean = 0.0;
  double stddev = 0.0;  // sample stddev over rounds

  double kind_mean(PairKind kind) const;
};

struct CrossValidationConfig {
  int rounds = 10;
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
};

/// Independent random subsampling rounds; round k splits with
/// derive(seed, k) and trains with derive(seed, 0x100 + k), so every method
/// sees the same splits. Rounds run in parallel. Throws InvariantViolation if
/// a graph ends up on both sides.
EvalReport cross_validate(const Corpus& corpus, const Method& method, const CrossValidationConfig& config,
                          const std::string& name);

enum class AblationMode { kOnly, kExclude };

/// Active layout columns: only the listed syndrome groups, or everything
/// except them. Throws UnknownGroup.
std::array<bool, kLayoutFeatureCount> ablation_mask(AblationMode mode, std::span<const std::string> groups);

EvalReport ablation(const Corpus& corpus, AblationMode mode, std::span<const std::string> groups,
                    TrainConfig train, const CrossValidationConfig& config);

/// Table rows: method, mean and stddev of accuracy, the first report's mean
/// minus this one's, proper-vs-garbage mean, and round count.
void write_eval_table(std::ostream& out, std::span<const EvalReport> reports);
void write_eval_csv(std::ostream& out, std::span<const EvalReport> reports);

}  // namespace layoutjudge
