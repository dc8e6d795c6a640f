#include "layoutjudge/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>

#include "layoutjudge/error.hpp"
#include "layoutjudge/parallel.hpp"
#include "layoutjudge/rng.hpp"

namespace layoutjudge {
namespace {

constexpr PairKind kKinds[] = {PairKind::kProperGarbage, PairKind::kWorsening, PairKind::kInterpolation};

double sign_correct(double predicted, double label) {
  return (predicted > 0.0 && label > 0.0) || (predicted < 0.0 && label < 0.0) ? 1.0 : 0.0;
}

TrainingSet training_set(const Corpus& corpus, std::span<const std::size_t> train) {
  TrainingSet data;
  data.features = corpus.features;
  data.pairs.reserve(train.size());
  for (const auto i : train) data.pairs.push_back({corpus.pairs[i].a, corpus.pairs[i].b, corpus.pairs[i].t});
  return data;
}

void require_features(const Corpus& corpus) {
  if (corpus.features.size() != corpus.layouts.size()) {
    throw Error(ErrorCode::kInvariantViolation, "corpus features have not been computed");
  }
}

void require_baselines(const Corpus& corpus) {
  if (corpus.stress.size() != corpus.layouts.size() || corpus.metrics.size() != corpus.layouts.size()) {
    throw Error(ErrorCode::kInvariantViolation, "corpus baseline inputs have not been computed");
  }
}

double mean_of_finite(const std::vector<double>& v) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const double x : v) {
    if (std::isfinite(x)) sum += x, ++n;
  }
  return n ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
}

std::string fixed(double v, int digits) {
  if (!std::isfinite(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

Split split_by_graph(const Corpus& corpus, double test_fraction, std::uint64_t seed) {
  const std::size_t graphs = corpus.graphs.size();
  if (graphs < 5) throw Error(ErrorCode::kTooFewGraphs, "need at least 5 graphs, have " + std::to_string(graphs));
  const auto wanted = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(graphs)));
  const std::size_t count = std::clamp<std::size_t>(wanted, 1, graphs - 1);
  std::vector<std::size_t> order(graphs);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);
  Split split;
  split.test_graphs.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count));
  std::sort(split.test_graphs.begin(), split.test_graphs.end());
  std::vector<char> is_test(graphs, 0);
  for (const auto g : split.test_graphs) is_test[g] = 1;
  for (std::size_t p = 0; p < corpus.pairs.size(); ++p) {
    (is_test[corpus.graph_of_pair(p)] ? split.test : split.train).push_back(p);
  }
  return split;
}

double accuracy(std::span<const double> predicted, std::span<const double> labels) {
  if (predicted.size() != labels.size()) throw Error(ErrorCode::kDimensionMismatch, "prediction and label counts differ");
  if (predicted.empty()) throw Error(ErrorCode::kEmptyInput, "no pairs");
  double correct = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) correct += sign_correct(predicted[i], labels[i]);
  return correct / static_cast<double>(predicted.size());
}

Method model_method(const TrainConfig& config) {
  return [config](const Corpus& corpus, std::span<const std::size_t> train, std::uint64_t seed) -> PairScorer {
    require_features(corpus);
    TrainConfig c = config;
    c.seed = seed;
    auto model = std::make_shared<ModelParams>(layoutjudge::train(training_set(corpus, train), c).model);
    return [&corpus, model](std::size_t pair) {
      const auto& p = corpus.pairs[pair];
      return predict(*model, corpus.features[p.a], corpus.features[p.b]).t;
    };
  };
}

Method stress_method() {
  return [](const Corpus& corpus, std::span<const std::size_t>, std::uint64_t) -> PairScorer {
    require_baselines(corpus);
    return [&corpus](std::size_t pair) {
      const auto& p = corpus.pairs[pair];
      return corpus.stress[p.a] - corpus.stress[p.b];
    };
  };
}

Method comb_method(const CombFitOptions& options) {
  return [options](const Corpus& corpus, std::span<const std::size_t> train, std::uint64_t seed) -> PairScorer {
    require_baselines(corpus);
    std::vector<CombPair> pairs;
    pairs.reserve(train.size());
    for (const auto i : train) {
      const auto& p = corpus.pairs[i];
      pairs.push_back({corpus.metrics[p.a], corpus.metrics[p.b], p.t});
    }
    CombFitOptions o = options;
    o.seed = seed;
    const CombWeights w = comb_fit_weights(pairs, o);
    return [&corpus, w](std::size_t pair) {
      const auto& p = corpus.pairs[pair];
      return comb_discriminate(w, corpus.metrics[p.a], corpus.metrics[p.b]).t;
    };
  };
}

Method oracle_method(bool inverted) {
  return [inverted](const Corpus& corpus, std::span<const std::size_t>, std::uint64_t) -> PairScorer {
    return [&corpus, inverted](std::size_t pair) { return inverted ? -corpus.pairs[pair].t : corpus.pairs[pair].t; };
  };
}

Method coin_flip_method() {
  return [](const Corpus&, std::span<const std::size_t>, std::uint64_t seed) -> PairScorer {
    return [seed](std::size_t pair) { return (Rng::derive(seed, pair) >> 63) ? 1.0 : -1.0; };
  };
}

double EvalReport::kind_mean(PairKind kind) const {
  for (const auto& k : by_kind) {
    if (k.kind == kind) return mean_of_finite(k.folds);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

EvalReport cross_validate(const Corpus& corpus, const Method& method, const CrossValidationConfig& config,
                          const std::string& name) {
  if (config.rounds < 2) throw Error(ErrorCode::kInvariantViolation, "cross validation needs at least 2 rounds");
  const auto rounds = static_cast<std::size_t>(config.rounds);
  EvalReport report;
  report.method = name;
  report.fold_accuracy.assign(rounds, 0.0);
  report.fold_pairs.assign(rounds, 0);
  for (const auto k : kKinds) report.by_kind.push_back({k, std::vector<double>(rounds, 0.0)});

  parallel_for(rounds, [&](std::size_t r) {
    const Split split = split_by_graph(corpus, config.test_fraction, Rng::derive(config.seed, r));
    std::set<std::size_t> train_graphs;
    for (const auto p : split.train) train_graphs.insert(corpus.graph_of_pair(p));
    for (const auto g : split.test_graphs) {
      if (train_graphs.count(g)) throw Error(ErrorCode::kInvariantViolation, "graph in both train and test pairs");
    }
    const PairScorer score = method(corpus, split.train, Rng::derive(config.seed, 0x100 + r));
    std::vector<double> predicted;
    std::vector<double> labels;
    std::array<double, 3> kind_correct{};
    std::array<std::size_t, 3> kind_count{};
    for (const auto p : split.test) {
      predicted.push_back(score(p));
      labels.push_back(corpus.pairs[p].t);
      const auto k = static_cast<std::size_t>(corpus.pairs[p].kind);
      kind_correct[k] += sign_correct(predicted.back(), labels.back());
      ++kind_count[k];
    }
    report.fold_accuracy[r] = accuracy(predicted, labels);
    report.fold_pairs[r] = predicted.size();
    for (std::size_t k = 0; k < 3; ++k) {
      report.by_kind[k].folds[r] = kind_count[k] ? kind_correct[k] / static_cast<double>(kind_count[k])
                                                 : std::numeric_limits<double>::quiet_NaN();
    }
  });

  report.mean = std::accumulate(report.fold_accuracy.begin(), report.fold_accuracy.end(), 0.0) / rounds;
  double var = 0.0;
  for (const double a : report.fold_accuracy) var += (a - report.mean) * (a - report.mean);
  report.stddev = std::sqrt(var / static_cast<double>(rounds - 1));
  return report;
}

std::array<bool, kLayoutFeatureCount> ablation_mask(AblationMode mode, std::span<const std::string> groups) {
  const auto& known = syndrome_groups();
  for (const auto& g : groups) {
    if (std::find(known.begin(), known.end(), g) == known.end()) {
      throw Error(ErrorCode::kUnknownGroup, "unknown syndrome group '" + g + "'");
    }
  }
  std::array<bool, kLayoutFeatureCount> mask{};
  for (std::size_t c = 0; c < kLayoutFeatureCount; ++c) {
    const bool listed = std::find(groups.begin(), groups.end(), feature_group(c)) != groups.end();
    mask[c] = mode == AblationMode::kOnly ? listed : !listed;
  }
  return mask;
}

EvalReport ablation(const Corpus& corpus, AblationMode mode, std::span<const std::string> groups,
                    TrainConfig train, const CrossValidationConfig& config) {
  train.active = ablation_mask(mode, groups);
  std::string name = mode == AblationMode::kOnly ? "only " : "exclude ";
  for (std::size_t i = 0; i < groups.size(); ++i) name += (i ? "+" : "") + groups[i];
  if (groups.empty()) name += "nothing";
  return cross_validate(corpus, model_method(train), config, name);
}

void write_eval_table(std::ostream& out, std::span<const EvalReport> reports) {
  std::size_t width = 6;
  for (const auto& r : reports) width = std::max(width, r.method.size());
  auto pad = [](std::string s, std::size_t w) { return s + std::string(w > s.size() ? w - s.size() : 0, ' '); };
  out << pad("method", width) << "  accuracy            advantage  proper-vs-garbage  rounds\n";
  for (const auto& r : reports) {
    const double advantage = reports.front().mean - r.mean;
    out << pad(r.method, width) << "  " << pad(fixed(100 * r.mean, 2) + " +- " + fixed(100 * r.stddev, 2) + " %", 18)
        << "  " << pad((advantage >= 0 ? "+" : "") + fixed(100 * advantage, 2), 9) << "  "
        << pad(fixed(100 * r.kind_mean(PairKind::kProperGarbage), 2) + " %", 17) << "  " << r.fold_accuracy.size()
        << '\n';
  }
}

void write_eval_csv(std::ostream& out, std::span<const EvalReport> reports) {
  out << "method,mean,stddev,advantage,proper_garbage,worsening,interpolation,rounds,folds\n";
  for (const auto& r : reports) {
    out << r.method << ',' << fixed(r.mean, 6) << ',' << fixed(r.stddev, 6) << ','
        << fixed(reports.front().mean - r.mean, 6) << ',' << fixed(r.kind_mean(PairKind::kProperGarbage), 6) << ','
        << fixed(r.kind_mean(PairKind::kWorsening), 6) << ',' << fixed(r.kind_mean(PairKind::kInterpolation), 6)
        << ',' << r.fold_accuracy.size() << ',';
    for (std::size_t i = 0; i < r.fold_accuracy.size(); ++i) out << (i ? ";" : "") << fixed(r.fold_accuracy[i], 6);
    out << '\n';
  }
}

}  // namespace layoutjudge
