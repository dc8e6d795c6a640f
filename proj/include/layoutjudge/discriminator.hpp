#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "layoutjudge/features.hpp"
#include "layoutjudge/graph.hpp"
#include "layoutjudge/rng.hpp"
#include "layoutjudge/verdict.hpp"

namespace layoutjudge {

// Siamese network. SM maps 57 layout features to 11 through
// dropout(0.5) -> dense 57x15 linear -> dropout(0.25) -> dense 15x11 ReLU.
// GM takes SM(a) - SM(b) and a dense 2x2 linear map of the graph features,
// concatenated to 13, through dense 13x1 tanh.
inline constexpr std::size_t kHidden1 = 15;
inline constexpr std::size_t kHidden2 = 11;
inline constexpr std::size_t kAux = 2;
inline constexpr std::size_t kJoined = kHidden2 + kAux;

// Flat parameter vector. Weight blocks are row-major [input][output].
inline constexpr std::size_t kOffW1 = 0;
inline constexpr std::size_t kOffB1 = kOffW1 + kLayoutFeatureCount * kHidden1;
inline constexpr std::size_t kOffW2 = kOffB1 + kHidden1;
inline constexpr std::size_t kOffB2 = kOffW2 + kHidden1 * kHidden2;
inline constexpr std::size_t kOffWa = kOffB2 + kHidden2;
inline constexpr std::size_t kOffBa = kOffWa + kGraphFeatureCount * kAux;
inline constexpr std::size_t kOffWo = kOffBa + kAux;
inline constexpr std::size_t kOffBo = kOffWo + kJoined;
inline constexpr std::size_t kParamCount = kOffBo + 1;
static_assert(kParamCount == 1066);

inline constexpr double kDropout1 = 0.5;
inline constexpr double kDropout2 = 0.25;

/// Per-column mean and stddev. Zero-variance columns keep stddev 1 and are
/// flagged. Columns switched off in `active` standardize to 0, which is how
/// ablations remove a syndrome group.
struct Standardization {
  std::array<double, kLayoutFeatureCount> layout_mean{};
  std::array<double, kLayoutFeatureCount> layout_std{};
  std::array<bool, kLayoutFeatureCount> layout_constant{};
  std::array<bool, kLayoutFeatureCount> active{};
  std::array<double, kGraphFeatureCount> graph_mean{};
  std::array<double, kGraphFeatureCount> graph_std{};
  std::array<bool, kGraphFeatureCount> graph_constant{};

  /// mean 0, stddev 1, every column active.
  static Standardization identity();
  friend bool operator==(const Standardization&, const Standardization&) = default;
};

struct ModelParams {
  std::vector<double> weights = std::vector<double>(kParamCount, 0.0);
  Standardization standardization = Standardization::identity();
  std::uint64_t feature_hash = feature_order_hash();
  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Glorot-uniform weights, zero biases.
ModelParams init_model(std::uint64_t seed);

/// Standardized inputs of one pair.
struct PairInput {
  std::array<double, kLayoutFeatureCount> a{};
  std::array<double, kLayoutFeatureCount> b{};
  std::array<double, kGraphFeatureCount> graph{};
  double t = 0.0;  // label, when training
};

PairInput standardize(const Standardization& s, const FeatureVector& a, const FeatureVector& b);

enum class Mode { kTrain, kInfer };

/// Throws DimensionMismatch. rng is only drawn from in train mode.
std::array<double, kHidden2> sm_forward(const ModelParams& m, std::span<const double> v, Mode mode,
                                        Rng& rng);
/// t in [-1, 1]; in train mode both branches share one dropout mask.
double dm_forward(const ModelParams& m, std::span<const double> graph, std::span<const double> a,
                  std::span<const double> b, Mode mode, Rng& rng);

/// Mean squared error over the batch. When gradient is non-null it receives
/// d(loss)/d(weights). Dropout is applied when rng is non-null.
double loss_and_gradient(const ModelParams& m, std::span<const PairInput> batch,
                         std::vector<double>* gradient, Rng* rng);

struct TrainConfig {
  double learning_rate = 0.01;
  double momentum = 0.9;
  std::size_t batch_size = 64;
  int epochs = 100;
  std::uint64_t seed = 0;
  /// Layout columns fed to the network; the rest are zeroed.
  std::array<bool, kLayoutFeatureCount> active = [] {
    std::array<bool, kLayoutFeatureCount> all{};
    all.fill(true);
    return all;
  }();
};

struct TrainingPair {
  std::size_t a = 0;  // rows of TrainingSet::features
  std::size_t b = 0;
  double t = 0.0;
};

struct TrainingSet {
  std::vector<FeatureVector> features;
  std::vector<TrainingPair> pairs;
};

/// Standardization over the distinct feature rows the pairs reference.
Standardization fit_standardization(const TrainingSet& data,
                                    const std::array<bool, kLayoutFeatureCount>& active);

struct TrainResult {
  ModelParams model;
  std::vector<double> epoch_loss;  // mean training loss of each epoch
};

/// Mini-batch SGD with momentum on the MSE. Deterministic per seed. Throws
/// EmptyInput.
TrainResult train(const TrainingSet& data, const TrainConfig& config);

Verdict predict(const ModelParams& m, const FeatureVector& a, const FeatureVector& b);
Verdict predict(const ModelParams& m, const Graph& g, const Layout& a, const Layout& b);

/// Text format: magic and version line, feature hash, parameter count,
/// standardization rows, the weights in flat order at 17 significant digits,
/// and a final FNV-1a checksum of everything before it.
void save_model(const ModelParams& m, std::ostream& out);
void save_model(const ModelParams& m, const std::filesystem::path& path);
/// Throws ChecksumMismatch, VersionMismatch (format version or feature order)
/// and ParseError.
ModelParams load_model(std::istream& in);
ModelParams load_model(const std::filesystem::path& path);

}  // namespace layoutjudge
