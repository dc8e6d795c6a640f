#include <cmath>
#include <sstream>

#include "doctest.h"
#include "layoutjudge/discriminator.hpp"
#include "layoutjudge/error.hpp"
#include "layoutjudge/generators.hpp"
#include "layoutjudge/layout_engine.hpp"

using namespace layoutjudge;

namespace {

std::array<double, kLayoutFeatureCount> random_features(Rng& rng, double scale = 1.0) {
  std::array<double, kLayoutFeatureCount> v{};
  for (auto& x : v) x = scale * rng.normal();
  return v;
}

std::vector<PairInput> random_batch(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<PairInput> batch(n);
  for (auto& p : batch) {
    p.a = random_features(rng);
    p.b = random_features(rng);
    p.graph = {rng.normal(), rng.normal()};
    p.t = rng.uniform(-1.0, 1.0);
  }
  return batch;
}

TrainingSet random_training_set(std::uint64_t seed, std::size_t rows, std::size_t pairs) {
  Rng rng(seed);
  TrainingSet data;
  for (std::size_t r = 0; r < rows; ++r) {
    FeatureVector f;
    f.layout = random_features(rng, 3.0);
    f.layout[5] = 7.0;  // a constant column
    f.graph = {rng.uniform(2.0, 6.0), rng.uniform(3.0, 7.0)};
    data.features.push_back(f);
  }
  for (std::size_t k = 0; k < pairs; ++k) {
    const auto a = static_cast<std::size_t>(rng.below(rows));
    const auto b = static_cast<std::size_t>(rng.below(rows));
    // a learnable rule: the side with the larger feature 0 is worse
    const double t = data.features[a].layout[0] < data.features[b].layout[0] ? -1.0 : 1.0;
    data.pairs.push_back({a, b, t});
  }
  return data;
}

}  // namespace

TEST_CASE("parameter layout") {
  CHECK(kParamCount == 870 + 176 + 6 + 14);
  CHECK(init_model(1).weights.size() == 1066);
  CHECK(kOffB1 == 855);
  CHECK(kOffWo == 1052);
}

TEST_CASE("forward pass basics") {
  Rng rng(3);
  ModelParams zero;
  const auto v = random_features(rng);
  const auto s = sm_forward(zero, v, Mode::kInfer, rng);
  CHECK(s.size() == 11);
  for (const double x : s) CHECK(x == 0.0);

  const ModelParams m = init_model(5);
  CHECK(sm_forward(m, v, Mode::kInfer, rng) == sm_forward(m, v, Mode::kInfer, rng));
  const std::array<double, 2> graph = {1.0, 2.0};
  const auto b = random_features(rng);
  CHECK(dm_forward(m, graph, v, b, Mode::kInfer, rng) == dm_forward(m, graph, v, b, Mode::kInfer, rng));

  // identical inputs with the aux path zeroed leave only the output bias
  ModelParams same = init_model(6);
  for (std::size_t k = kOffWa; k < kOffWo; ++k) same.weights[k] = 0.0;
  CHECK(dm_forward(same, graph, v, v, Mode::kInfer, rng) == 0.0);
  CHECK(dm_forward(same, graph, v, v, Mode::kTrain, rng) == 0.0);
  same.weights[kOffBo] = 0.3;
  CHECK(dm_forward(same, graph, v, v, Mode::kInfer, rng) == doctest::Approx(std::tanh(0.3)));

  const auto huge = random_features(rng, 1e6);
  for (int k = 0; k < 20; ++k) {
    const double t = dm_forward(init_model(k), graph, huge, v, Mode::kTrain, rng);
    CHECK(std::abs(t) <= 1.0);
  }

  const std::vector<double> short_input(56, 0.0);
  CHECK_THROWS_AS(sm_forward(m, short_input, Mode::kInfer, rng), Error);
  CHECK_THROWS_AS(dm_forward(m, graph, short_input, b, Mode::kInfer, rng), Error);
}

TEST_CASE("analytic gradient matches finite differences") {
  ModelParams m = init_model(17);
  for (std::size_t k = kOffB1; k < kOffW2; ++k) m.weights[k] = 0.1;
  for (std::size_t k = kOffB2; k < kOffWa; ++k) m.weights[k] = 0.2;
  const auto batch = random_batch(23, 8);
  std::vector<double> grad;
  loss_and_gradient(m, batch, &grad, nullptr);
  REQUIRE(grad.size() == kParamCount);

  const double h = 1e-5;
  std::size_t bad = 0;
  double worst = 0.0;
  for (std::size_t k = 0; k < kParamCount; ++k) {
    ModelParams up = m;
    ModelParams down = m;
    up.weights[k] += h;
    down.weights[k] -= h;
    const double numeric =
        (loss_and_gradient(up, batch, nullptr, nullptr) - loss_and_gradient(down, batch, nullptr, nullptr)) /
        (2.0 * h);
    const double scale = std::max({std::abs(numeric), std::abs(grad[k]), 1e-6});
    const double rel = std::abs(numeric - grad[k]) / scale;
    worst = std::max(worst, rel);
    if (rel >= 1e-4) ++bad;
  }
  INFO("worst relative error " << worst);
  CHECK(bad == 0);
}

TEST_CASE("standardization") {
  const auto data = random_training_set(4, 60, 300);
  std::array<bool, kLayoutFeatureCount> all{};
  all.fill(true);
  const auto s = fit_standardization(data, all);
  CHECK(s.layout_constant[5]);
  CHECK(s.layout_std[5] == 1.0);
  for (std::size_t i = 0; i < kLayoutFeatureCount; ++i) {
    double sum = 0.0;
    double sq = 0.0;
    for (const auto& f : data.features) {
      const double z = standardize(s, f, f).a[i];
      sum += z;
      sq += z * z;
    }
    const double n = static_cast<double>(data.features.size());
    CHECK(std::abs(sum / n) <= 1e-6);
    if (!s.layout_constant[i]) CHECK(std::abs(std::sqrt(sq / n) - 1.0) <= 1e-6);
  }
  auto masked = all;
  masked[0] = false;
  const auto sm = fit_standardization(data, masked);
  CHECK(standardize(sm, data.features[0], data.features[1]).a[0] == 0.0);
}

TEST_CASE("training") {
  CHECK_THROWS_AS(train(TrainingSet{}, TrainConfig{}), Error);

  TrainingSet one;
  FeatureVector fa;
  FeatureVector fb;
  Rng rng(8);
  fa.layout = random_features(rng);
  fb.layout = random_features(rng);
  one.features = {fa, fb};
  one.pairs = {{0, 1, -1.0}};
  TrainConfig cfg;
  cfg.epochs = 500;
  cfg.seed = 2;
  const auto fit = train(one, cfg);
  CHECK(fit.epoch_loss.size() == 500);
  CHECK(fit.epoch_loss.back() < 0.05);
  PairInput in = standardize(fit.model.standardization, fa, fb);
  in.t = -1.0;
  CHECK(loss_and_gradient(fit.model, std::span(&in, 1), nullptr, nullptr) < 0.05);

  const auto data = random_training_set(9, 80, 600);
  TrainConfig c2;
  c2.epochs = 30;
  c2.seed = 77;
  const auto r1 = train(data, c2);
  const auto r2 = train(data, c2);
  CHECK(r1.model == r2.model);
  for (const double l : r1.epoch_loss) CHECK(std::isfinite(l));
  CHECK(r1.epoch_loss.back() < r1.epoch_loss.front());
  std::size_t right = 0;
  for (const auto& p : data.pairs) {
    const auto v = predict(r1.model, data.features[p.a], data.features[p.b]);
    right += (v.prefers_a == (p.t < 0)) ? 1 : 0;
  }
  CHECK(static_cast<double>(right) / data.pairs.size() > 0.9);
}

TEST_CASE("model files") {
  const auto data = random_training_set(12, 30, 100);
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.active[7] = false;
  const auto model = train(data, cfg).model;

  std::stringstream file;
  save_model(model, file);
  const std::string text = file.str();
  std::istringstream in(text);
  const auto loaded = load_model(in);
  CHECK(loaded == model);
  for (const auto& p : data.pairs) {
    CHECK(predict(loaded, data.features[p.a], data.features[p.b]).t ==
          predict(model, data.features[p.a], data.features[p.b]).t);
  }

  std::string corrupted = text;
  const auto at = corrupted.find("weights ") + 10;
  corrupted[at] = corrupted[at] == '1' ? '2' : '1';
  std::istringstream bad(corrupted);
  try {
    load_model(bad);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kChecksumMismatch);
  }

  ModelParams other = model;
  other.feature_hash ^= 1;
  std::stringstream foreign;
  save_model(other, foreign);
  try {
    load_model(foreign);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kVersionMismatch);
  }
}

TEST_CASE("verdict from the features of real layouts") {
  const auto [grid, native] = gen_grid(6, 6);
  const Layout phantom = layout_phantom(grid, 4);
  // zero weights: a tie, reported as b
  const auto tie = predict(ModelParams{}, grid, native, phantom);
  CHECK(tie.zero_confidence);
  CHECK_FALSE(tie.prefers_a);
  const auto v = predict(init_model(3), grid, native, phantom);
  CHECK(std::abs(v.t) <= 1.0);
}
