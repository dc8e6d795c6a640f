// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "../support/oracles.hpp"
#include "layoutjudge/baselines.hpp"
#include "layoutjudge/corruption.hpp"
#include "layoutjudge/discriminator.hpp"
#include "layoutjudge/error.hpp"
#include "layoutjudge/evaluation.hpp"
#include "layoutjudge/features.hpp"
#include "layoutjudge/generators.hpp"
#include "layoutjudge/layout_engine.hpp"
#include "layoutjudge/rng.hpp"
#include "layoutjudge/simd/kernels.hpp"
#include "layoutjudge/syndromes.hpp"

using namespace layoutjudge;

namespace {

constexpr std::uint64_t kCorpusSeed = 42;
constexpr std::uint64_t kFoldSeed = 7;

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail, double seconds) {
  std::printf("%s  [%2d] %-22s %s (%.1fs)\n", ok ? "PASS" : "FAIL", id, name, detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <class F>
void criterion(int id, const char* name, F&& body) {
  const auto start = std::chrono::steady_clock::now();
  bool ok = false;
  std::string detail;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("threw: ") + e.what();
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(id, name, ok, detail, s);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// average ranks for ties
std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> random_features(Rng& rng) {
  std::vector<double> v(kLayoutFeatureCount);
  for (auto& x : v) x = rng.normal();
  return v;
}

std::string csv(std::span<const EvalReport> reports) {
  std::ostringstream s;
  write_eval_csv(s, reports);
  return s.str();
}

}  // namespace

int main() {
  std::printf("kernels: %s\n", std::string(simd::isa_name(simd::kernels().isa)).c_str());

  criterion(1, "architecture", [](std::string& d) {
    const ModelParams m = init_model(1);
    std::size_t trainable = m.weights.size();
    d = "parameters " + std::to_string(trainable) + ", features " + std::to_string(kLayoutFeatureCount) + "+" +
        std::to_string(kGraphFeatureCount);
    // the forward pass must accept exactly that interface
    std::vector<double> a(kLayoutFeatureCount, 0.5), b(kLayoutFeatureCount, -0.5), g(kGraphFeatureCount, 1.0);
    Rng rng(0);
    const double t = dm_forward(m, g, a, b, Mode::kInfer, rng);
    bool rejects = false;
    try {
      std::vector<double> shorter(kLayoutFeatureCount - 1, 0.0);
      dm_forward(m, g, shorter, b, Mode::kInfer, rng);
    } catch (const Error&) {
      rejects = true;
    }
    return trainable == 1066 && kParamCount == 1066 && kLayoutFeatureCount == 57 && kGraphFeatureCount == 2 &&
           std::abs(t) <= 1.0 && rejects;
  });

  criterion(2, "gradient", [](std::string& d) {
    ModelParams m = init_model(17);
    for (std::size_t k = kOffB1; k < kOffW2; ++k) m.weights[k] = 0.1;
    for (std::size_t k = kOffB2; k < kOffWa; ++k) m.weights[k] = 0.2;
    Rng rng(23);
    std::vector<PairInput> batch(16);
    for (auto& p : batch) {
      const auto a = random_features(rng);
      const auto b = random_features(rng);
      std::copy(a.begin(), a.end(), p.a.begin());
      std::copy(b.begin(), b.end(), p.b.begin());
      p.graph = {rng.normal(), rng.normal()};
      p.t = rng.uniform(-1.0, 1.0);
    }
    std::vector<double> grad;
    loss_and_gradient(m, batch, &grad, nullptr);
    const double h = 1e-5;
    double worst = 0.0;
    for (std::size_t k = 0; k < kParamCount; ++k) {
      ModelParams up = m, down = m;
      up.weights[k] += h;
      down.weights[k] -= h;
      const double numeric =
          (loss_and_gradient(up, batch, nullptr, nullptr) - loss_and_gradient(down, batch, nullptr, nullptr)) /
          (2.0 * h);
      const double scale = std::max({std::abs(numeric), std::abs(grad[k]), 1e-6});
      worst = std::max(worst, std::abs(numeric - grad[k]) / scale);
    }
    d = fmt("max relative error %.2e over %.0f parameters", worst, double(kParamCount));
    return grad.size() == kParamCount && worst < 1e-4;
  });

  criterion(3, "stress oracle", [](std::string& d) {
    CorpusConfig cfg;
    cfg.graph_count = 10;
    cfg.max_n = 120;
    const Corpus c = build_corpus(cfg, kCorpusSeed);
    double worst = 0.0;
    std::size_t checked = 0;
    for (std::size_t li = 0; li < c.layouts.size() && checked < 100; ++li) {
      const Graph& g = c.graphs[c.layouts[li].graph].graph;
      const Layout& l = c.layouts[li].layout;
      const auto want = oracle::closed_form_stress_min(l, g);
      const auto got = fit_stress_scale(g, l);
      const double inv = scale_invariant_stress(g, l);
      auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
      worst = std::max({worst, rel(got.scale, want.scale), rel(got.minimum, want.minimum),
                        rel(inv, want.minimum / (want.scale * want.scale))});
      ++checked;
    }
    d = fmt("%.0f instances, max relative error %.2e", double(checked), worst);
    return checked == 100 && worst <= 1e-9;
  });

  criterion(4, "entropy identities", [](std::string& d) {
    double worst = 0.0;
    for (std::size_t beta = 8; beta <= 512; ++beta) {
      const std::vector<double> h(beta, 1.0 / static_cast<double>(beta));
      worst = std::max(worst, std::abs(entropy(h) - std::log2(static_cast<double>(beta))));
    }
    Rng rng(2024);
    std::vector<double> sample(100000);
    for (auto& x : sample) x = rng.normal();
    const double want = std::log2(std::sqrt(2.0 * std::numbers::pi * std::numbers::e));
    const double got = differential_entropy(sample);
    d = fmt("histogram error %.1e, normal %.4f vs %.4f bits", worst, got, want);
    return worst <= 1e-12 && std::abs(got - want) <= 0.1;
  });

  criterion(5, "distortion vs RDF", [](std::string& d) {
    const auto grid = gen_grid(12, 12);
    const Layout base = normalize_layout(grid.second, grid.first);
    std::vector<double> rs, eta, sigma;
    for (int step = 0; step <= 10; ++step) {
      const double r = 0.05 * step;
      for (std::uint64_t s = 0; s < 10; ++s) {
        const Layout l = worsen(grid.first, base, {WorsenKind::kPerturb, r, Rng::derive(99, s)});
        const auto fit = entropy_regression(rdf_global(l));
        rs.push_back(r);
        eta.push_back(fit.intercept);
        sigma.push_back(fit.slope);
      }
    }
    const double re = spearman(rs, eta);
    const double rsig = spearman(rs, sigma);
    d = fmt("spearman(r, eta) %.3f, spearman(r, sigma) %.3f", re, rsig);
    return std::abs(re) >= 0.8 && std::abs(rsig) >= 0.8;
  });

  // The desk corpus is shared by the remaining criteria.
  const auto start = std::chrono::steady_clock::now();
  Corpus desk = build_corpus(CorpusConfig{}, kCorpusSeed);
  compute_baseline_inputs(desk);
  std::printf("desk corpus: %zu graphs, %zu layouts, %zu pairs (%.1fs)\n", desk.graphs.size(), desk.layouts.size(),
              desk.pairs.size(),
              std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  const CrossValidationConfig cv{10, 0.2, kFoldSeed};
  EvalReport model;

  criterion(6, "desk accuracy", [&](std::string& d) {
    model = cross_validate(desk, model_method(TrainConfig{}), cv, "model");
    const double pg = model.kind_mean(PairKind::kProperGarbage);
    d = fmt("mean %.4f +- %.4f, proper-vs-garbage %.4f", model.mean, model.stddev, pg) + ", pairs " +
        std::to_string(desk.pairs.size());
    return desk.pairs.size() >= 3000 && model.mean >= 0.90 && pg >= 0.97;
  });

  criterion(7, "baseline ordering", [&](std::string& d) {
    const std::vector<EvalReport> table{model, cross_validate(desk, stress_method(), cv, "STRESS"),
                                        cross_validate(desk, comb_method(), cv, "COMB")};
    write_eval_table(std::cout, table);
    d = fmt("model %.4f, STRESS %.4f, COMB %.4f", table[0].mean, table[1].mean, table[2].mean);
    return table[0].mean >= table[1].mean - 0.01 && table[0].mean >= table[2].mean - 0.01;
  });

  criterion(8, "ablation direction", [&](std::string& d) {
    const std::vector<std::string> rdf{"RDF_GLOBAL", "RDF_LOCAL"};
    const std::vector<std::string> angular{"ANGULAR"};
    const std::vector<EvalReport> table{ablation(desk, AblationMode::kOnly, rdf, TrainConfig{}, cv),
                                        ablation(desk, AblationMode::kOnly, angular, TrainConfig{}, cv)};
    write_eval_table(std::cout, table);
    d = fmt("only RDF %.4f, only ANGULAR %.4f", table[0].mean, table[1].mean);
    return table[0].mean > table[1].mean && table[0].mean >= 0.55 && table[1].mean >= 0.55;
  });

  criterion(9, "harness sanity", [&](std::string& d) {
    const auto oracle = cross_validate(desk, oracle_method(), cv, "oracle");
    const auto coin = cross_validate(desk, coin_flip_method(), cv, "coin");
    std::size_t pairs = 0;
    for (const auto p : coin.fold_pairs) pairs += p;
    d = fmt("oracle %.4f, coin %.4f on %.0f pairs", oracle.mean, coin.mean, double(pairs));
    return oracle.mean == 1.0 && std::abs(coin.mean - 0.5) <= 0.05 && pairs >= 1000;
  });

  criterion(10, "determinism", [&](std::string& d) {
    Corpus again = build_corpus(CorpusConfig{}, kCorpusSeed);
    compute_baseline_inputs(again);
    const bool same_corpus = manifest_text(again) == manifest_text(desk);
    const EvalReport rerun = cross_validate(again, model_method(TrainConfig{}), cv, "model");
    const std::string a = csv(std::span(&model, 1));
    const std::string b = csv(std::span(&rerun, 1));
    d = std::string("manifest ") + (same_corpus ? "identical" : "differs") + ", report " +
        (a == b ? "identical" : "differs") + " (" + std::to_string(a.size()) + " bytes)";
    return same_corpus && a == b;
  });

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "SOME FAIL", failures);
  return failures == 0 ? 0 : 1;
}
