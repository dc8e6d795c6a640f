#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "layoutjudge/corruption.hpp"
#include "layoutjudge/error.hpp"
#include "layoutjudge/features.hpp"
#include "layoutjudge/generators.hpp"
#include "layoutjudge/layout_engine.hpp"
#include "layoutjudge/rng.hpp"

using namespace layoutjudge;

namespace {

// Direct binning, written independently of the library's index arithmetic.
std::vector<double> binning_oracle(const std::vector<double>& s, int bins) {
  double lo = s[0], hi = s[0];
  for (double v : s) lo = std::min(lo, v), hi = std::max(hi, v);
  std::vector<double> h(bins, 0.0);
  for (double v : s) {
    int b = 0;
    if (hi > lo) {
      const double width = (hi - lo) / bins;
      b = 0;
      while (b + 1 < bins && v >= lo + (b + 1) * width) ++b;
    }
    h[b] += 1.0 / s.size();
  }
  return h;
}

}  // namespace

TEST_CASE("histogram") {
  CHECK(histogram(std::vector<double>{0, 1}, 2) == std::vector<double>{0.5, 0.5});
  CHECK(histogram(std::vector<double>{3, 3, 3}, 4) == std::vector<double>{1, 0, 0, 0});
  const std::vector<double> s{0, 0.4, 0.6, 1};
  CHECK(histogram(s, 2) == std::vector<double>{0.5, 0.5});
  CHECK(histogram(s, 2) == binning_oracle(s, 2));
  Rng rng(3);
  std::vector<double> r;
  for (int i = 0; i < 1000; ++i) r.push_back(rng.normal());
  for (int bins : {1, 3, 8, 37}) {
    const auto h = histogram(r, bins);
    const auto o = binning_oracle(r, bins);
    double sum = 0.0;
    for (int b = 0; b < bins; ++b) {
      CHECK(h[b] == doctest::Approx(o[b]));
      sum += h[b];
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(histogram(std::vector<double>{}, 4), Error);
}

TEST_CASE("entropy") {
  for (int bins = 8; bins <= 512; bins *= 2) {
    CHECK(std::abs(entropy(std::vector<double>(bins, 1.0 / bins)) - std::log2(bins)) < 1e-12);
  }
  CHECK(entropy(std::vector<double>{0, 1, 0}) == 0.0);
  CHECK(entropy(std::vector<double>{0.5, 0.25, 0.25}) == doctest::Approx(1.5));
}

TEST_CASE("entropy regression") {
  const auto flat = entropy_regression(std::vector<double>(50, 2.0));
  CHECK(flat.intercept == 0.0);
  CHECK(flat.slope == 0.0);

  std::vector<double> xs{3, 4, 5, 6, 7, 8, 9};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(-0.75 + 0.625 * x);
  const auto fit = fit_line(xs, ys);
  CHECK(std::abs(fit.intercept + 0.75) < 1e-9);
  CHECK(std::abs(fit.slope - 0.625) < 1e-9);

  Rng rng(17);
  std::vector<double> u(100000);
  for (double& v : u) v = rng.uniform();
  const auto uf = entropy_regression(u);
  CHECK(std::abs(uf.slope - 1.0) < 0.05);
  CHECK(std::abs(uf.intercept) < 0.05);

  // agrees with direct histograms
  std::vector<double> ent;
  for (int b = 8; b <= 512; b *= 2) ent.push_back(entropy(histogram(u, b)));
  const auto direct = fit_line(xs, ent);
  CHECK(direct.slope == doctest::Approx(uf.slope).epsilon(1e-12));
  CHECK(direct.intercept == doctest::Approx(uf.intercept).epsilon(1e-12));
}

TEST_CASE("differential entropy") {
  Rng rng(5);
  std::vector<double> s(100000);
  for (double& v : s) v = rng.normal();
  const double expected = std::log2(std::sqrt(2 * std::numbers::pi * std::numbers::e));
  const double e = differential_entropy(s);
  CHECK(std::abs(e - expected) < 0.1);

  std::vector<double> shifted = s;
  for (double& v : shifted) v += 12.5;
  CHECK(std::abs(differential_entropy(shifted) - e) < 1e-9);
  std::vector<double> scaled = s;
  for (double& v : scaled) v *= 2.0;
  CHECK(std::abs(differential_entropy(scaled) - e - 1.0) < 0.02);
  CHECK(differential_entropy(std::vector<double>(10, 1.0)) == 0.0);
  CHECK(differential_entropy(std::vector<double>{1.0}) == 0.0);
}

TEST_CASE("differential entropy by brute-force quadrature") {
  Rng rng(8);
  std::vector<double> s(500);
  for (double& v : s) v = rng.uniform(-1, 3) * rng.uniform();
  // full-window KDE and trapezoid rule without any cutoff
  double mu = 0, ss = 0, lo = s[0], hi = s[0];
  for (double v : s) mu += v, lo = std::min(lo, v), hi = std::max(hi, v);
  mu /= s.size();
  for (double v : s) ss += (v - mu) * (v - mu);
  const double sd = std::sqrt(ss / (s.size() - 1));
  const double sigma = 3.5 * sd * std::pow(double(s.size()), -1.0 / 3.0);
  const double a = lo - 4 * sigma, b = hi + 4 * sigma, h = (b - a) / 1023;
  double integral = 0.0;
  for (int j = 0; j < 1024; ++j) {
    const double x = a + j * h;
    double f = 0.0;
    for (double v : s) f += std::exp(-(x - v) * (x - v) / (2 * sigma * sigma));
    f /= s.size() * sigma * std::sqrt(2 * std::numbers::pi);
    const double t = f > 0 ? -f * std::log2(f) : 0.0;
    integral += (j == 0 || j == 1023) ? 0.5 * t : t;
  }
  CHECK(differential_entropy(s) == doctest::Approx(integral * h).epsilon(1e-10));
}

TEST_CASE("feature names and order") {
  const auto& names = layout_feature_names();
  CHECK(names.size() == 57);
  CHECK(names[0] == "PRINVEC1.x");
  CHECK(names[4] == "PRINCOMP1.mean");
  CHECK(names[16] == "EDGE_LENGTH.rms");
  CHECK(names[27] == "RDF_LOCAL_0.mean");
  CHECK(names[56] == "RDF_LOCAL_9.entropy");
  CHECK(feature_group(30) == "RDF_LOCAL");
  CHECK(feature_group(19) == "RDF_GLOBAL");
  CHECK(feature_order_hash() == feature_order_hash());
  std::size_t covered = 0;
  for (const auto& group : syndrome_groups()) {
    for (std::size_t c = 0; c < 57; ++c) covered += feature_group(c) == group ? 1 : 0;
  }
  CHECK(covered == 57);
}

TEST_CASE("feature vector") {
  const auto [g, native] = gen_grid(6, 7);
  const FeatureVector f = feature_vector(g, native);
  CHECK(f.layout.size() + f.graph.size() == 59);
  CHECK(f.layout[16] == doctest::Approx(1.0));  // EDGE_LENGTH rms of a unit grid
  CHECK(f.graph[0] == doctest::Approx(std::log(42.0)));
  CHECK(f.graph[1] == doctest::Approx(std::log(double(g.edge_count()))));
  for (double v : f.layout) CHECK(std::isfinite(v));
  CHECK(feature_vector(g, native) == f);

  // every syndrome's rms dominates its |mean|
  for (std::size_t c = 0; c < 57; ++c) {
    const auto& name = layout_feature_names()[c];
    if (name.ends_with(".mean")) CHECK(f.layout[c + 1] >= std::abs(f.layout[c]) - 1e-15);
  }

  Layout turned = native;
  for (auto& p : turned.positions) p = {0.6 * p.x - 0.8 * p.y, 0.8 * p.x + 0.6 * p.y};
  const FeatureVector r = feature_vector(g, turned);
  for (std::size_t c = 0; c < 57; ++c) {
    const auto group = feature_group(c);
    if (group == "PRINVEC1" || group == "PRINVEC2") continue;
    INFO(layout_feature_names()[c]);
    CHECK(std::abs(r.layout[c] - f.layout[c]) < 1e-9);
  }
  CHECK(r.layout[0] != doctest::Approx(f.layout[0]));
}

TEST_CASE("RDF_LOCAL block clamps to the diameter") {
  const auto [g, native] = gen_grid(3, 3);  // diameter 4
  const FeatureVector f = feature_vector(g, native);
  // i = 2 (d = 4) onwards all equal the global RDF block
  for (int i = 3; i < 10; ++i) {
    for (int k = 0; k < 3; ++k) CHECK(f.layout[27 + 3 * i + k] == f.layout[27 + 6 + k]);
  }
  CHECK(f.layout[27 + 6] == doctest::Approx(f.layout[19]));  // mean equals RDF_GLOBAL mean
}

TEST_CASE("feature table round trip") {
  const auto [g, native] = gen_grid(4, 4);
  const Layout rnd = layout_random(g, RandomDistribution::kNormal, 1);
  const std::vector<FeatureVector> rows{feature_vector(g, native), feature_vector(g, rnd)};
  std::stringstream s;
  write_feature_table(s, {"g0/native", "g0/random"}, rows);
  const FeatureTable back = read_feature_table(s);
  CHECK(back.ids == std::vector<std::string>{"g0/native", "g0/random"});
  CHECK(back.rows == rows);
  std::istringstream bad("id\tfoo\n");
  CHECK_THROWS_AS(read_feature_table(bad), Error);
}
