#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "doctest.h"
#include "layoutjudge/rng.hpp"
#include "layoutjudge/simd/kernels.hpp"

using namespace layoutjudge;
using simd::KernelTable;

namespace {

struct Inputs {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<std::uint16_t> hops;
};

Inputs make_inputs(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Inputs in;
  for (std::size_t i = 0; i < n; ++i) {
    in.xs.push_back(rng.uniform(-10.0, 10.0));
    in.ys.push_back(rng.uniform(-10.0, 10.0));
    in.hops.push_back(static_cast<std::uint16_t>(rng.between(1, 40)));
  }
  // a coincident pair exercises the zero-distance branches
  if (n > 3) {
    in.xs[2] = in.xs[1];
    in.ys[2] = in.ys[1];
  }
  return in;
}

void compare(const KernelTable& ref, const KernelTable& alt) {
  // Sizes cover empty, below one vector, exact multiples and ragged tails.
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 8u, 13u, 64u, 257u}) {
    const Inputs in = make_inputs(n, 1000 + n);
    std::vector<double> a(n);
    std::vector<double> b(n);
    ref.distances_from(in.xs.data(), in.ys.data(), n, 0.3, -0.7, a.data());
    alt.distances_from(in.xs.data(), in.ys.data(), n, 0.3, -0.7, b.data());
    for (std::size_t j = 0; j < n; ++j) CHECK(b[j] == doctest::Approx(a[j]).epsilon(1e-14));

    double ma = 0.5, mb = 0.25, na = 0.5, nb = 0.25;
    ref.stress_moments(a.data(), in.hops.data(), n, &ma, &mb);
    alt.stress_moments(a.data(), in.hops.data(), n, &na, &nb);
    CHECK(na == doctest::Approx(ma).epsilon(1e-12));
    CHECK(nb == doctest::Approx(mb).epsilon(1e-12));

    for (std::size_t i : {std::size_t{0}, n / 2, n > 0 ? n - 1 : 0}) {
      if (i >= n) continue;
      double fx1, fy1, fx2, fy2;
      ref.repulsion(in.xs.data(), in.ys.data(), n, i, 1.0, 1e-12, &fx1, &fy1);
      alt.repulsion(in.xs.data(), in.ys.data(), n, i, 1.0, 1e-12, &fx2, &fy2);
      CHECK(fx2 == doctest::Approx(fx1).epsilon(1e-10));
      CHECK(fy2 == doctest::Approx(fy1).epsilon(1e-10));

      double sx1, sy1, w1, sx2, sy2, w2;
      ref.majorization_row(in.xs.data(), in.ys.data(), in.hops.data(), n, i, &sx1, &sy1, &w1);
      alt.majorization_row(in.xs.data(), in.ys.data(), in.hops.data(), n, i, &sx2, &sy2, &w2);
      CHECK(sx2 == doctest::Approx(sx1).epsilon(1e-12));
      CHECK(sy2 == doctest::Approx(sy1).epsilon(1e-12));
      CHECK(w2 == doctest::Approx(w1).epsilon(1e-12));
    }
  }

  for (std::size_t last : {0u, 1u, 7u, 8u, 100u, 1024u}) {
    for (std::size_t first : {0u, 3u}) {
      if (first > last) continue;
      std::vector<double> da(1024, 0.125);
      std::vector<double> db(1024, 0.125);
      ref.gaussian_accumulate(-3.0, 0.01, first, last, 1.7, 2.5, da.data());
      alt.gaussian_accumulate(-3.0, 0.01, first, last, 1.7, 2.5, db.data());
      for (std::size_t j = 0; j < 1024; ++j) {
        CHECK(db[j] == doctest::Approx(da[j]).epsilon(1e-13));
      }
    }
  }
  // flush-to-zero region
  std::vector<double> da(16, 0.0);
  std::vector<double> db(16, 0.0);
  ref.gaussian_accumulate(0.0, 10.0, 0, 16, 0.0, 1.0, da.data());
  alt.gaussian_accumulate(0.0, 10.0, 0, 16, 0.0, 1.0, db.data());
  for (std::size_t j = 0; j < 16; ++j) CHECK(db[j] == doctest::Approx(da[j]).epsilon(1e-13));
  CHECK(da[15] == 0.0);
}

}  // namespace

TEST_CASE("scalar kernels against direct formulas") {
  const KernelTable& k = simd::scalar_kernels();
  const double xs[] = {0.0, 3.0, 1.0};
  const double ys[] = {0.0, 4.0, 1.0};
  double out[3];
  k.distances_from(xs, ys, 3, 0.0, 0.0, out);
  CHECK(out[1] == 5.0);
  double density[3] = {0, 0, 0};
  k.gaussian_accumulate(0.0, 1.0, 0, 3, 1.0, 0.5, density);
  CHECK(density[1] == 1.0);
  CHECK(density[0] == doctest::Approx(std::exp(-0.5)));
  const std::uint16_t hops[] = {1, 2, 1};
  double sx, sy, w;
  k.majorization_row(xs, ys, hops, 3, 0, &sx, &sy, &w);
  CHECK(w == doctest::Approx(1.0 / 4.0 + 1.0));
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
  const KernelTable* avx2 = simd::avx2_kernels();
  if (avx2 == nullptr) {
    MESSAGE("AVX2 unavailable on this machine; equivalence not exercised");
    return;
  }
  CHECK(avx2->isa == simd::Isa::kAvx2);
  compare(simd::scalar_kernels(), *avx2);
}

TEST_CASE("dispatch honours the scalar override") {
  const char* env = std::getenv("LAYOUTJUDGE_SIMD");
  const bool forced = env != nullptr && std::string(env) == "scalar";
  if (forced || simd::avx2_kernels() == nullptr) {
    CHECK(simd::kernels().isa == simd::Isa::kScalar);
  } else {
    CHECK(simd::kernels().isa == simd::Isa::kAvx2);
  }
}
