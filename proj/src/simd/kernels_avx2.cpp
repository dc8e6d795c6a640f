// Built with -mavx2 -mfma when LAYOUTJUDGE_HAVE_AVX2 is defined. Nothing in
// this file may run before dispatch has confirmed CPU support.

#include <cmath>

#include "layoutjudge/simd/kernels.hpp"

#if defined(LAYOUTJUDGE_HAVE_AVX2)
#include <immintrin.h>

namespace layoutjudge::simd {
namespace {

constexpr std::size_t kLanes = 4;

inline double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

// Cephes-style exp for arguments in [-708, 0]: x = n ln2 + r with
// |r| <= ln2/2, exp(r) from a (2,3) rational approximation, then 2^n by
// exponent-field construction.
inline __m256d exp_nonpositive(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
  const __m256d c1 = _mm256_set1_pd(6.93145751953125E-1);
  const __m256d c2 = _mm256_set1_pd(1.42860682030941723212E-6);
  const __m256d p0 = _mm256_set1_pd(1.26177193074810590878E-4);
  const __m256d p1 = _mm256_set1_pd(3.02994407707441961300E-2);
  const __m256d p2 = _mm256_set1_pd(9.99999999999999999910E-1);
  const __m256d q0 = _mm256_set1_pd(3.00198505138664455042E-6);
  const __m256d q1 = _mm256_set1_pd(2.52448340349684104192E-3);
  const __m256d q2 = _mm256_set1_pd(2.27265548208155028766E-1);
  const __m256d q3 = _mm256_set1_pd(2.00000000000000000009E0);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);

  const __m256d n =
      _mm256_round_pd(_mm256_mul_pd(x, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, c1, x);
  r = _mm256_fnmadd_pd(n, c2, r);
  const __m256d rr = _mm256_mul_pd(r, r);
  __m256d p = _mm256_fmadd_pd(p0, rr, p1);
  p = _mm256_fmadd_pd(p, rr, p2);
  p = _mm256_mul_pd(p, r);
  __m256d q = _mm256_fmadd_pd(q0, rr, q1);
  q = _mm256_fmadd_pd(q, rr, q2);
  q = _mm256_fmadd_pd(q, rr, q3);
  const __m256d e = _mm256_fmadd_pd(two, _mm256_div_pd(p, _mm256_sub_pd(q, p)), one);

  const __m256i n64 = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(n));
  const __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(e, _mm256_castsi256_pd(bits));
}

inline __m256d load_hops(const std::uint16_t* p) {
  const __m128i raw = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(p));
  return _mm256_cvtepi32_pd(_mm_cvtepu16_epi32(raw));
}

void distances_from(const double* xs, const double* ys, std::size_t count, double x, double y,
                    double* out) {
  const __m256d vx = _mm256_set1_pd(x);
  const __m256d vy = _mm256_set1_pd(y);
  std::size_t j = 0;
  for (; j + kLanes <= count; j += kLanes) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + j), vx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + j), vy);
    const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    _mm256_storeu_pd(out + j, _mm256_sqrt_pd(d2));
  }
  scalar_kernels().distances_from(xs + j, ys + j, count - j, x, y, out + j);
}

void gaussian_accumulate(double start, double step, std::size_t first, std::size_t last,
                         double center, double inv_two_var, double* density) {
  const __m256d vstep = _mm256_set1_pd(step);
  const __m256d vbase = _mm256_set1_pd(start - center);
  const __m256d vneg = _mm256_set1_pd(-inv_two_var);
  const __m256d floor_arg = _mm256_set1_pd(-700.0);
  const __m256d lane = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  std::size_t j = first;
  for (; j + kLanes <= last; j += kLanes) {
    const __m256d idx = _mm256_add_pd(_mm256_set1_pd(static_cast<double>(j)), lane);
    const __m256d d = _mm256_fmadd_pd(idx, vstep, vbase);
    const __m256d arg = _mm256_mul_pd(_mm256_mul_pd(d, d), vneg);
    const __m256d keep = _mm256_cmp_pd(arg, floor_arg, _CMP_GE_OQ);
    const __m256d value = _mm256_and_pd(exp_nonpositive(_mm256_max_pd(arg, floor_arg)), keep);
    _mm256_storeu_pd(density + j, _mm256_add_pd(_mm256_loadu_pd(density + j), value));
  }
  scalar_kernels().gaussian_accumulate(start, step, j, last, center, inv_two_var, density);
}

void repulsion(const double* xs, const double* ys, std::size_t count, std::size_t i, double k_sq,
               double min_sq, double* fx, double* fy) {
  const __m256d xi = _mm256_set1_pd(xs[i]);
  const __m256d yi = _mm256_set1_pd(ys[i]);
  const __m256d vk = _mm256_set1_pd(k_sq);
  const __m256d vmin = _mm256_set1_pd(min_sq);
  __m256d sx = _mm256_setzero_pd();
  __m256d sy = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + kLanes <= count; j += kLanes) {
    const __m256d dx = _mm256_sub_pd(xi, _mm256_loadu_pd(xs + j));
    const __m256d dy = _mm256_sub_pd(yi, _mm256_loadu_pd(ys + j));
    const __m256d d2 = _mm256_max_pd(_mm256_fmadd_pd(dy, dy, _mm256_mul_pd(dx, dx)), vmin);
    const __m256d s = _mm256_div_pd(vk, d2);
    sx = _mm256_fmadd_pd(dx, s, sx);
    sy = _mm256_fmadd_pd(dy, s, sy);
  }
  double tx = horizontal_sum(sx);
  double ty = horizontal_sum(sy);
  for (; j < count; ++j) {
    const double dx = xs[i] - xs[j];
    const double dy = ys[i] - ys[j];
    double d2 = dx * dx + dy * dy;
    if (d2 < min_sq) d2 = min_sq;
    tx += dx * k_sq / d2;
    ty += dy * k_sq / d2;
  }
  *fx = tx;
  *fy = ty;
}

void stress_moments(const double* dgamma, const std::uint16_t* dgraph, std::size_t count,
                    double* a, double* b) {
  __m256d va = _mm256_setzero_pd();
  __m256d vb = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + kLanes <= count; j += kLanes) {
    const __m256d ratio = _mm256_div_pd(_mm256_loadu_pd(dgamma + j), load_hops(dgraph + j));
    va = _mm256_fmadd_pd(ratio, ratio, va);
    vb = _mm256_add_pd(vb, ratio);
  }
  double ta = horizontal_sum(va);
  double tb = horizontal_sum(vb);
  scalar_kernels().stress_moments(dgamma + j, dgraph + j, count - j, &ta, &tb);
  *a += ta;
  *b += tb;
}

// Sums over j in [begin, end), which must not contain the pivot vertex.
void majorization_span(const double* xs, const double* ys, const std::uint16_t* dgraph,
                       std::size_t begin, std::size_t end, double xi, double yi, __m256d& ax,
                       __m256d& ay, __m256d& aw, double& tx, double& ty, double& tw) {
  const __m256d vxi = _mm256_set1_pd(xi);
  const __m256d vyi = _mm256_set1_pd(yi);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t j = begin;
  for (; j + kLanes <= end; j += kLanes) {
    const __m256d xj = _mm256_loadu_pd(xs + j);
    const __m256d yj = _mm256_loadu_pd(ys + j);
    const __m256d d = load_hops(dgraph + j);
    const __m256d w = _mm256_div_pd(one, _mm256_mul_pd(d, d));
    const __m256d dx = _mm256_sub_pd(vxi, xj);
    const __m256d dy = _mm256_sub_pd(vyi, yj);
    const __m256d len = _mm256_sqrt_pd(_mm256_fmadd_pd(dy, dy, _mm256_mul_pd(dx, dx)));
    const __m256d positive = _mm256_cmp_pd(len, zero, _CMP_GT_OQ);
    const __m256d pull = _mm256_and_pd(_mm256_div_pd(d, len), positive);
    ax = _mm256_fmadd_pd(w, _mm256_fmadd_pd(pull, dx, xj), ax);
    ay = _mm256_fmadd_pd(w, _mm256_fmadd_pd(pull, dy, yj), ay);
    aw = _mm256_add_pd(aw, w);
  }
  for (; j < end; ++j) {
    const double d = static_cast<double>(dgraph[j]);
    const double w = 1.0 / (d * d);
    const double dx = xi - xs[j];
    const double dy = yi - ys[j];
    const double len = std::sqrt(dx * dx + dy * dy);
    const double pull = len > 0.0 ? d / len : 0.0;
    tx += w * (xs[j] + pull * dx);
    ty += w * (ys[j] + pull * dy);
    tw += w;
  }
}

void majorization_row(const double* xs, const double* ys, const std::uint16_t* dgraph,
                      std::size_t count, std::size_t i, double* sx, double* sy, double* wsum) {
  __m256d ax = _mm256_setzero_pd();
  __m256d ay = _mm256_setzero_pd();
  __m256d aw = _mm256_setzero_pd();
  double tx = 0.0;
  double ty = 0.0;
  double tw = 0.0;
  majorization_span(xs, ys, dgraph, 0, i, xs[i], ys[i], ax, ay, aw, tx, ty, tw);
  majorization_span(xs, ys, dgraph, i + 1, count, xs[i], ys[i], ax, ay, aw, tx, ty, tw);
  *sx = horizontal_sum(ax) + tx;
  *sy = horizontal_sum(ay) + ty;
  *wsum = horizontal_sum(aw) + tw;
}

bool cpu_has_avx2() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const bool supported = cpu_has_avx2();
  static const KernelTable table{Isa::kAvx2,     &distances_from, &gaussian_accumulate,
                                 &repulsion,     &stress_moments, &majorization_row};
  return supported ? &table : nullptr;
}

}  // namespace layoutjudge::simd

#else

namespace layoutjudge::simd {
const KernelTable* avx2_kernels() { return nullptr; }
}  // namespace layoutjudge::simd

#endif
