#include <algorithm>
#include <cmath>

#include "layoutjudge/simd/kernels.hpp"

namespace layoutjudge::simd {
namespace {

void distances_from(const double* xs, const double* ys, std::size_t count, double x, double y,
                    double* out) {
  for (std::size_t j = 0; j < count; ++j) {
    const double dx = xs[j] - x;
    const double dy = ys[j] - y;
    out[j] = std::sqrt(dx * dx + dy * dy);
  }
}

void gaussian_accumulate(double start, double step, std::size_t first, std::size_t last,
                         double center, double inv_two_var, double* density) {
  for (std::size_t j = first; j < last; ++j) {
    const double d = start + static_cast<double>(j) * step - center;
    const double arg = -d * d * inv_two_var;
    density[j] += arg < -700.0 ? 0.0 : std::exp(arg);
  }
}

void repulsion(const double* xs, const double* ys, std::size_t count, std::size_t i, double k_sq,
               double min_sq, double* fx, double* fy) {
  double sx = 0.0;
  double sy = 0.0;
  const double xi = xs[i];
  const double yi = ys[i];
  for (std::size_t j = 0; j < count; ++j) {
    const double dx = xi - xs[j];
    const double dy = yi - ys[j];
    const double d2 = std::max(dx * dx + dy * dy, min_sq);
    const double s = k_sq / d2;
    sx += dx * s;
    sy += dy * s;
  }
  *fx = sx;
  *fy = sy;
}

void stress_moments(const double* dgamma, const std::uint16_t* dgraph, std::size_t count,
                    double* a, double* b) {
  double sa = 0.0;
  double sb = 0.0;
  for (std::size_t j = 0; j < count; ++j) {
    const double ratio = dgamma[j] / static_cast<double>(dgraph[j]);
    sa += ratio * ratio;
    sb += ratio;
  }
  *a += sa;
  *b += sb;
}

void majorization_row(const double* xs, const double* ys, const std::uint16_t* dgraph,
                      std::size_t count, std::size_t i, double* sx, double* sy, double* wsum) {
  double ax = 0.0;
  double ay = 0.0;
  double aw = 0.0;
  const double xi = xs[i];
  const double yi = ys[i];
  for (std::size_t j = 0; j < count; ++j) {
    if (j == i) continue;
    const double d = static_cast<double>(dgraph[j]);
    const double w = 1.0 / (d * d);
    const double dx = xi - xs[j];
    const double dy = yi - ys[j];
    const double len = std::sqrt(dx * dx + dy * dy);
    const double pull = len > 0.0 ? d / len : 0.0;
    ax += w * (xs[j] + pull * dx);
    ay += w * (ys[j] + pull * dy);
    aw += w;
  }
  *sx = ax;
  *sy = ay;
  *wsum = aw;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::kScalar,     &distances_from, &gaussian_accumulate,
                                 &repulsion,       &stress_moments, &majorization_row};
  return table;
}

}  // namespace layoutjudge::simd
