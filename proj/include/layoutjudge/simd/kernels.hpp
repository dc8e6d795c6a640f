#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Data-parallel inner loops shared by the layout engine, syndromes, features
// and baselines. Each kernel has a scalar reference implementation and an
// AVX2+FMA variant; the table is chosen once at startup from CPUID.
// LAYOUTJUDGE_SIMD=scalar forces the reference path.
//
// The variants agree to within rounding, not bit-for-bit: reductions are
// reassociated across lanes and the vector exp is a polynomial. Within a
// single process the same table is always used, so results are reproducible
// run to run on a given machine.

namespace layoutjudge::simd {

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;

  /// out[j] = |(xs[j], ys[j]) - (x, y)| for j in [0, count).
  void (*distances_from)(const double* xs, const double* ys, std::size_t count, double x,
                         double y, double* out);

  /// density[j] += exp(-(start + j*step - center)^2 * inv_two_var) for j in
  /// [first, last). Arguments below -700 are flushed to zero.
  void (*gaussian_accumulate)(double start, double step, std::size_t first, std::size_t last,
                              double center, double inv_two_var, double* density);

  /// Fruchterman-Reingold repulsion on vertex i from every other vertex:
  /// (fx, fy) = sum_j (p_i - p_j) * k_sq / max(|p_i - p_j|^2, min_sq).
  void (*repulsion)(const double* xs, const double* ys, std::size_t count, std::size_t i,
                    double k_sq, double min_sq, double* fx, double* fy);

  /// Stress moments of one row against hop distances:
  /// a += sum_j dgamma[j]^2 / dgraph[j]^2,  b += sum_j dgamma[j] / dgraph[j].
  /// All dgraph entries must be >= 1.
  void (*stress_moments)(const double* dgamma, const std::uint16_t* dgraph, std::size_t count,
                         double* a, double* b);

  /// Localized stress-majorization target for vertex i with weights 1/d^2:
  /// (sx, sy) = sum_{j != i} w_ij * (p_j + d_ij * (p_i - p_j) / |p_i - p_j|),
  /// wsum = sum_{j != i} w_ij. Coincident pairs contribute w_ij * p_j.
  void (*majorization_row)(const double* xs, const double* ys, const std::uint16_t* dgraph,
                           std::size_t count, std::size_t i, double* sx, double* sy,
                           double* wsum);
};

const KernelTable& scalar_kernels();

/// nullptr when the binary was built without AVX2 support or the CPU lacks it.
const KernelTable* avx2_kernels();

/// The table selected for this process.
const KernelTable& kernels();

}  // namespace layoutjudge::simd
