#pragma once

#include <functional>
#include <span>
#include <vector>

namespace layoutjudge {

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
};

/// Downhill simplex minimization with the standard coefficients (reflection 1,
/// expansion 2, contraction 1/2, shrink 1/2). The initial simplex is x0 plus
/// step along each axis. Stops after max_iterations or when the simplex values
/// agree to within tolerance.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, double step, int max_iterations,
                             double tolerance = 0.0);

}  // namespace layoutjudge
