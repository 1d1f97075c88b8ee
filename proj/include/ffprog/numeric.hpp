#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ffprog {

using Complex = std::complex<double>;

/// Pairwise (cascade) summation in index order. The tree shape depends only on
/// the length, which pins the floating-point result.
Complex pairwise_sum(std::span<const Complex> values);
double pairwise_sum(std::span<const double> values);

/// Runs body(i) for i in [0, n) on up to `jobs` threads. Each index is visited
/// exactly once; callers write into per-index slots so the outcome does not
/// depend on scheduling.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body);

/// Worker count from FFPROG_JOBS, else hardware concurrency (at least 1).
unsigned default_jobs();

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;  // 0 for two points or a perfect fit
  std::vector<double> residuals;
};

/// Ordinary least squares y = slope * x + intercept. Throws InsufficientData
/// for fewer than two points or constant x, ShapeMismatch on length mismatch.
LineFit least_squares(std::span<const double> x, std::span<const double> y);

}  // namespace ffprog
