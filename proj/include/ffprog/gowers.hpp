#pragma once

#include <cstdint>
#include <span>

#include "ffprog/function.hpp"

namespace ffprog {

struct GowersNormValue {
  int s = 1;
  double value = 0.0;      // ||f||_{U^s}
  double raw_power = 0.0;  // ||f||_{U^s}^{2^s}, before clamping and the root
};

/// Scalar-operation ceiling for the exhaustive averages below.
inline constexpr double kDefaultGowersBudget = 1e9;

/// Exact average of Delta_{h_1..h_s} f(x) over all (x, h_1, ..., h_s).
/// Differenced functions are cached per h-prefix, so the cost is ~q^{s+1}.
/// Throws InvalidRange for s < 1, BudgetExceeded when q^{s+1} > budget, and
/// NumericalInconsistency if the average has a non-negligible imaginary part
/// or is negative beyond rounding.
GowersNormValue gowers_norm(const DenseFunction& f, int s, double budget = kDefaultGowersBudget);

/// ||f||_{U^2}^4 = sum_psi |f^(psi)|^4.
GowersNormValue gowers_u2_via_fourier(const DenseFunction& f);

/// sum_psi |f^(psi)|. Since |<f,g>| <= (sum |f^|) max |g^| <= (sum |f^|) ||g||_{U^2},
/// this bounds the U^2 dual norm from above.
double u2_dual_upper_bound(const DenseFunction& f);

/// F_{h_1..h_t}(x) = E_y prod_i Delta^{(1)}_{h_1..h_t} f_i(x, y).
/// Throws NotOneBounded, FieldMismatch, EmptyInput.
DenseFunction cs_project(std::span<const TwoVarFunction> fs, std::span<const std::uint64_t> hs);

struct CsInequalityReport {
  int s = 2;
  double lhs = 0.0;  // ||F||_{U^s}^{2^{2s-2}}
  double rhs = 0.0;  // E_{h_1..h_{s-2}} ||F_{h}||_{U^2}^4
  bool holds = false;
};

inline constexpr double kCsTolerance = 1e-9;

/// Compares both sides of the Cauchy-Schwarz reduction from U^s to an average
/// of U^2 norms of projections. Both sides use the exhaustive U^s average.
CsInequalityReport check_cs_inequality(std::span<const TwoVarFunction> fs, int s,
                                       double budget = kDefaultGowersBudget);

}  // namespace ffprog
