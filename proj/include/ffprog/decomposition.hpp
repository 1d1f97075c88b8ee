#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ffprog/function.hpp"
#include "ffprog/schedule.hpp"
#include "json.hpp"

namespace ffprog {

/// Targets for f = fa + fb + fc:
///   ||fa||* <= q^{d1}, ||fb||_1 <= q^{-d2}, ||fc||_inf <= q^{d3}, ||fc||_{U^s} <= q^{-d4}.
struct DecompositionBudget {
  double d1 = 0.0, d2 = 0.0, d3 = 0.0, d4 = 0.0;
  int s = 2;
};

enum class DecompositionStatus { Certified, Partial, Failed };
const char* to_string(DecompositionStatus s);

struct DecompositionCerts {
  double dual_bound_used = 0.0;  // upper bound on ||fa||*; NaN if unavailable
  double l1_fb = 0.0;
  double linf_fc = 0.0;
  double norm_fc = 0.0;          // ||fc||_{U^s}
  double sum_residual = 0.0;     // max |f - fa - fb - fc|
};

struct DecompositionResult {
  DenseFunction fa, fb, fc;
  DecompositionCerts certs;
  DecompositionStatus status = DecompositionStatus::Failed;
  std::optional<double> tau;           // threshold used by the producer
  std::vector<std::string> diagnostics;  // violated bounds
  std::vector<std::string> warnings;     // unmet hypotheses
};

inline constexpr double kSumIdentityTolerance = 1e-10;

/// Recomputes every bound. For s = 2 the dual norm is bounded by the sum of
/// |fa^|; for s > 2 a caller-certified bound is required, and without one the
/// result is at best Partial. ||f||_2 > 1 and a failing budget condition are
/// reported as warnings. Throws ShapeMismatch, FieldMismatch.
DecompositionResult verify_decomposition(const DenseFunction& f, const DenseFunction& fa, const DenseFunction& fb,
                                         const DenseFunction& fc, const DecompositionBudget& budget, double q,
                                         std::optional<double> dual_certificate = std::nullopt);

/// fa keeps the Fourier modes with |f^| >= tau, fc = f - fa, fb = 0. tau runs
/// over 2^0, 2^-1, ..., down to the first power at or below 1/q; the smallest
/// certified tau is returned, and the tau = 1 candidate (marked Failed) when
/// none certifies. Throws NotL2Normalized for ||f||_2 > 1 + 1e-12 and
/// InvalidRange for s != 2.
DecompositionResult u2_threshold_decompose(const DenseFunction& f, const DecompositionBudget& budget, double q);

/// Level-ell deltas of a schedule with s = ell. Throws IndexOutOfRange.
DecompositionBudget decomposition_budget_from_schedule(const ScheduleParams& params, int ell);

nlohmann::json to_json(const DecompositionResult& r);

}  // namespace ffprog
