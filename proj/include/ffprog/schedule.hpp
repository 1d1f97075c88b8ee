#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ffprog/poly.hpp"
#include "json.hpp"

namespace ffprog {

/// Exact value of "3", "-1/3", "0.125" or "1e-3". Throws SyntaxError.
Rational parse_rational(std::string_view text);
/// Exact dyadic value of a finite double. Throws InvalidRange for inf/NaN.
Rational rational_from_double(double x);
double to_double(const Rational& r);
std::string to_string(const Rational& r);
/// 2^e for any integer e.
Rational pow2(int e);

/// The four step sizes used when passing from a U^l bound to a U^{l-1} bound.
struct LevelDeltas {
  Rational d1, d2, d3, d4;
};

/// s >= 2, beta in (0,1], gamma > 0 and the per-level deltas for l = 2..s.
struct ScheduleParams {
  int s = 2;
  Rational beta;
  Rational gamma;
  std::map<int, LevelDeltas> levels;

  /// k in 1..4, ell in 2..s. Throws IndexOutOfRange.
  const Rational& delta(int k, int ell) const;
  /// d2 < d3, d4 < d1 and every delta positive at every level.
  bool well_formed() const;
};

/// d1 = 2^{1-2 s l} gamma beta,   d2 = 2^{2l-4s^2} gamma beta^2,
/// d3 = 2^{1+2l-4s^2} gamma beta^2, d4 = 2^{-2 s l} gamma beta.
/// Throws InvalidRange unless s >= 2, 0 < beta <= 1, gamma > 0.
ScheduleParams delta_schedule(int s, const Rational& beta, const Rational& gamma);

struct BudgetCheck {
  double lhs = 0.0;
  bool ok = false;
};

/// lhs = q^{d2-d3} + q^{d4-d1}; ok iff lhs <= 1/2. Evaluated in log space so
/// q may be astronomically large. Throws InvalidRange for q <= 1.
BudgetCheck budget_condition(const LevelDeltas& d, double q);
BudgetCheck budget_condition_log(const LevelDeltas& d, double log_q);

/// A bound  |Lambda| <= b1 min_i ||f_i||_{U^ell}^{b2} + b3.
struct BoundState {
  int ell = 0;
  double b1 = 1.0;
  double b2 = 1.0;
  double b3 = 0.0;
  double q = 0.0;
};

struct BoundTrajectory {
  std::vector<BoundState> states;  // ell = s, s-1, ..., 1
  double final_coeff = 0.0;        // 2 q^{d1 at level 2}
  double u1_exponent = 0.5;
  double b3_final = 0.0;
  /// The unspecified implied constants of each step are taken to be 1.
  bool implied_constants_dropped = true;
};

/// Starting state b1 = 1, b2 = beta, b3 = q^{-beta} at ell = s.
BoundState initial_bound_state(const ScheduleParams& params, double q);

/// One step ell -> ell-1 per level:
///   b1' = 2 q^{d1},  b2' = 2^{1-ell},
///   b3' = q^{d1} (c2' q^{-gamma'})^{2^{2-2 ell}} + q^{-d2} + q^{(1-b2) d3 - b2 d4} b1 + q^{d3} b3.
/// gamma' = +inf suppresses the first term. Throws InvalidInit unless
/// init.ell == s, init.b1 == 1, init.b2 == beta and init.b3 >= 0.
BoundTrajectory bound_recursion(const ScheduleParams& params, const BoundState& init, double q,
                                double gamma_prime, double c2_prime);

struct ExponentCheck {
  int family = 0;  // 1..5
  int j = 0;
  Rational value;
  Rational ceiling;
  bool negative = false;
  bool below_ceiling = false;
};

struct ExponentReport {
  std::vector<ExponentCheck> checks;
  bool all_pass = true;
};

/// Evaluates the five exponent families of the unrolled b3 bound exactly and
/// compares each against its stated negative ceiling (strict inequalities):
///   1: -beta + sum_{i=0}^{s-2} d3^{(s-i)}                  < -beta (1 - 2^-10)
///   2: (1-beta) d3^{(s)} - beta d4^{(s)} + sum_{i>=1} d3     < -gamma beta^2 2^{-2s^2} (7/8)
///   3: j = 1..s-2                                             < -gamma beta 2^{-2s^2}
///   4: j = 0..s-2,  -d2^{(s-j)} + tail                        < -gamma beta^2 2^{4-4s^2} / 3
///   5: j = 0..s-2,  d1^{(s-j)} - 2^{2-2(s-j)} gamma + tail    < -gamma 2^{2-2s} (15/16)
/// where tail = sum_{i=j+1}^{s-2} d3^{(s-i)}.
ExponentReport exponent_negativity(const ScheduleParams& params);

/// The five inequalities a single-level choice must satisfy in the (y, y^2)
/// example: d2 < d3, d4 < d1, d1 < 1/4, 3 d3/4 < d4/4, d3 < 1/4, all positive.
bool example_constraints_hold(const LevelDeltas& d);
/// max(d1 - 1/4, -d2, 3 d3/4 - d4/4, d3 - 1/4): the resulting power of q.
Rational example_error_exponent(const LevelDeltas& d);

struct ScheduleReportOptions {
  std::optional<double> q;
  double gamma_prime = 0.0;  // 0 means: use gamma
  double c2_prime = 1.0;
};

/// {s, beta, gamma, deltas:[..], exponents:[..], all_negative, final_bound?}
nlohmann::json schedule_report(const ScheduleParams& params, const ScheduleReportOptions& options = {});

}  // namespace ffprog
