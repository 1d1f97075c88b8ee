#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ffprog/function.hpp"
#include "ffprog/poly.hpp"

namespace ffprog {

/// E_{x,y} f_0(x) prod_i f_i(x + P_i(y)) prod_j g_j(Q_j(y)) for arbitrary
/// polynomial lists (P may be empty). Polynomial values are tabulated once,
/// so the double loop is pure table lookups. Per-y partial sums are combined
/// pairwise in index order; `jobs` only changes who computes them.
Complex lambda_average_polys(const FieldSpec& field, std::span<const IntPoly> P,
                             std::span<const DenseFunction> F, std::span<const IntPoly> Q,
                             std::span<const DenseFunction> G, unsigned jobs = 1);

/// The counting operator of a progression system. F has m1+1 entries and G
/// has m2. Throws ArityMismatch, FieldMismatch.
Complex lambda_average(const ProgressionSystem& system, std::span<const DenseFunction> F,
                       std::span<const DenseFunction> G, unsigned jobs = 1);

/// Characters psi_{a_1}, ..., psi_{a_n} as functions.
std::vector<DenseFunction> characters(const FieldSpec& field, std::span<const std::uint64_t> indices);

enum class YRule { All, Nonzero };

/// #{(x, y) : x, x+P_1(y), ..., x+P_m(y) in A}, with y = 0 excluded under
/// YRule::Nonzero. Exact integer arithmetic. Throws TwistedSystem if Q is
/// nonempty and ElementOutOfField for bad indices.
std::uint64_t count_progressions(const ProgressionSystem& system, const FieldSpec& field,
                                 std::span<const std::uint64_t> A, YRule rule);

struct LambdaResult {
  Complex value;
  Complex main_term;
  Complex error;         // value - main_term
  std::uint64_t q = 0;
  Complex scaled_error;  // q^2 * error, the count-form deviation
  bool below_threshold = false;  // independent system, p below its threshold
};

/// Lambda(1_A, ..., 1_A; Psi) against the main term 1_{Psi=1} (|A|/q)^{m1+1}.
/// Psi defaults to all-trivial characters.
LambdaResult main_term_error(const ProgressionSystem& system, const FieldSpec& field,
                             std::span<const std::uint64_t> A, std::span<const std::uint64_t> psi = {});

/// Lambda(F; Psi) against 1_{Psi=1} prod_i E f_i.
LambdaResult lambda_report(const ProgressionSystem& system, std::span<const DenseFunction> F,
                           std::span<const std::uint64_t> psi);

struct RewriteCheck {
  Complex lhs;
  Complex rhs;
  double max_abs_diff = 0.0;
};

/// Checks the change-of-variables identities for Lambda_P^Q(F; Psi).
///
/// k = 0: the twist is absorbed into f_0 (system P u Q, f_0 prod conj psi_j)
///        and, separately, into f_{m1} (system P u {Q_j + P_{m1}}); rhs is the
///        first form and max_abs_diff covers both.
/// k >= 1: x -> x - P_k(y). f_0 is expanded in characters; the psi_a
///        component becomes Lambda_R^{Q, P_k}(psi_a f_k, ...; Psi, conj psi_a)
///        with R_i = P_i - P_k (i < k), P_{i+1} - P_k (i >= k).
/// Throws IndexOutOfRange for k > m1, ArityMismatch on list lengths.
RewriteCheck twist_rewrite_check(const ProgressionSystem& system, std::span<const DenseFunction> F,
                                 std::span<const std::uint64_t> psi, std::size_t k);

/// The single-character form of the shift: with f_0 = conj(psi_b),
///   Lambda_P^Q(conj psi_b, f_1..f_{m1}; Psi)
///     = Lambda_R^{Q, P_k}(conj(psi_b) f_k, f_i (i != k); Psi, psi_b).
/// F_rest holds f_1..f_{m1}. For P = (y, y^2) and k = 1 this reads
/// ghat(psi) = Lambda_{P2-P1}^{P1}(conj(psi) f_1, f_2; psi).
RewriteCheck character_shift_check(const ProgressionSystem& system, std::span<const DenseFunction> F_rest,
                                   std::span<const std::uint64_t> psi, std::uint64_t b, std::size_t k);

struct BaseCaseReport {
  Complex value;
  Complex main_term;
  Complex error;
  double scaled_error = 0.0;  // |error| * sqrt(q)
  bool below_threshold = false;
};

/// Lambda_{P1}^{Q}((f0, f1); Psi) against 1_{Psi=1} E f0 E f1.
/// Throws DependentSystem (and the other ProgressionSystem errors).
BaseCaseReport base_case_report(const IntPoly& P1, std::span<const IntPoly> Qs,
                                std::span<const DenseFunction> F, std::span<const std::uint64_t> psi);

struct WeilSumReport {
  Complex value;              // E_y prod_i psi_{a_i}(P_i(y))
  double bound = 0.0;         // (d-1) q^{-1/2}; 0 when all characters are trivial
  int combined_degree = 0;    // degree of sum_i a_i P_i over F_q
  bool all_trivial = false;
  bool within_bound = true;
};

/// Throws CharacteristicTooSmall when p <= max degree, DegenerateCombination
/// when the combined polynomial is constant although some a_i != 0, and
/// ArityMismatch on list lengths.
WeilSumReport weil_sum(const FieldSpec& field, std::span<const IntPoly> polys,
                       std::span<const std::uint64_t> char_indices);

}  // namespace ffprog
