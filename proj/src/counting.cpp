#include "ffprog/counting.hpp"

#include <algorithm>
#include <cmath>

#include "ffprog/error.hpp"
#include "ffprog/numeric.hpp"

namespace ffprog {

namespace {

void require_field(const FieldSpec& field, std::span<const DenseFunction> fs) {
  for (const auto& f : fs) {
    if (!(f.field() == field)) throw Error(ErrorKind::FieldMismatch, "function over a different field");
  }
}

bool all_trivial(std::span<const std::uint64_t> psi) {
  return std::all_of(psi.begin(), psi.end(), [](std::uint64_t a) { return a == 0; });
}

void check_indices(const FieldSpec& field, std::span<const std::uint64_t> idx, const char* what) {
  for (auto a : idx) {
    if (a >= field.q()) throw Error(ErrorKind::ElementOutOfField, std::string(what) + " index outside the field");
  }
}

}  // namespace

Complex lambda_average_polys(const FieldSpec& field, std::span<const IntPoly> P,
                             std::span<const DenseFunction> F, std::span<const IntPoly> Q,
                             std::span<const DenseFunction> G, unsigned jobs) {
  if (F.size() != P.size() + 1) throw Error(ErrorKind::ArityMismatch, "need one function per P_i plus f_0");
  if (G.size() != Q.size()) throw Error(ErrorKind::ArityMismatch, "need one function per Q_j");
  require_field(field, F);
  require_field(field, G);

  const std::uint64_t q = field.q();
  const bool prime = field.k() == 1;
  std::vector<std::vector<std::uint64_t>> ptab, qtab;
  for (const auto& p : P) ptab.push_back(evaluation_table(p, field));
  for (const auto& g : Q) qtab.push_back(evaluation_table(g, field));

  std::vector<Complex> per_y(q);
  parallel_for(q, jobs, [&](std::size_t y) {
    Complex weight = 1.0;
    for (std::size_t j = 0; j < G.size(); ++j) weight *= G[j][qtab[j][y]];
    if (weight == Complex(0.0)) {
      per_y[y] = 0.0;
      return;
    }
    std::vector<Complex> row(F[0].values().begin(), F[0].values().end());
    for (std::size_t i = 0; i < P.size(); ++i) {
      const auto vals = F[i + 1].values();
      const std::uint64_t t = ptab[i][y];
      if (prime) {
        for (std::uint64_t x = 0; x < q; ++x) {
          std::uint64_t u = x + t;
          if (u >= q) u -= q;
          row[x] *= vals[u];
        }
      } else {
        for (std::uint64_t x = 0; x < q; ++x) row[x] *= vals[field.add_index(x, t)];
      }
    }
    per_y[y] = weight * pairwise_sum(std::span<const Complex>(row));
  });
  const double qd = static_cast<double>(q);
  return pairwise_sum(std::span<const Complex>(per_y)) / (qd * qd);
}

Complex lambda_average(const ProgressionSystem& system, std::span<const DenseFunction> F,
                       std::span<const DenseFunction> G, unsigned jobs) {
  if (F.empty()) throw Error(ErrorKind::ArityMismatch, "no functions given");
  return lambda_average_polys(F[0].field(), system.P(), F, system.Q(), G, jobs);
}

std::vector<DenseFunction> characters(const FieldSpec& field, std::span<const std::uint64_t> indices) {
  check_indices(field, indices, "character");
  std::vector<DenseFunction> out;
  out.reserve(indices.size());
  for (auto a : indices) out.push_back(DenseFunction::character(field, a));
  return out;
}

std::uint64_t count_progressions(const ProgressionSystem& system, const FieldSpec& field,
                                 std::span<const std::uint64_t> A, YRule rule) {
  if (system.m2() != 0) throw Error(ErrorKind::TwistedSystem, "counting needs an untwisted system");
  check_indices(field, A, "set");
  const std::uint64_t q = field.q();
  std::vector<char> member(q, 0);
  for (auto a : A) member[a] = 1;
  std::vector<std::uint64_t> elems;
  for (std::uint64_t x = 0; x < q; ++x)
    if (member[x]) elems.push_back(x);

  std::vector<std::vector<std::uint64_t>> ptab;
  for (const auto& p : system.P()) ptab.push_back(evaluation_table(p, field));

  std::uint64_t total = 0;
  for (std::uint64_t y = (rule == YRule::Nonzero ? 1 : 0); y < q; ++y) {
    for (auto x : elems) {
      bool ok = true;
      for (const auto& tab : ptab) {
        if (!member[field.add_index(x, tab[y])]) {
          ok = false;
          break;
        }
      }
      total += ok ? 1 : 0;
    }
  }
  return total;
}

LambdaResult lambda_report(const ProgressionSystem& system, std::span<const DenseFunction> F,
                           std::span<const std::uint64_t> psi) {
  if (F.empty()) throw Error(ErrorKind::ArityMismatch, "no functions given");
  const FieldSpec& field = F[0].field();
  if (psi.size() != system.m2()) throw Error(ErrorKind::ArityMismatch, "need one character per Q_j");
  const auto G = characters(field, psi);
  LambdaResult r;
  r.q = field.q();
  r.value = lambda_average(system, F, G);
  r.main_term = 0.0;
  if (all_trivial(psi)) {
    r.main_term = 1.0;
    for (const auto& f : F) r.main_term *= f.mean();
  }
  r.error = r.value - r.main_term;
  const double qd = static_cast<double>(r.q);
  r.scaled_error = qd * qd * r.error;
  r.below_threshold = system.independent() && !system.admits_characteristic(field.p());
  return r;
}

LambdaResult main_term_error(const ProgressionSystem& system, const FieldSpec& field,
                             std::span<const std::uint64_t> A, std::span<const std::uint64_t> psi) {
  std::vector<std::uint64_t> trivial;
  if (psi.empty() && system.m2() != 0) {
    trivial.assign(system.m2(), 0);
    psi = trivial;
  }
  const auto ind = indicator_of_indices(field, A);
  std::vector<DenseFunction> F(system.m1() + 1, ind);
  return lambda_report(system, F, psi);
}

namespace {

// R_i = P_i - P_k for i < k and P_{i+1} - P_k for i >= k (k is 1-based).
std::vector<IntPoly> shifted_polys(const std::vector<IntPoly>& P, std::size_t k) {
  std::vector<IntPoly> R;
  for (std::size_t i = 1; i <= P.size(); ++i)
    if (i != k) R.push_back(P[i - 1] - P[k - 1]);
  return R;
}

}  // namespace

RewriteCheck twist_rewrite_check(const ProgressionSystem& system, std::span<const DenseFunction> F,
                                 std::span<const std::uint64_t> psi, std::size_t k) {
  if (k > system.m1()) throw Error(ErrorKind::IndexOutOfRange, "k exceeds the number of P polynomials");
  if (F.size() != system.m1() + 1) throw Error(ErrorKind::ArityMismatch, "need m1 + 1 functions");
  if (psi.size() != system.m2()) throw Error(ErrorKind::ArityMismatch, "need one character per Q_j");
  const FieldSpec& field = F[0].field();
  require_field(field, F);
  const auto G = characters(field, psi);

  RewriteCheck out;
  out.lhs = lambda_average(system, F, G);

  const auto& P = system.P();
  const auto& Q = system.Q();
  if (k == 0) {
    // Twist absorbed into f_0.
    std::vector<IntPoly> PQ = P;
    PQ.insert(PQ.end(), Q.begin(), Q.end());
    std::vector<DenseFunction> F0(F.begin(), F.end());
    DenseFunction twisted0 = F[0];
    for (const auto& g : G) twisted0 = twisted0 * g.conj();
    F0[0] = twisted0;
    for (const auto& g : G) F0.push_back(g);
    out.rhs = lambda_average_polys(field, PQ, F0, {}, {});

    // Twist absorbed into f_{m1}.
    std::vector<IntPoly> PQ2 = P;
    for (const auto& g : Q) PQ2.push_back(g + P.back());
    std::vector<DenseFunction> F2(F.begin(), F.end());
    DenseFunction twisted_last = F.back();
    for (const auto& g : G) twisted_last = twisted_last * g.conj();
    F2.back() = twisted_last;
    for (const auto& g : G) F2.push_back(g);
    const Complex rhs2 = lambda_average_polys(field, PQ2, F2, {}, {});
    out.max_abs_diff = std::max(std::abs(out.lhs - out.rhs), std::abs(out.lhs - rhs2));
    return out;
  }

  const auto R = shifted_polys(P, k);
  std::vector<IntPoly> S = Q;
  S.push_back(P[k - 1]);
  const auto coeffs = fourier_transform(F[0]).coeffs;
  std::vector<Complex> terms(field.q());
  for (std::uint64_t a = 0; a < field.q(); ++a) {
    const auto chi = DenseFunction::character(field, a);
    std::vector<DenseFunction> Fr;
    Fr.push_back(chi * F[k]);
    for (std::size_t i = 1; i <= system.m1(); ++i)
      if (i != k) Fr.push_back(F[i]);
    std::vector<DenseFunction> Gr(G.begin(), G.end());
    Gr.push_back(chi.conj());
    terms[a] = coeffs[a] * lambda_average_polys(field, R, Fr, S, Gr);
  }
  out.rhs = pairwise_sum(std::span<const Complex>(terms));
  out.max_abs_diff = std::abs(out.lhs - out.rhs);
  return out;
}

RewriteCheck character_shift_check(const ProgressionSystem& system, std::span<const DenseFunction> F_rest,
                                   std::span<const std::uint64_t> psi, std::uint64_t b, std::size_t k) {
  if (k == 0 || k > system.m1()) throw Error(ErrorKind::IndexOutOfRange, "k must lie in [1, m1]");
  if (F_rest.size() != system.m1()) throw Error(ErrorKind::ArityMismatch, "need m1 functions");
  if (psi.size() != system.m2()) throw Error(ErrorKind::ArityMismatch, "need one character per Q_j");
  const FieldSpec& field = F_rest[0].field();
  require_field(field, F_rest);
  if (b >= field.q()) throw Error(ErrorKind::ElementOutOfField, "character index outside the field");
  const auto G = characters(field, psi);
  const auto chi_bar = DenseFunction::character(field, b).conj();

  std::vector<DenseFunction> F{chi_bar};
  F.insert(F.end(), F_rest.begin(), F_rest.end());
  RewriteCheck out;
  out.lhs = lambda_average(system, F, G);

  std::vector<DenseFunction> Fr{chi_bar * F_rest[k - 1]};
  for (std::size_t i = 1; i <= system.m1(); ++i)
    if (i != k) Fr.push_back(F_rest[i - 1]);
  std::vector<IntPoly> S = system.Q();
  S.push_back(system.P()[k - 1]);
  std::vector<DenseFunction> Gr(G.begin(), G.end());
  Gr.push_back(DenseFunction::character(field, b));
  out.rhs = lambda_average_polys(field, shifted_polys(system.P(), k), Fr, S, Gr);
  out.max_abs_diff = std::abs(out.lhs - out.rhs);
  return out;
}

BaseCaseReport base_case_report(const IntPoly& P1, std::span<const IntPoly> Qs,
                                std::span<const DenseFunction> F, std::span<const std::uint64_t> psi) {
  const ProgressionSystem system({P1}, std::vector<IntPoly>(Qs.begin(), Qs.end()));
  if (F.size() != 2) throw Error(ErrorKind::ArityMismatch, "base case takes exactly two functions");
  const auto r = lambda_report(system, F, psi);
  BaseCaseReport out;
  out.value = r.value;
  out.main_term = r.main_term;
  out.error = r.error;
  out.scaled_error = std::abs(r.error) * std::sqrt(static_cast<double>(r.q));
  out.below_threshold = r.below_threshold;
  return out;
}

WeilSumReport weil_sum(const FieldSpec& field, std::span<const IntPoly> polys,
                       std::span<const std::uint64_t> char_indices) {
  if (polys.size() != char_indices.size()) throw Error(ErrorKind::ArityMismatch, "one character per polynomial");
  check_indices(field, char_indices, "character");
  int max_deg = 0;
  for (const auto& p : polys) max_deg = std::max(max_deg, p.degree());
  if (BigInt(field.p()) <= max_deg)
    throw Error(ErrorKind::CharacteristicTooSmall, "characteristic must exceed every degree");

  WeilSumReport out;
  out.all_trivial = all_trivial(char_indices);

  // Coefficients of sum_i a_i P_i in F_q, degree >= 1 only.
  std::vector<std::uint64_t> combined(static_cast<std::size_t>(max_deg) + 1, 0);
  for (std::size_t i = 0; i < polys.size(); ++i) {
    for (int d = 1; d <= polys[i].degree(); ++d) {
      const std::uint64_t c = reduce_mod(polys[i].coeff(d), field.p());
      combined[d] = field.add_index(combined[d], field.mul_index(char_indices[i], c));
    }
  }
  for (int d = max_deg; d >= 1; --d) {
    if (combined[d] != 0) {
      out.combined_degree = d;
      break;
    }
  }
  if (out.combined_degree == 0 && !out.all_trivial)
    throw Error(ErrorKind::DegenerateCombination, "the character combination is constant");

  const std::uint64_t q = field.q();
  std::vector<std::vector<std::uint64_t>> tabs;
  for (const auto& p : polys) tabs.push_back(evaluation_table(p, field));
  std::vector<Complex> vals(q);
  for (std::uint64_t y = 0; y < q; ++y) {
    Complex v = 1.0;
    for (std::size_t i = 0; i < polys.size(); ++i) v *= field.character_index(char_indices[i], tabs[i][y]);
    vals[y] = v;
  }
  out.value = pairwise_sum(std::span<const Complex>(vals)) / static_cast<double>(q);
  if (out.all_trivial) {
    out.bound = 0.0;
    out.within_bound = std::abs(out.value - 1.0) <= 1e-9;
  } else {
    out.bound = (out.combined_degree - 1) / std::sqrt(static_cast<double>(q));
    out.within_bound = std::abs(out.value) <= out.bound + 1e-12;
  }
  return out;
}

}  // namespace ffprog
