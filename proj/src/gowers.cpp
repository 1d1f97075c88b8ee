#include "ffprog/gowers.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "ffprog/error.hpp"
#include "ffprog/numeric.hpp"

namespace ffprog {

namespace {

// Sum over x and h_{depth+1..s} of Delta f; g already differenced by the prefix.
Complex sum_over_suffix(const DenseFunction& g, int remaining) {
  if (remaining == 0) return pairwise_sum(g.values());
  const std::uint64_t q = g.field().q();
  std::vector<Complex> partial(q);
  for (std::uint64_t h = 0; h < q; ++h) partial[h] = sum_over_suffix(delta(g, h), remaining - 1);
  return pairwise_sum(partial);
}

GowersNormValue make_value(int s, double raw) {
  const double clamped = raw < 0.0 ? 0.0 : raw;
  return {s, std::pow(clamped, 1.0 / std::ldexp(1.0, s)), raw};
}

}  // namespace

GowersNormValue gowers_norm(const DenseFunction& f, int s, double budget) {
  if (s < 1) throw Error(ErrorKind::InvalidRange, "Gowers norm index must be >= 1");
  const double q = static_cast<double>(f.field().q());
  if (std::pow(q, s + 1) > budget)
    throw Error(ErrorKind::BudgetExceeded, "q^(s+1) exceeds the budget for U^" + std::to_string(s));
  // E_{x,h} f(x+h) conj f(x) factors as |E f|^2; the root of the two-fold
  // average would amplify its rounding to ~1e-8.
  if (s == 1) {
    const double m = std::abs(f.mean());
    return GowersNormValue{1, m, m * m};
  }

  const Complex total = sum_over_suffix(f, s) / std::pow(q, s + 1);
  const double scale = std::max(1.0, std::pow(lp_norm(f, kInfinity), std::ldexp(1.0, s)));
  if (std::abs(total.imag()) > 1e-9 * scale || total.real() < -1e-9 * scale)
    throw Error(ErrorKind::NumericalInconsistency, "Gowers average is not a nonnegative real");
  return make_value(s, total.real());
}

GowersNormValue gowers_u2_via_fourier(const DenseFunction& f) {
  const auto hat = fourier_transform(f);
  std::vector<double> fourth(hat.coeffs.size());
  for (std::size_t a = 0; a < fourth.size(); ++a) {
    const double m2 = std::norm(hat.coeffs[a]);
    fourth[a] = m2 * m2;
  }
  return make_value(2, pairwise_sum(fourth));
}

double u2_dual_upper_bound(const DenseFunction& f) {
  const auto hat = fourier_transform(f);
  std::vector<double> mags(hat.coeffs.size());
  for (std::size_t a = 0; a < mags.size(); ++a) mags[a] = std::abs(hat.coeffs[a]);
  return pairwise_sum(mags);
}

DenseFunction cs_project(std::span<const TwoVarFunction> fs, std::span<const std::uint64_t> hs) {
  if (fs.empty()) throw Error(ErrorKind::EmptyInput, "cs_project needs at least one function");
  const FieldSpec& field = fs.front().field();
  const std::uint64_t q = field.q();
  std::vector<TwoVarFunction> diffed;
  diffed.reserve(fs.size());
  for (const auto& f : fs) {
    if (!(f.field() == field)) throw Error(ErrorKind::FieldMismatch, "cs_project inputs on different fields");
    if (!f.one_bounded()) throw Error(ErrorKind::NotOneBounded, "cs_project inputs must be 1-bounded");
    diffed.push_back(delta_first_var_indices(f, hs));
  }
  std::vector<Complex> out(q);
  std::vector<Complex> row(q);
  for (std::uint64_t x = 0; x < q; ++x) {
    for (std::uint64_t y = 0; y < q; ++y) {
      Complex prod = 1.0;
      for (const auto& g : diffed) prod *= g.at(x, y);
      row[y] = prod;
    }
    out[x] = pairwise_sum(row) / static_cast<double>(q);
  }
  return DenseFunction(field, std::move(out));
}

CsInequalityReport check_cs_inequality(std::span<const TwoVarFunction> fs, int s, double budget) {
  if (s < 2) throw Error(ErrorKind::InvalidRange, "Cauchy-Schwarz reduction needs s >= 2");
  if (fs.empty()) throw Error(ErrorKind::EmptyInput, "no functions");
  const double q = static_cast<double>(fs.front().field().q());
  const double projections = std::pow(q, s - 2);
  const double cost = std::pow(q, s + 1) + projections * (static_cast<double>(fs.size()) * q * q + q * q * q);
  if (cost > budget) throw Error(ErrorKind::BudgetExceeded, "Cauchy-Schwarz check exceeds budget");

  const DenseFunction F = cs_project(fs, {});
  const double raw = gowers_norm(F, s, budget).raw_power;
  CsInequalityReport report;
  report.s = s;
  report.lhs = std::pow(std::max(raw, 0.0), std::ldexp(1.0, s - 2));

  const auto qi = static_cast<std::uint64_t>(q);
  const std::size_t count = static_cast<std::size_t>(projections);
  std::vector<double> terms(count);
  std::vector<std::uint64_t> hs(s - 2);
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::size_t rest = idx;
    for (int j = s - 3; j >= 0; --j) {
      hs[j] = rest % qi;
      rest /= qi;
    }
    terms[idx] = gowers_norm(cs_project(fs, hs), 2, budget).raw_power;
  }
  report.rhs = pairwise_sum(terms) / static_cast<double>(count);
  report.holds = report.lhs <= report.rhs + kCsTolerance;
  return report;
}

}  // namespace ffprog
