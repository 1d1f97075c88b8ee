#include "ffprog/decomposition.hpp"

#include <cmath>
#include <limits>

#include "ffprog/error.hpp"
#include "ffprog/gowers.hpp"
#include "ffprog/numeric.hpp"

namespace ffprog {

const char* to_string(DecompositionStatus s) {
  switch (s) {
    case DecompositionStatus::Certified: return "certified";
    case DecompositionStatus::Partial: return "partial";
    case DecompositionStatus::Failed: return "failed";
  }
  return "failed";
}

namespace {

void same_shape(const DenseFunction& f, const DenseFunction& g) {
  if (g.size() != f.size()) throw Error(ErrorKind::ShapeMismatch, "decomposition parts differ in size");
  if (!(g.field() == f.field())) throw Error(ErrorKind::FieldMismatch, "decomposition parts over different fields");
}

double l2_norm(const DenseFunction& f) { return lp_norm(f, 2.0); }

}  // namespace

DecompositionResult verify_decomposition(const DenseFunction& f, const DenseFunction& fa, const DenseFunction& fb,
                                         const DenseFunction& fc, const DecompositionBudget& budget, double q,
                                         std::optional<double> dual_certificate) {
  same_shape(f, fa);
  same_shape(f, fb);
  same_shape(f, fc);
  if (!(q > 1)) throw Error(ErrorKind::InvalidRange, "q must exceed 1");
  if (budget.s < 1) throw Error(ErrorKind::InvalidRange, "norm index must be positive");

  DecompositionResult r{fa, fb, fc, {}, DecompositionStatus::Failed, std::nullopt, {}, {}};
  const double lq = std::log(q);

  double residual = 0.0;
  for (std::size_t x = 0; x < f.size(); ++x) residual = std::max(residual, std::abs(f[x] - fa[x] - fb[x] - fc[x]));
  r.certs.sum_residual = residual;
  r.certs.l1_fb = lp_norm(fb, 1.0);
  r.certs.linf_fc = lp_norm(fc, kInfinity);
  r.certs.norm_fc = budget.s == 2 ? gowers_u2_via_fourier(fc).value : gowers_norm(fc, budget.s).value;
  if (budget.s == 2) {
    r.certs.dual_bound_used = u2_dual_upper_bound(fa);
  } else {
    r.certs.dual_bound_used = dual_certificate.value_or(std::numeric_limits<double>::quiet_NaN());
  }

  if (l2_norm(f) > 1.0 + 1e-12) r.warnings.push_back("||f||_2 exceeds 1");
  if (std::exp((budget.d2 - budget.d3) * lq) + std::exp((budget.d4 - budget.d1) * lq) > 0.5)
    r.warnings.push_back("budget condition q^{d2-d3} + q^{d4-d1} <= 1/2 fails");
  if (!(budget.d1 > 0 && budget.d2 > 0 && budget.d3 > 0 && budget.d4 > 0))
    r.warnings.push_back("budget has a nonpositive delta");

  bool ok = true;
  auto require = [&](bool cond, const std::string& what) {
    if (!cond) {
      r.diagnostics.push_back(what);
      ok = false;
    }
  };
  require(residual <= kSumIdentityTolerance, "sum identity violated: max |f - fa - fb - fc| = " + std::to_string(residual));
  require(r.certs.l1_fb <= std::exp(-budget.d2 * lq), "||fb||_1 exceeds q^{-d2}");
  require(r.certs.linf_fc <= std::exp(budget.d3 * lq), "||fc||_inf exceeds q^{d3}");
  require(r.certs.norm_fc <= std::exp(-budget.d4 * lq), "||fc||_{U^s} exceeds q^{-d4}");

  const bool have_dual = !std::isnan(r.certs.dual_bound_used);
  if (have_dual) require(r.certs.dual_bound_used <= std::exp(budget.d1 * lq), "dual bound for fa exceeds q^{d1}");

  if (!ok) r.status = DecompositionStatus::Failed;
  else if (!have_dual) {
    r.status = DecompositionStatus::Partial;
    r.diagnostics.push_back("no certified dual-norm bound for fa");
  } else {
    r.status = DecompositionStatus::Certified;
  }
  return r;
}

DecompositionResult u2_threshold_decompose(const DenseFunction& f, const DecompositionBudget& budget, double q) {
  if (budget.s != 2) throw Error(ErrorKind::InvalidRange, "the Fourier producer handles s = 2 only");
  if (l2_norm(f) > 1.0 + 1e-12) throw Error(ErrorKind::NotL2Normalized, "||f||_2 exceeds 1");
  const FieldSpec& field = f.field();
  const auto hat = fourier_transform(f);
  const int steps = static_cast<int>(std::ceil(std::log2(static_cast<double>(field.q()))));

  std::optional<DecompositionResult> best;
  std::optional<DecompositionResult> coarsest;
  for (int j = 0; j <= steps; ++j) {
    const double tau = std::ldexp(1.0, -j);
    FourierCoefficients kept{field, hat.coeffs};
    for (auto& c : kept.coeffs)
      if (std::abs(c) < tau) c = 0.0;
    DenseFunction fa = inverse_fourier(kept);
    DenseFunction fc = f - fa;
    auto r = verify_decomposition(f, fa, DenseFunction::zero(field), fc, budget, q);
    r.tau = tau;
    if (j == 0) coarsest = r;
    if (r.status == DecompositionStatus::Certified) best = std::move(r);
  }
  return best ? *best : *coarsest;
}

DecompositionBudget decomposition_budget_from_schedule(const ScheduleParams& params, int ell) {
  if (ell < 2 || ell > params.s) throw Error(ErrorKind::IndexOutOfRange, "level outside [2, s]");
  DecompositionBudget b;
  b.d1 = to_double(params.delta(1, ell));
  b.d2 = to_double(params.delta(2, ell));
  b.d3 = to_double(params.delta(3, ell));
  b.d4 = to_double(params.delta(4, ell));
  b.s = ell;
  return b;
}

nlohmann::json to_json(const DecompositionResult& r) {
  nlohmann::json j;
  j["status"] = to_string(r.status);
  const auto num = [](double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); };
  j["certs"] = {{"dual_bound_used", num(r.certs.dual_bound_used)},
                {"l1_fb", r.certs.l1_fb},
                {"linf_fc", r.certs.linf_fc},
                {"norm_fc", r.certs.norm_fc},
                {"sum_residual", r.certs.sum_residual}};
  j["tau"] = r.tau ? nlohmann::json(*r.tau) : nlohmann::json(nullptr);
  j["diagnostics"] = r.diagnostics;
  j["warnings"] = r.warnings;
  return j;
}

}  // namespace ffprog
