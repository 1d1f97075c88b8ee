#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "ffprog/decomposition.hpp"
#include "ffprog/gowers.hpp"
#include "test_util.hpp"

using namespace ffprog;
using ffprog::testing::error_kind;

namespace {

DenseFunction balanced_indicator(const FieldSpec& f, SplitMix64& rng) {
  std::vector<std::uint64_t> A;
  for (std::uint64_t x = 0; x < f.q(); ++x)
    if (rng.uniform() < 0.5) A.push_back(x);
  const double density = static_cast<double>(A.size()) / static_cast<double>(f.q());
  return indicator_of_indices(f, A) - DenseFunction::constant(f, density);
}

DecompositionBudget loose_budget() { return {0.5, 0.5, 0.5, 0.1, 2}; }

}  // namespace

TEST_CASE("a single character certifies as its own structured part") {
  const auto f = FieldSpec::make(101, 1);
  const auto psi = DenseFunction::character(f, 17);
  const auto zero = DenseFunction::zero(f);
  const auto r = verify_decomposition(psi, psi, zero, zero, {0.01, 0.01, 0.02, 0.005, 2}, 101.0);
  CHECK(r.status == DecompositionStatus::Certified);
  CHECK(r.certs.dual_bound_used == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.certs.sum_residual == 0.0);
  const auto p = u2_threshold_decompose(psi, loose_budget(), 101.0);
  CHECK(p.status == DecompositionStatus::Certified);
  for (std::uint64_t x = 0; x < 101; ++x) {
    CHECK(std::abs(p.fa[x] - psi[x]) < 1e-12);
    CHECK(std::abs(p.fc[x]) < 1e-12);
  }
}

TEST_CASE("sum identity violation fails") {
  const auto f = FieldSpec::make(31, 1);
  SplitMix64 rng(9);
  const auto g = random_unimodular(f, rng);
  const auto p = u2_threshold_decompose(g, loose_budget(), 31.0);
  const auto fb = p.fb + DenseFunction::constant(f, 1e-3);
  const auto r = verify_decomposition(g, p.fa, fb, p.fc, loose_budget(), 31.0);
  CHECK(r.status == DecompositionStatus::Failed);
  CHECK(r.certs.sum_residual == doctest::Approx(1e-3).epsilon(1e-6));
  const bool mentions_sum =
      std::any_of(r.diagnostics.begin(), r.diagnostics.end(), [](const std::string& d) { return d.find("sum") != std::string::npos; });
  CHECK(mentions_sum);
}

TEST_CASE("producer output passes the verifier") {
  const auto f = FieldSpec::make(101, 1);
  SplitMix64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = random_unimodular(f, rng);
    const auto p = u2_threshold_decompose(g, loose_budget(), 101.0);
    CHECK(p.status == DecompositionStatus::Certified);
    REQUIRE(p.tau.has_value());
    CHECK(p.certs.sum_residual <= kSumIdentityTolerance);
    const auto v = verify_decomposition(g, p.fa, p.fb, p.fc, loose_budget(), 101.0);
    CHECK(v.status == DecompositionStatus::Certified);
    for (std::uint64_t x = 0; x < 101; ++x) CHECK(p.fb[x] == Complex{0.0, 0.0});

    // ||fc||_{U^2}^4 <= sum over small modes of |f^|^4 <= tau^2 ||f||_2^2
    const auto hat = fourier_transform(g).coeffs;
    double small4 = 0.0;
    for (const auto& c : hat)
      if (std::abs(c) < *p.tau) small4 += std::pow(std::abs(c), 4);
    const double fc4 = gowers_u2_via_fourier(p.fc).raw_power;
    CHECK(fc4 <= small4 + 1e-12);
    CHECK(small4 <= (*p.tau) * (*p.tau) * std::pow(lp_norm(g, 2.0), 2) + 1e-12);
  }
}

TEST_CASE("flat spectrum") {
  // quadratic phase: |f^| = q^{-1/2} for every character
  const auto f = FieldSpec::make(101, 1);
  std::vector<Complex> v(101);
  for (std::uint64_t x = 0; x < 101; ++x) v[x] = f.root_of_unity(x * x % 101);
  const DenseFunction g(f, v);
  for (const auto& c : fourier_transform(g).coeffs) CHECK(std::abs(c) == doctest::Approx(1.0 / std::sqrt(101.0)));
  const auto r = u2_threshold_decompose(g, {0.5, 0.5, 0.5, 0.25, 2}, 101.0);
  CHECK(r.status == DecompositionStatus::Certified);
  CHECK(r.certs.norm_fc <= std::pow(101.0, -0.25) + 1e-12);
  const auto strict = u2_threshold_decompose(g, {0.5, 0.5, 0.5, 0.3, 2}, 101.0);
  // at delta4 > 1/4 only moving spectrum into fa can help
  if (strict.status == DecompositionStatus::Certified) CHECK(*strict.tau <= 1.0 / std::sqrt(101.0));
}

TEST_CASE("balanced indicators under the schedule budget") {
  const auto f = FieldSpec::make(101, 1);
  const auto budget = decomposition_budget_from_schedule(delta_schedule(2, 1, Rational(1, 2)), 2);
  int certified = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    SplitMix64 rng(seed);
    const auto g = balanced_indicator(f, rng);
    const auto r = u2_threshold_decompose(g, budget, 101.0);
    CHECK(r.certs.sum_residual <= kSumIdentityTolerance);
    if (r.status == DecompositionStatus::Certified) ++certified;
  }
  CHECK(certified >= 45);
}

TEST_CASE("dual certificates are sound") {
  const auto f = FieldSpec::make(31, 1);
  SplitMix64 rng(1234);
  for (int instance = 0; instance < 3; ++instance) {
    const auto g = random_unimodular(f, rng);
    const auto r = u2_threshold_decompose(g, {1.0, 1.0, 1.0, 0.3, 2}, 31.0);
    const auto fa = r.fa;
    const double bound = r.certs.dual_bound_used;
    for (int t = 0; t < 1000; ++t) {
      const auto h = random_one_bounded(f, rng);
      CHECK(std::abs(inner(fa, h)) <= bound * gowers_u2_via_fourier(h).value + 1e-9);
    }
  }
}

TEST_CASE("higher levels need a caller certificate") {
  const auto f = FieldSpec::make(7, 1);
  const auto psi = DenseFunction::character(f, 2);
  const auto zero = DenseFunction::zero(f);
  const DecompositionBudget b3{0.5, 0.5, 0.5, 0.1, 3};
  CHECK(verify_decomposition(psi, psi, zero, zero, b3, 7.0).status == DecompositionStatus::Partial);
  CHECK(verify_decomposition(psi, psi, zero, zero, b3, 7.0, 1.0).status == DecompositionStatus::Certified);
  CHECK(verify_decomposition(psi, psi, zero, zero, b3, 7.0, 5.0).status == DecompositionStatus::Failed);
  CHECK(error_kind([&] { u2_threshold_decompose(psi, b3, 7.0); }) == ErrorKind::InvalidRange);
}

TEST_CASE("hypotheses and shapes") {
  const auto f = FieldSpec::make(7, 1);
  const auto big = DenseFunction::constant(f, 2.0);
  const auto zero = DenseFunction::zero(f);
  CHECK(error_kind([&] { u2_threshold_decompose(big, loose_budget(), 7.0); }) == ErrorKind::NotL2Normalized);
  const auto r = verify_decomposition(big, big, zero, zero, loose_budget(), 7.0);
  CHECK_FALSE(r.warnings.empty());
  const auto other = DenseFunction::zero(FieldSpec::make(5, 1));
  CHECK(error_kind([&] { verify_decomposition(big, other, zero, zero, loose_budget(), 7.0); }).has_value());
}

TEST_CASE("budget from schedule") {
  const auto p = delta_schedule(2, 1, Rational(1, 2));
  const auto b = decomposition_budget_from_schedule(p, 2);
  CHECK(b.d1 == std::ldexp(1.0, -8));
  CHECK(b.s == 2);
  CHECK(b.d2 < b.d3);
  CHECK(b.d4 < b.d1);
  CHECK(error_kind([&] { decomposition_budget_from_schedule(p, 3); }) == ErrorKind::IndexOutOfRange);
  CHECK(error_kind([&] { decomposition_budget_from_schedule(p, 1); }) == ErrorKind::IndexOutOfRange);
}

TEST_CASE("json") {
  const auto f = FieldSpec::make(11, 1);
  const auto r = u2_threshold_decompose(DenseFunction::character(f, 3), loose_budget(), 11.0);
  const auto j = to_json(r);
  CHECK(j.at("status") == "certified");
  CHECK(j.contains("certs"));
}
