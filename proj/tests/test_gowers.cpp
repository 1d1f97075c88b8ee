#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ffprog/gowers.hpp"
#include "oracles/oracles.hpp"
#include "test_util.hpp"

using namespace ffprog;
using ffprog::testing::error_kind;

namespace {

std::vector<TwoVarFunction> random_family(const FieldSpec& f, std::size_t m, SplitMix64& rng) {
  std::vector<TwoVarFunction> fs;
  for (std::size_t i = 0; i < m; ++i) fs.push_back(random_one_bounded_two_var(f, rng));
  return fs;
}

double sup_distance(const DenseFunction& a, const DenseFunction& b) {
  double d = 0.0;
  for (std::uint64_t x = 0; x < a.size(); ++x) d = std::max(d, std::abs(a[x] - b[x]));
  return d;
}

}  // namespace

TEST_CASE("constants and characters") {
  const auto f = FieldSpec::make(7, 1);
  for (int s = 1; s <= 4; ++s) CHECK(gowers_norm(DenseFunction::constant(f, 1.0), s).value == doctest::Approx(1.0));
  const auto psi = DenseFunction::character(f, 3);
  CHECK(gowers_norm(psi, 2).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gowers_u2_via_fourier(psi).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gowers_norm(psi, 1).value < 1e-10);
}

TEST_CASE("U1 is the absolute mean") {
  SplitMix64 rng(12);
  const auto f = FieldSpec::make(11, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = random_one_bounded(f, rng);
    CHECK(std::abs(gowers_norm(g, 1).value - std::abs(g.mean())) <= 1e-10);
  }
}

TEST_CASE("balanced indicator on F_7") {
  const auto f = FieldSpec::make(7, 1);
  const std::vector<std::uint64_t> A{0, 1, 3};
  const auto g = indicator_of_indices(f, A) - DenseFunction::constant(f, 3.0 / 7.0);
  const auto naive = gowers_norm(g, 2), spectral = gowers_u2_via_fourier(g);
  CHECK(std::abs(naive.raw_power - spectral.raw_power) <= 1e-8 * spectral.raw_power);
  CHECK(std::abs(naive.raw_power - oracle::u2_fourth_power(g)) <= 1e-12);
  CHECK(naive.value == doctest::Approx(std::pow(naive.raw_power, 0.25)));
}

TEST_CASE("two-character spectrum") {
  const auto f = FieldSpec::make(13, 1);
  const auto g = 0.5 * (DenseFunction::character(f, 2) + DenseFunction::character(f, 9));
  CHECK(gowers_u2_via_fourier(g).raw_power == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(gowers_norm(g, 2).raw_power == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("U2 identity on random functions") {
  SplitMix64 rng(101);
  for (const auto& [p, k] : std::vector<std::pair<std::uint64_t, int>>{{7, 1}, {3, 2}, {2, 4}, {101, 1}}) {
    const auto f = FieldSpec::make(p, k);
    for (int trial = 0; trial < 5; ++trial) {
      const auto g = random_one_bounded(f, rng);
      const double naive = gowers_norm(g, 2).raw_power, spectral = gowers_u2_via_fourier(g).raw_power;
      CHECK(std::abs(naive - spectral) <= 1e-8 * spectral);
      if (f.q() <= 49) CHECK(std::abs(naive - oracle::u2_fourth_power(g)) <= 1e-8 * spectral);
    }
  }
}

TEST_CASE("monotonicity and boundedness") {
  SplitMix64 rng(77);
  for (std::uint64_t p : {7u, 11u, 13u}) {
    const auto f = FieldSpec::make(p, 1);
    for (int trial = 0; trial < 100; ++trial) {
      const auto g = random_one_bounded(f, rng);
      double prev = 0.0;
      for (int s = 1; s <= 4; ++s) {
        const auto v = gowers_norm(g, s);
        CHECK(v.raw_power >= -1e-9);
        CHECK(v.value <= 1.0 + 1e-9);
        CHECK(prev <= v.value + 1e-9);
        prev = v.value;
      }
    }
  }
}

TEST_CASE("gowers errors") {
  const auto f = FieldSpec::make(31, 1);
  const auto g = DenseFunction::constant(f, 1.0);
  CHECK(error_kind([&] { gowers_norm(g, 0); }) == ErrorKind::InvalidRange);
  CHECK(error_kind([&] { gowers_norm(g, 3, 1e5); }) == ErrorKind::BudgetExceeded);
  CHECK_NOTHROW(gowers_norm(g, 3, 1e7));
}

TEST_CASE("dual upper bound") {
  const auto f = FieldSpec::make(31, 1);
  CHECK(u2_dual_upper_bound(DenseFunction::character(f, 5)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(u2_dual_upper_bound(DenseFunction::zero(f)) == 0.0);
  SplitMix64 rng(31);
  const auto target = random_one_bounded(f, rng);
  const double bound = u2_dual_upper_bound(target);
  double best = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto g = random_one_bounded(f, rng);
    best = std::max(best, std::abs(inner(target, g)) / gowers_u2_via_fourier(g).value);
  }
  CHECK(best <= bound);
  // psi_a attains the bound for f = psi_a
  const auto psi = DenseFunction::character(f, 5);
  CHECK(std::abs(inner(psi, psi)) / gowers_u2_via_fourier(psi).value == doctest::Approx(1.0));
}

TEST_CASE("projection special cases") {
  const auto f = FieldSpec::make(7, 1);
  const std::uint64_t q = f.q();
  SplitMix64 rng(2);
  const auto g = random_one_bounded(f, rng);
  std::vector<Complex> vals(q * q);
  for (std::uint64_t x = 0; x < q; ++x)
    for (std::uint64_t y = 0; y < q; ++y) vals[x * q + y] = g[x];
  const std::vector<TwoVarFunction> one{TwoVarFunction(f, vals)};
  CHECK(sup_distance(cs_project(one, {}), g) < 1e-15);

  const std::vector<TwoVarFunction> ones(3, TwoVarFunction(f, std::vector<Complex>(q * q, 1.0)));
  const std::vector<std::uint64_t> hs{1, 2};
  CHECK(sup_distance(cs_project(ones, hs), DenseFunction::constant(f, 1.0)) < 1e-15);
}

TEST_CASE("projection composes with differencing") {
  const auto f = FieldSpec::make(7, 1);
  SplitMix64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto fs = random_family(f, 2, rng);
    const std::uint64_t h = rng.below(7), k = rng.below(7);
    std::vector<TwoVarFunction> shifted;
    const std::vector<std::uint64_t> hv{h}, kv{k}, both{h, k};
    for (const auto& F : fs) shifted.push_back(delta_first_var_indices(F, hv));
    const auto lhs = cs_project(shifted, kv);
    CHECK(sup_distance(lhs, cs_project(fs, both)) <= 1e-12);
    CHECK(lhs.one_bounded());
  }
}

TEST_CASE("projection errors") {
  const auto f = FieldSpec::make(5, 1);
  const std::vector<TwoVarFunction> big{TwoVarFunction(f, std::vector<Complex>(25, 1.5))};
  CHECK(error_kind([&] { cs_project(big, {}); }) == ErrorKind::NotOneBounded);
  CHECK(error_kind([&] { cs_project({}, {}); }) == ErrorKind::EmptyInput);
  const std::vector<TwoVarFunction> mixed{TwoVarFunction(f, std::vector<Complex>(25, 1.0)),
                                          TwoVarFunction(FieldSpec::make(3, 1), std::vector<Complex>(9, 1.0))};
  CHECK(error_kind([&] { cs_project(mixed, {}); }) == ErrorKind::FieldMismatch);
  CHECK(error_kind([&] { check_cs_inequality(big, 3); }) == ErrorKind::NotOneBounded);
}

TEST_CASE("Cauchy-Schwarz reduction") {
  const auto f5 = FieldSpec::make(5, 1);
  SplitMix64 rng(55);
  {
    const auto fs = random_family(f5, 2, rng);
    const auto r = check_cs_inequality(fs, 2);
    CHECK(r.holds);
    CHECK(std::abs(r.lhs - r.rhs) <= 1e-12);
  }
  {
    const std::vector<TwoVarFunction> ones(2, TwoVarFunction(f5, std::vector<Complex>(25, 1.0)));
    for (int s = 2; s <= 4; ++s) {
      const auto r = check_cs_inequality(ones, s);
      CHECK(r.lhs == doctest::Approx(1.0));
      CHECK(r.rhs == doctest::Approx(1.0));
    }
  }
  for (std::uint64_t p : {5u, 7u, 11u}) {
    const auto f = FieldSpec::make(p, 1);
    for (int trial = 0; trial < 50; ++trial) {
      const auto r = check_cs_inequality(random_family(f, 2, rng), 3);
      CHECK(r.holds);
      CHECK(r.lhs <= r.rhs + kCsTolerance);
    }
  }
  CHECK(error_kind([&] { check_cs_inequality(random_family(f5, 1, rng), 1); }) == ErrorKind::InvalidRange);
  CHECK(error_kind([&] { check_cs_inequality(random_family(FieldSpec::make(31, 1), 1, rng), 4, 1e6); }) ==
        ErrorKind::BudgetExceeded);
}
