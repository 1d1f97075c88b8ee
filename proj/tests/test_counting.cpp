#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "ffprog/counting.hpp"
#include "oracles/oracles.hpp"
#include "test_util.hpp"

using namespace ffprog;
using ffprog::testing::error_kind;

namespace {

std::vector<std::uint64_t> random_subset(std::uint64_t q, std::uint64_t size, SplitMix64& rng) {
  std::vector<std::uint64_t> all(q);
  for (std::uint64_t i = 0; i < q; ++i) all[i] = i;
  for (std::uint64_t i = 0; i < size; ++i) std::swap(all[i], all[i + rng.below(q - i)]);
  all.resize(size);
  return all;
}

std::vector<DenseFunction> random_functions(const FieldSpec& f, std::size_t n, SplitMix64& rng) {
  std::vector<DenseFunction> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_one_bounded(f, rng));
  return out;
}

std::vector<DenseFunction> indicators(const FieldSpec& f, std::span<const std::uint64_t> A, std::size_t n) {
  return std::vector<DenseFunction>(n, indicator_of_indices(f, A));
}

}  // namespace

TEST_CASE("lambda of constants and full sets") {
  const auto f = FieldSpec::make(11, 1);
  for (const char* P : {"y", "y, y^2", "y, y^2, y^3"}) {
    const auto s = ProgressionSystem::parse(P);
    const std::vector<DenseFunction> ones(s.m1() + 1, DenseFunction::constant(f, 1.0));
    CHECK(std::abs(lambda_average(s, ones, {}) - 1.0) < 1e-14);
    std::vector<std::uint64_t> all(11);
    for (std::uint64_t i = 0; i < 11; ++i) all[i] = i;
    CHECK(count_progressions(s, f, all, YRule::All) == 121);
    CHECK(count_progressions(s, f, all, YRule::Nonzero) == 110);
    CHECK(count_progressions(s, f, {}, YRule::All) == 0);
    const auto r = main_term_error(s, f, all);
    CHECK(std::abs(r.value - 1.0) < 1e-14);
    CHECK(std::abs(r.error) < 1e-14);
    const auto e = main_term_error(s, f, {});
    CHECK(std::abs(e.value) == 0.0);
    CHECK(std::abs(e.main_term) == 0.0);
  }
}

TEST_CASE("lambda on a small set matches the pair enumeration") {
  const auto f = FieldSpec::make(7, 1);
  const auto s = ProgressionSystem::parse("y, y^2");
  const std::vector<std::uint64_t> A{1, 2, 4};
  const auto brute = oracle::count(f, s.P(), {1, 2, 4}, false);
  CHECK(count_progressions(s, f, A, YRule::All) == brute);
  CHECK(std::abs(lambda_average(s, indicators(f, A, 3), {}) - static_cast<double>(brute) / 49.0) < 1e-14);
  const auto r = main_term_error(s, f, A);
  CHECK(std::abs(r.value - (r.main_term + r.error)) == 0.0);
  CHECK(std::abs(r.main_term - std::pow(3.0 / 7.0, 3)) < 1e-15);
  CHECK(std::abs(r.scaled_error - 49.0 * r.error) < 1e-12);
  CHECK_FALSE(r.below_threshold);
}

TEST_CASE("three-term progressions over F_5") {
  const auto f = FieldSpec::make(5, 1);
  const auto s = ProgressionSystem::allow_dependent(parse_poly_list("y, 2y"));
  const std::vector<std::uint64_t> A{0, 1, 3};
  // x = 1, y = 2 gives 1, 3, 0; x = 3, y = 1 gives 3, 4, 0 is not in A
  const auto c = count_progressions(s, f, A, YRule::Nonzero);
  CHECK(c == oracle::count(f, s.P(), {0, 1, 3}, true));
  CHECK(c >= 1);
  CHECK(c == 2);
  CHECK(count_progressions(s, f, A, YRule::All) == c + 3);
}

TEST_CASE("counting identity is exact") {
  SUBCASE("all subsets of F_7 and F_11") {
    for (std::uint64_t p : {7u, 11u}) {
      const auto f = FieldSpec::make(p, 1);
      for (const char* P : {"y, y^2", "y, 2y"}) {
        const auto s = ProgressionSystem::allow_dependent(parse_poly_list(P));
        for (std::uint64_t mask = 0; mask < (1ULL << p); ++mask) {
          std::vector<std::uint64_t> A;
          std::set<std::uint64_t> S;
          for (std::uint64_t i = 0; i < p; ++i)
            if (mask >> i & 1) {
              A.push_back(i);
              S.insert(i);
            }
          const auto c = count_progressions(s, f, A, YRule::All);
          if (c != oracle::count(f, s.P(), S, false)) FAIL("count mismatch at mask " << mask);
          if (p == 7) {
            const double scaled = 49.0 * lambda_average(s, indicators(f, A, s.m1() + 1), {}).real();
            CHECK(std::abs(scaled - static_cast<double>(c)) < 1e-6);
          }
        }
      }
    }
  }
  SUBCASE("random sets up to q = 101") {
    SplitMix64 rng(101);
    for (const auto& [p, k] : std::vector<std::pair<std::uint64_t, int>>{{101, 1}, {5, 2}, {3, 3}, {7, 2}}) {
      const auto f = FieldSpec::make(p, k);
      const auto s = ProgressionSystem::parse("y, y^2, y^3");
      const int trials = f.q() == 101 ? 200 : 40;
      for (int t = 0; t < trials; ++t) {
        const auto A = random_subset(f.q(), 1 + rng.below(f.q()), rng);
        const std::set<std::uint64_t> S(A.begin(), A.end());
        const auto c = count_progressions(s, f, A, YRule::All);
        CHECK(c == oracle::count(f, s.P(), S, false));
        const double q2 = static_cast<double>(f.q() * f.q());
        CHECK(std::abs(q2 * main_term_error(s, f, A).value.real() - static_cast<double>(c)) < 1e-6);
      }
    }
  }
}

TEST_CASE("lambda matches the reference sum with twists") {
  SplitMix64 rng(6);
  const auto f = FieldSpec::make(3, 2);
  const auto s = ProgressionSystem::parse("y, y^2+y", "y^3");
  const auto F = random_functions(f, 3, rng);
  const auto G = random_functions(f, 1, rng);
  const auto ref = oracle::lambda(f, s.P(), F, s.Q(), G);
  CHECK(std::abs(lambda_average(s, F, G) - ref) < 1e-12);
  CHECK(std::abs(lambda_average(s, F, G, 4) - lambda_average(s, F, G, 1)) == 0.0);
}

TEST_CASE("lambda is multilinear in every slot") {
  SplitMix64 rng(13);
  const auto f = FieldSpec::make(11, 1);
  const auto s = ProgressionSystem::parse("y, y^2", "y^3");
  const Complex alpha{0.7, -0.2};
  auto F = random_functions(f, 3, rng);
  auto G = random_functions(f, 1, rng);
  for (std::size_t slot = 0; slot < 4; ++slot) {
    const auto extra = random_one_bounded(f, rng);
    auto& target = slot < 3 ? F[slot] : G[0];
    const auto original = target;
    const auto base = lambda_average(s, F, G);
    target = extra;
    const auto other = lambda_average(s, F, G);
    target = alpha * original + extra;
    const auto mixed = lambda_average(s, F, G);
    target = original;
    CHECK(std::abs(mixed - (alpha * base + other)) <= 1e-10);
  }
}

TEST_CASE("argument validation") {
  const auto f = FieldSpec::make(7, 1);
  const auto s = ProgressionSystem::parse("y, y^2");
  const auto ones = std::vector<DenseFunction>(2, DenseFunction::constant(f, 1.0));
  CHECK(error_kind([&] { lambda_average(s, ones, {}); }) == ErrorKind::ArityMismatch);
  std::vector<DenseFunction> mixed{DenseFunction::constant(f, 1.0), DenseFunction::constant(f, 1.0),
                                   DenseFunction::constant(FieldSpec::make(5, 1), 1.0)};
  CHECK(error_kind([&] { lambda_average(s, mixed, {}); }) == ErrorKind::FieldMismatch);
  const std::vector<std::uint64_t> bad{7};
  CHECK(error_kind([&] { count_progressions(s, f, bad, YRule::All); }) == ErrorKind::ElementOutOfField);
  const auto twisted = ProgressionSystem::parse("y", "y^2");
  CHECK(error_kind([&] { count_progressions(twisted, f, {}, YRule::All); }) == ErrorKind::TwistedSystem);
}

TEST_CASE("threshold flag") {
  const auto s = ProgressionSystem::parse("30y, y^2");
  const std::vector<std::uint64_t> A{0, 1, 2};
  CHECK(main_term_error(s, FieldSpec::make(5, 1), A).below_threshold);
  CHECK_FALSE(main_term_error(s, FieldSpec::make(7, 1), A).below_threshold);
  const auto dep = ProgressionSystem::allow_dependent(parse_poly_list("y, 2y"));
  CHECK_FALSE(main_term_error(dep, FieldSpec::make(5, 1), A).below_threshold);
}

TEST_CASE("error shape for y and y^2 at q = 101") {
  const auto f = FieldSpec::make(101, 1);
  const auto s = ProgressionSystem::parse("y, y^2");
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SplitMix64 rng(seed);
    const auto A = random_subset(101, 50, rng);
    const auto r = main_term_error(s, f, A);
    CHECK(std::abs(r.scaled_error) <= 10.0 * std::pow(50.0, 1.5) * std::pow(101.0, 0.4));
  }
}

TEST_CASE("twisted main term vanishes") {
  const auto f = FieldSpec::make(11, 1);
  const auto s = ProgressionSystem::parse("y", "y^2");
  const std::vector<std::uint64_t> A{1, 2, 3, 5, 8};
  const std::vector<std::uint64_t> psi{4};
  const auto r = main_term_error(s, f, A, psi);
  CHECK(r.main_term == Complex{0.0, 0.0});
  const std::vector<std::uint64_t> trivial{0};
  CHECK(std::abs(main_term_error(s, f, A, trivial).main_term - std::pow(5.0 / 11.0, 2)) < 1e-15);
}

TEST_CASE("rewrite identities") {
  SplitMix64 rng(44);
  SUBCASE("no twist") {
    const auto f = FieldSpec::make(7, 1);
    const auto s = ProgressionSystem::parse("y, y^2");
    const auto r = twist_rewrite_check(s, random_functions(f, 3, rng), {}, 0);
    CHECK(r.max_abs_diff <= 1e-10);
  }
  SUBCASE("shift by the first polynomial") {
    const auto f = FieldSpec::make(11, 1);
    const auto s = ProgressionSystem::parse("y, y^2");
    for (int t = 0; t < 5; ++t) {
      const auto r = twist_rewrite_check(s, random_functions(f, 3, rng), {}, 1);
      CHECK(r.max_abs_diff <= 1e-10);
      const auto rest = random_functions(f, 2, rng);
      CHECK(character_shift_check(s, rest, {}, rng.below(11), 1).max_abs_diff <= 1e-10);
    }
  }
  SUBCASE("randomized battery") {
    const std::vector<std::pair<const char*, const char*>> systems = {
        {"y, y^2", ""}, {"y, y^2", "y^3"}, {"y^2, y^3", "y"}, {"y, y^2, y^3", ""}, {"2y, y^2+y", "y^3"}};
    for (int t = 0; t < 100; ++t) {
      const auto& [P, Q] = systems[t % systems.size()];
      const auto s = ProgressionSystem::parse(P, Q);
      const auto f = FieldSpec::make(t % 2 ? 11 : 7, 1);
      std::vector<std::uint64_t> psi;
      for (std::size_t j = 0; j < s.m2(); ++j) psi.push_back(rng.below(f.q()));
      const std::size_t k = t % 3 == 0 ? s.m1() : rng.below(s.m1() + 1);
      const auto r = twist_rewrite_check(s, random_functions(f, s.m1() + 1, rng), psi, k);
      CAPTURE(t);
      CHECK(r.max_abs_diff <= 1e-10);
    }
  }
  SUBCASE("errors") {
    const auto f = FieldSpec::make(7, 1);
    const auto s = ProgressionSystem::parse("y, y^2");
    CHECK(error_kind([&] { twist_rewrite_check(s, random_functions(f, 3, rng), {}, 3); }) ==
          ErrorKind::IndexOutOfRange);
    const std::vector<std::uint64_t> extra{1};
    CHECK(error_kind([&] { twist_rewrite_check(s, random_functions(f, 3, rng), extra, 0); }) ==
          ErrorKind::ArityMismatch);
  }
}

TEST_CASE("base case") {
  const auto f = FieldSpec::make(13, 1);
  const std::vector<DenseFunction> ones(2, DenseFunction::constant(f, 1.0));
  const auto y = parse_poly("y");
  CHECK(std::abs(base_case_report(y, {}, ones, {}).error) < 1e-14);
  const std::vector<DenseFunction> chi{DenseFunction::constant(f, 1.0), DenseFunction::character(f, 5)};
  const auto r = base_case_report(y, {}, chi, {});
  CHECK(std::abs(r.value) < 1e-14);
  CHECK(std::abs(r.main_term) < 1e-14);
  const std::vector<IntPoly> dup{parse_poly("y")};
  CHECK(error_kind([&] { base_case_report(y, dup, ones, std::vector<std::uint64_t>{1}); }) ==
        ErrorKind::DuplicatePolynomial);
  const std::vector<IntPoly> dep{parse_poly("2y")};
  CHECK(error_kind([&] { base_case_report(y, dep, ones, std::vector<std::uint64_t>{1}); }) ==
        ErrorKind::DependentSystem);
}

TEST_CASE("base case error decays like q^-1/2 for y^3") {
  SplitMix64 rng(7);
  const auto cube = parse_poly("y^3");
  const std::vector<IntPoly> Qs{parse_poly("y")};
  double worst = 0.0;
  for (std::uint64_t p = 7; p <= 199; ++p) {
    if (!is_prime(p)) continue;
    const auto f = FieldSpec::make(p, 1);
    const std::vector<std::uint64_t> psi{1 + rng.below(p - 1)};
    const auto r = base_case_report(cube, Qs, random_functions(f, 2, rng), psi);
    worst = std::max(worst, r.scaled_error);
  }
  CHECK(worst <= 10.0);
}

TEST_CASE("Weil sums") {
  const auto f101 = FieldSpec::make(101, 1);
  const std::vector<IntPoly> cube{parse_poly("y^3")};
  const auto w = weil_sum(f101, cube, std::vector<std::uint64_t>{1});
  CHECK(std::abs(w.value) <= 2.0 / std::sqrt(101.0));
  CHECK(w.within_bound);
  CHECK(w.combined_degree == 3);
  CHECK(std::abs(w.value - oracle::monomial_character_sum(101, 3, 1)) < 1e-12);

  const auto triv = weil_sum(f101, cube, std::vector<std::uint64_t>{0});
  CHECK(triv.all_trivial);
  CHECK(std::abs(triv.value - 1.0) < 1e-14);

  const std::vector<IntPoly> lin{parse_poly("y")};
  for (std::uint64_t a = 1; a < 101; a += 17) CHECK(std::abs(weil_sum(f101, lin, std::vector<std::uint64_t>{a}).value) < 1e-12);

  // a y^2 over F_p is a Gauss sum of modulus exactly sqrt(p)
  const std::vector<IntPoly> sq{parse_poly("y^2")};
  for (std::uint64_t p : {7u, 11u, 13u, 101u}) {
    const auto r = weil_sum(FieldSpec::make(p, 1), sq, std::vector<std::uint64_t>{3});
    CHECK(std::abs(r.value) == doctest::Approx(1.0 / std::sqrt(static_cast<double>(p))).epsilon(1e-12));
    CHECK(r.within_bound);
  }

  const auto f9 = FieldSpec::make(3, 2);
  const std::vector<IntPoly> pair{parse_poly("y"), parse_poly("y^2")};
  for (std::uint64_t a = 0; a < 9; ++a)
    for (std::uint64_t b = 1; b < 9; ++b) CHECK(weil_sum(f9, pair, std::vector<std::uint64_t>{a, b}).within_bound);
}

TEST_CASE("Weil sum errors") {
  const auto f5 = FieldSpec::make(5, 1);
  const std::vector<IntPoly> high{parse_poly("y^5")};
  CHECK(error_kind([&] { weil_sum(f5, high, std::vector<std::uint64_t>{1}); }) == ErrorKind::CharacteristicTooSmall);
  // y + 4y cancels mod 5
  const std::vector<IntPoly> cancel{parse_poly("y"), parse_poly("4y")};
  CHECK(error_kind([&] { weil_sum(f5, cancel, std::vector<std::uint64_t>{1, 1}); }) ==
        ErrorKind::DegenerateCombination);
  CHECK(error_kind([&] { weil_sum(f5, cancel, std::vector<std::uint64_t>{1}); }) == ErrorKind::ArityMismatch);
}
