#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "ffprog/field.hpp"
#include "test_util.hpp"

using namespace ffprog;
using ffprog::testing::error_kind;

namespace {

const std::vector<std::pair<std::uint64_t, int>> kSmallFields = {
    {2, 1}, {3, 1}, {5, 1}, {7, 1}, {2, 2}, {3, 2}, {2, 3}, {5, 2}, {3, 3}, {7, 2}, {2, 5}};

}  // namespace

TEST_CASE("prime field construction") {
  const auto f = FieldSpec::make(7, 1);
  CHECK(f.q() == 7);
  CHECK(f.k() == 1);
  CHECK(f.modulus() == std::vector<std::uint64_t>{0, 1});
}

TEST_CASE("explicit quadratic modulus over F_3") {
  const auto f = FieldSpec::make(3, 2, std::vector<std::uint64_t>{1, 0, 1});
  CHECK(f.q() == 9);
  const FieldElement t{{0, 1}};
  CHECK(f.mul(t, t) == FieldElement{{2, 0}});
  CHECK(f.trace(t) == 0);
}

TEST_CASE("construction errors") {
  CHECK(error_kind([] { FieldSpec::make(9, 1); }) == ErrorKind::NotPrime);
  CHECK(error_kind([] { FieldSpec::make(1, 1); }) == ErrorKind::NotPrime);
  // t^2 + 1 = (t + 1)^2 over F_2
  CHECK(error_kind([] { FieldSpec::make(2, 2, std::vector<std::uint64_t>{1, 0, 1}); }) ==
        ErrorKind::ReducibleModulus);
  CHECK(error_kind([] { FieldSpec::make(3, 2, std::vector<std::uint64_t>{1, 1}); }) ==
        ErrorKind::DegreeMismatch);
}

TEST_CASE("canonical modulus is the smallest irreducible") {
  for (const auto& [p, k] : kSmallFields) {
    const auto f = FieldSpec::make(p, k);
    const auto& mod = f.modulus();
    REQUIRE(mod.size() == static_cast<std::size_t>(k) + 1);
    CHECK(mod.back() == 1);
    CHECK(is_irreducible_mod_p(mod, p));
    if (k == 1) continue;
    std::uint64_t index = 0, scale = 1;
    for (int i = 0; i < k; ++i, scale *= p) index += mod[i] * scale;
    for (std::uint64_t smaller = 0; smaller < index; ++smaller) {
      std::vector<std::uint64_t> cand(k + 1, 0);
      std::uint64_t v = smaller;
      for (int i = 0; i < k; ++i, v /= p) cand[i] = v % p;
      cand[k] = 1;
      CHECK_FALSE(is_irreducible_mod_p(cand, p));
    }
  }
}

TEST_CASE("irreducibility agrees with root search for small degree") {
  for (std::uint64_t p : {2u, 3u, 5u, 7u}) {
    for (int k : {2, 3}) {
      std::uint64_t total = 1;
      for (int i = 0; i < k; ++i) total *= p;
      for (std::uint64_t v = 0; v < total; ++v) {
        std::vector<std::uint64_t> poly(k + 1, 0);
        std::uint64_t w = v;
        for (int i = 0; i < k; ++i, w /= p) poly[i] = w % p;
        poly[k] = 1;
        bool has_root = false;
        for (std::uint64_t x = 0; x < p && !has_root; ++x) {
          std::uint64_t acc = 0;
          for (int i = k; i >= 0; --i) acc = (acc * x + poly[i]) % p;
          has_root = acc == 0;
        }
        CHECK(is_irreducible_mod_p(poly, p) == !has_root);
      }
    }
  }
}

TEST_CASE("inverse in F_7") {
  const auto f = FieldSpec::make(7, 1);
  CHECK(f.inv(f.from_int(3)) == f.from_int(5));
  CHECK(field_arith(f, FieldOp::Inv, f.from_int(3), std::uint64_t{0}) == f.from_int(5));
  CHECK(error_kind([&] { f.inv(f.zero()); }) == ErrorKind::DivisionByZero);
}

TEST_CASE("field_arith dispatch and mismatch") {
  const auto f = FieldSpec::make(5, 2);
  const auto a = f.element(7), b = f.element(13);
  CHECK(field_arith(f, FieldOp::Add, a, b) == f.add(a, b));
  CHECK(field_arith(f, FieldOp::Sub, a, b) == f.sub(a, b));
  CHECK(field_arith(f, FieldOp::Mul, a, b) == f.mul(a, b));
  CHECK(field_arith(f, FieldOp::Pow, a, std::uint64_t{24}) == f.one());
  CHECK(error_kind([&] { field_arith(f, FieldOp::Pow, a, b); }) == ErrorKind::InvalidExponent);
  CHECK(error_kind([&] { field_arith(f, FieldOp::Add, a, std::uint64_t{2}); }) == ErrorKind::FieldMismatch);
  const FieldElement foreign{{1, 2, 3}};
  CHECK(error_kind([&] { f.add(a, foreign); }) == ErrorKind::FieldMismatch);
  CHECK(error_kind([&] { f.mul(FieldElement{{5, 0}}, a); }) == ErrorKind::FieldMismatch);
}

TEST_CASE("field axioms hold exhaustively for q up to 49") {
  for (const auto& [p, k] : kSmallFields) {
    const auto f = FieldSpec::make(p, k);
    if (f.q() > 49) continue;
    const auto els = f.elements();
    CAPTURE(f.q());
    for (const auto& a : els) {
      CHECK(f.add(a, f.neg(a)) == f.zero());
      CHECK(f.mul(a, f.one()) == a);
      if (!(a == f.zero())) CHECK(f.mul(a, f.inv(a)) == f.one());
      CHECK(f.pow(a, f.q()) == a);
      for (const auto& b : els) {
        CHECK(f.add(a, b) == f.add(b, a));
        CHECK(f.mul(a, b) == f.mul(b, a));
        for (const auto& c : els) {
          if (f.mul(f.mul(a, b), c) != f.mul(a, f.mul(b, c))) FAIL("mul not associative");
          if (f.add(f.add(a, b), c) != f.add(a, f.add(b, c))) FAIL("add not associative");
          if (f.mul(a, f.add(b, c)) != f.add(f.mul(a, b), f.mul(a, c))) FAIL("not distributive");
        }
      }
    }
  }
}

TEST_CASE("index kernels agree with element arithmetic") {
  for (const auto& [p, k] : kSmallFields) {
    const auto f = FieldSpec::make(p, k);
    for (std::uint64_t a = 0; a < f.q(); ++a) {
      CHECK(f.neg_index(a) == f.index_of(f.neg(f.element(a))));
      CHECK(f.trace_index(a) == f.trace(f.element(a)));
      for (std::uint64_t b = 0; b < f.q(); ++b) {
        const auto ea = f.element(a), eb = f.element(b);
        if (f.add_index(a, b) != f.index_of(f.add(ea, eb))) FAIL("add_index");
        if (f.sub_index(a, b) != f.index_of(f.sub(ea, eb))) FAIL("sub_index");
        if (f.mul_index(a, b) != f.index_of(f.mul(ea, eb))) FAIL("mul_index");
        if (f.trace_pairing(a, b) != f.trace(f.mul(ea, eb))) FAIL("trace_pairing");
      }
    }
  }
}

TEST_CASE("enumeration is a bijection with zero first") {
  for (const auto& [p, k] : kSmallFields) {
    const auto f = FieldSpec::make(p, k);
    const auto els = f.elements();
    REQUIRE(els.size() == f.q());
    CHECK(els.front() == f.zero());
    std::set<std::vector<std::uint64_t>> seen;
    for (std::uint64_t i = 0; i < els.size(); ++i) {
      seen.insert(els[i].coeffs);
      CHECK(f.index_of(els[i]) == i);
      CHECK(f.contains(els[i]));
    }
    CHECK(seen.size() == f.q());
  }
  const auto f5 = FieldSpec::make(5, 1);
  for (std::uint64_t i = 0; i < 5; ++i) CHECK(f5.element(i) == f5.from_int(static_cast<std::int64_t>(i)));
}

TEST_CASE("trace by Frobenius sum") {
  for (const auto& [p, k] : kSmallFields) {
    const auto f = FieldSpec::make(p, k);
    CHECK(f.trace(f.zero()) == 0);
    for (const auto& a : f.elements()) {
      FieldElement sum = f.zero(), frob = a;
      for (int i = 0; i < k; ++i) {
        sum = f.add(sum, frob);
        frob = f.pow(frob, p);
      }
      // the sum lies in the prime subfield
      REQUIRE(f.index_of(sum) < p);
      CHECK(f.trace(a) == f.index_of(sum));
      if (k == 1) CHECK(f.trace(a) == a.coeffs[0]);
    }
  }
}

TEST_CASE("trace is F_p-linear") {
  for (const auto& [p, k] : kSmallFields) {
    const auto f = FieldSpec::make(p, k);
    if (f.q() > 49) continue;
    for (const auto& a : f.elements())
      for (const auto& b : f.elements())
        for (std::uint64_t c = 0; c < p; ++c) {
          const auto lhs = f.trace(f.add(f.mul(f.from_int(static_cast<std::int64_t>(c)), a), b));
          if (lhs != (c * f.trace(a) + f.trace(b)) % p) FAIL("trace not linear");
        }
  }
}

TEST_CASE("characters") {
  const auto f7 = FieldSpec::make(7, 1);
  const auto v = f7.character(f7.from_int(1), f7.from_int(3));
  CHECK(std::abs(v - std::polar(1.0, 6.0 * std::numbers::pi / 7.0)) < 1e-12);
  for (const auto& [p, k] : kSmallFields) {
    const auto f = FieldSpec::make(p, k);
    if (f.q() > 49) continue;
    const auto els = f.elements();
    for (const auto& x : els) CHECK(std::abs(f.character(f.zero(), x) - 1.0) < 1e-15);
    for (const auto& a : els) {
      for (const auto& x : els) {
        CHECK(std::abs(std::abs(f.character(a, x)) - 1.0) < 1e-12);
        for (const auto& y : els)
          if (std::abs(f.character(a, f.add(x, y)) - f.character(a, x) * f.character(a, y)) > 1e-12)
            FAIL("character not additive");
      }
      for (const auto& b : els) {
        Complex sum = 0.0;
        for (const auto& x : els) sum += f.character(a, x) * std::conj(f.character(b, x));
        const double expected = a == b ? static_cast<double>(f.q()) : 0.0;
        CHECK(std::abs(sum - expected) <= 1e-9);
      }
    }
  }
}

TEST_CASE("character table matches pointwise evaluation") {
  const auto f = FieldSpec::make(3, 3);
  const auto table = f.character_table();
  REQUIRE(table.size() == f.q() * f.q());
  for (std::uint64_t a = 0; a < f.q(); ++a)
    for (std::uint64_t x = 0; x < f.q(); ++x)
      CHECK(std::abs(table[a * f.q() + x] - f.character(f.element(a), f.element(x))) < 1e-14);
  CHECK(FieldSpec::make(1031, 1).character_table().empty());
}

TEST_CASE("large prime uses 128-bit products") {
  const std::uint64_t p = 4294967291ULL;  // largest prime below 2^32
  const auto f = FieldSpec::make(p, 1);
  const auto a = f.from_int(static_cast<std::int64_t>(p - 1));
  CHECK(f.mul(a, a) == f.one());
  CHECK(f.mul(f.inv(f.from_int(12345)), f.from_int(12345)) == f.one());
  CHECK(is_prime(p));
  CHECK_FALSE(is_prime(p - 2));
}
