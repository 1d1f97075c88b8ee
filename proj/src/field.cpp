#include "ffprog/field.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "ffprog/error.hpp"

namespace ffprog {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using Poly = std::vector<u64>;  // over F_p, low degree first

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }
u64 addmod(u64 a, u64 b, u64 p) { return a >= p - b ? a - (p - b) : a + b; }
u64 submod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + (p - b); }

u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1 % p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

// Remainder of f modulo a monic m.
Poly poly_rem_monic(Poly f, const Poly& m, u64 p) {
  const std::size_t dm = m.size() - 1;
  trim(f);
  while (f.size() > dm) {
    const u64 lead = f.back();
    const std::size_t shift = f.size() - 1 - dm;
    for (std::size_t i = 0; i < dm; ++i) f[shift + i] = submod(f[shift + i], mulmod(lead, m[i], p), p);
    f.pop_back();
    trim(f);
  }
  return f;
}

Poly poly_mul(const Poly& a, const Poly& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = addmod(r[i + j], mulmod(a[i], b[j], p), p);
  }
  return r;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, u64 p) {
  return poly_rem_monic(poly_mul(a, b, p), m, p);
}

Poly poly_powmod(Poly base, u64 e, const Poly& m, u64 p) {
  Poly r{1};
  base = poly_rem_monic(std::move(base), m, p);
  while (e) {
    if (e & 1) r = poly_mulmod(r, base, m, p);
    base = poly_mulmod(base, base, m, p);
    e >>= 1;
  }
  return r;
}

// Generic remainder (divisor need not be monic).
Poly poly_rem(Poly f, Poly g, u64 p) {
  trim(f);
  trim(g);
  const u64 lead_inv = invmod(g.back(), p);
  const std::size_t dg = g.size() - 1;
  while (f.size() > dg) {
    const u64 c = mulmod(f.back(), lead_inv, p);
    const std::size_t shift = f.size() - 1 - dg;
    for (std::size_t i = 0; i <= dg; ++i) f[shift + i] = submod(f[shift + i], mulmod(c, g[i], p), p);
    trim(f);
  }
  return f;
}

Poly poly_gcd(Poly a, Poly b, u64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> out;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (u64 d = 3; d <= n / d; d += 2)
    if (n % d == 0) return false;
  return true;
}

bool is_irreducible_mod_p(std::span<const std::uint64_t> monic, std::uint64_t p) {
  Poly f(monic.begin(), monic.end());
  trim(f);
  if (f.size() < 2 || f.back() != 1) return false;
  const u64 k = f.size() - 1;
  if (k == 1) return true;
  // t^{p^i} mod f for i = 0..k
  std::vector<Poly> frob(k + 1);
  frob[0] = poly_rem_monic(Poly{0, 1}, f, p);
  for (u64 i = 1; i <= k; ++i) frob[i] = poly_powmod(frob[i - 1], p, f, p);
  auto minus_t = [&](Poly g) {
    g.resize(std::max<std::size_t>(g.size(), 2), 0);
    g[1] = submod(g[1], 1, p);
    trim(g);
    return g;
  };
  if (!minus_t(frob[k]).empty()) return false;
  for (u64 r : prime_factors(k)) {
    const Poly g = poly_gcd(f, minus_t(frob[k / r]), p);
    if (g.size() != 1) return false;
  }
  return true;
}

struct FieldSpec::Impl {
  u64 p = 0;
  int k = 0;
  u64 q = 0;
  Poly modulus;
  std::vector<u64> pow_p;          // p^i, i < k
  std::vector<u64> trace_powers;   // Tr(t^j), j <= 2k-2
  std::vector<Complex> roots;      // exp(2 pi i r / p), empty for very large p
  mutable std::once_flag table_once;
  mutable std::vector<Complex> table;
};

FieldSpec FieldSpec::make(std::uint64_t p, int k, std::optional<std::vector<std::uint64_t>> modulus) {
  if (!is_prime(p)) throw Error(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
  if (k < 1) throw Error(ErrorKind::DegreeMismatch, "extension degree must be >= 1");
  u64 q = 1;
  for (int i = 0; i < k; ++i) {
    if (q > (u64{1} << 62) / p) throw Error(ErrorKind::InvalidRange, "p^k does not fit in 62 bits");
    q *= p;
  }

  auto impl = std::make_shared<Impl>();
  impl->p = p;
  impl->k = k;
  impl->q = q;
  impl->pow_p.resize(k);
  impl->pow_p[0] = 1;
  for (int i = 1; i < k; ++i) impl->pow_p[i] = impl->pow_p[i - 1] * p;

  if (modulus) {
    const auto& m = *modulus;
    if (m.size() != static_cast<std::size_t>(k) + 1 || m.back() != 1)
      throw Error(ErrorKind::DegreeMismatch, "modulus must be monic of degree " + std::to_string(k));
    for (u64 c : m)
      if (c >= p) throw Error(ErrorKind::InvalidRange, "modulus coefficient not reduced mod p");
    if (!is_irreducible_mod_p(m, p)) throw Error(ErrorKind::ReducibleModulus, "modulus is reducible over F_p");
    impl->modulus = m;
  } else {
    Poly m(k + 1, 0);
    m[k] = 1;
    for (u64 idx = 0; idx < q; ++idx) {
      u64 v = idx;
      for (int i = 0; i < k; ++i) {
        m[i] = v % p;
        v /= p;
      }
      if (is_irreducible_mod_p(m, p)) break;
    }
    impl->modulus = m;
  }

  // Tr(t^j) by the Frobenius definition, for j up to 2k-2.
  const Poly& mod = impl->modulus;
  impl->trace_powers.resize(2 * k - 1);
  for (int j = 0; j <= 2 * k - 2; ++j) {
    Poly tj(j + 1, 0);
    tj[j] = 1;
    tj = poly_rem_monic(tj, mod, p);
    Poly acc;
    Poly frob = tj;
    for (int i = 0; i < k; ++i) {
      acc.resize(std::max(acc.size(), frob.size()), 0);
      for (std::size_t c = 0; c < frob.size(); ++c) acc[c] = addmod(acc[c], frob[c], p);
      frob = poly_powmod(frob, p, mod, p);
    }
    trim(acc);
    impl->trace_powers[j] = acc.empty() ? 0 : acc[0];
  }

  constexpr u64 kRootTableLimit = u64{1} << 22;
  if (p <= kRootTableLimit) {
    impl->roots.resize(p);
    for (u64 r = 0; r < p; ++r) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(p);
      impl->roots[r] = {std::cos(theta), std::sin(theta)};
    }
  }
  return FieldSpec(std::move(impl));
}

std::uint64_t FieldSpec::p() const { return impl_->p; }
int FieldSpec::k() const { return impl_->k; }
std::uint64_t FieldSpec::q() const { return impl_->q; }
const std::vector<std::uint64_t>& FieldSpec::modulus() const { return impl_->modulus; }

bool operator==(const FieldSpec& a, const FieldSpec& b) {
  return a.impl_ == b.impl_ || (a.impl_->p == b.impl_->p && a.impl_->modulus == b.impl_->modulus);
}

bool FieldSpec::contains(const FieldElement& a) const {
  if (a.coeffs.size() != static_cast<std::size_t>(impl_->k)) return false;
  return std::all_of(a.coeffs.begin(), a.coeffs.end(), [&](u64 c) { return c < impl_->p; });
}

void FieldSpec::check(const FieldElement& a) const {
  if (!contains(a)) throw Error(ErrorKind::FieldMismatch, "element does not belong to this field");
}

FieldElement FieldSpec::element(std::uint64_t index) const {
  if (index >= impl_->q) throw Error(ErrorKind::ElementOutOfField, "index " + std::to_string(index));
  FieldElement e;
  e.coeffs.resize(impl_->k);
  for (int i = 0; i < impl_->k; ++i) {
    e.coeffs[i] = index % impl_->p;
    index /= impl_->p;
  }
  return e;
}

std::uint64_t FieldSpec::index_of(const FieldElement& a) const {
  check(a);
  u64 idx = 0;
  for (int i = impl_->k - 1; i >= 0; --i) idx = idx * impl_->p + a.coeffs[i];
  return idx;
}

std::vector<FieldElement> FieldSpec::elements() const {
  std::vector<FieldElement> out;
  out.reserve(impl_->q);
  for (u64 i = 0; i < impl_->q; ++i) out.push_back(element(i));
  return out;
}

FieldElement FieldSpec::zero() const { return FieldElement{std::vector<u64>(impl_->k, 0)}; }

FieldElement FieldSpec::one() const {
  FieldElement e = zero();
  e.coeffs[0] = 1 % impl_->p;
  return e;
}

FieldElement FieldSpec::from_int(std::int64_t v) const {
  FieldElement e = zero();
  const u64 magnitude = v < 0 ? static_cast<u64>(-(v + 1)) + 1 : static_cast<u64>(v);
  u64 r = magnitude % impl_->p;
  if (v < 0 && r != 0) r = impl_->p - r;
  e.coeffs[0] = r;
  return e;
}

FieldElement FieldSpec::add(const FieldElement& a, const FieldElement& b) const {
  check(a);
  check(b);
  FieldElement r = a;
  for (int i = 0; i < impl_->k; ++i) r.coeffs[i] = addmod(a.coeffs[i], b.coeffs[i], impl_->p);
  return r;
}

FieldElement FieldSpec::sub(const FieldElement& a, const FieldElement& b) const {
  check(a);
  check(b);
  FieldElement r = a;
  for (int i = 0; i < impl_->k; ++i) r.coeffs[i] = submod(a.coeffs[i], b.coeffs[i], impl_->p);
  return r;
}

FieldElement FieldSpec::neg(const FieldElement& a) const { return sub(zero(), a); }

FieldElement FieldSpec::mul(const FieldElement& a, const FieldElement& b) const {
  check(a);
  check(b);
  Poly r = poly_mulmod(a.coeffs, b.coeffs, impl_->modulus, impl_->p);
  r.resize(impl_->k, 0);
  return FieldElement{std::move(r)};
}

FieldElement FieldSpec::pow(const FieldElement& a, std::uint64_t e) const {
  check(a);
  Poly r = poly_powmod(a.coeffs, e, impl_->modulus, impl_->p);
  r.resize(impl_->k, 0);
  return FieldElement{std::move(r)};
}

FieldElement FieldSpec::inv(const FieldElement& a) const {
  check(a);
  if (a == zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero");
  if (impl_->k == 1) return FieldElement{{invmod(a.coeffs[0], impl_->p)}};
  // a^{q-2}
  return pow(a, impl_->q - 2);
}

std::uint64_t FieldSpec::trace(const FieldElement& a) const {
  check(a);
  FieldElement acc = zero();
  FieldElement frob = a;
  for (int i = 0; i < impl_->k; ++i) {
    acc = add(acc, frob);
    frob = pow(frob, impl_->p);
  }
  // The trace lies in the prime subfield.
  return acc.coeffs[0];
}

Complex FieldSpec::character(const FieldElement& a, const FieldElement& x) const {
  return root_of_unity(trace(mul(a, x)));
}

std::uint64_t FieldSpec::add_index(std::uint64_t a, std::uint64_t b) const {
  const u64 p = impl_->p;
  if (impl_->k == 1) return addmod(a, b, p);
  u64 r = 0;
  for (int i = 0; i < impl_->k; ++i) {
    r += addmod(a % p, b % p, p) * impl_->pow_p[i];
    a /= p;
    b /= p;
  }
  return r;
}

std::uint64_t FieldSpec::sub_index(std::uint64_t a, std::uint64_t b) const {
  const u64 p = impl_->p;
  if (impl_->k == 1) return submod(a, b, p);
  u64 r = 0;
  for (int i = 0; i < impl_->k; ++i) {
    r += submod(a % p, b % p, p) * impl_->pow_p[i];
    a /= p;
    b /= p;
  }
  return r;
}

std::uint64_t FieldSpec::neg_index(std::uint64_t a) const { return sub_index(0, a); }

std::uint64_t FieldSpec::mul_index(std::uint64_t a, std::uint64_t b) const {
  if (impl_->k == 1) return mulmod(a, b, impl_->p);
  return index_of(mul(element(a), element(b)));
}

std::uint64_t FieldSpec::trace_index(std::uint64_t a) const {
  const u64 p = impl_->p;
  u64 t = 0;
  for (int i = 0; i < impl_->k; ++i) {
    t = addmod(t, mulmod(a % p, impl_->trace_powers[i], p), p);
    a /= p;
  }
  return t;
}

std::uint64_t FieldSpec::trace_pairing(std::uint64_t a, std::uint64_t x) const {
  const u64 p = impl_->p;
  if (impl_->k == 1) return mulmod(a, x, p);
  const int k = impl_->k;
  u64 ad[64];
  u64 xd[64];
  for (int i = 0; i < k; ++i) {
    ad[i] = a % p;
    a /= p;
    xd[i] = x % p;
    x /= p;
  }
  u64 t = 0;
  for (int i = 0; i < k; ++i) {
    if (ad[i] == 0) continue;
    for (int j = 0; j < k; ++j) {
      if (xd[j] == 0) continue;
      t = addmod(t, mulmod(mulmod(ad[i], xd[j], p), impl_->trace_powers[i + j], p), p);
    }
  }
  return t;
}

Complex FieldSpec::root_of_unity(std::uint64_t r) const {
  r %= impl_->p;
  if (!impl_->roots.empty()) return impl_->roots[r];
  const long double theta = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(r) /
                            static_cast<long double>(impl_->p);
  return {static_cast<double>(std::cos(theta)), static_cast<double>(std::sin(theta))};
}

Complex FieldSpec::character_index(std::uint64_t a, std::uint64_t x) const {
  if (impl_->q <= kCharacterTableLimit) return character_table()[a * impl_->q + x];
  return root_of_unity(trace_pairing(a, x));
}

std::span<const Complex> FieldSpec::character_table() const {
  if (impl_->q > kCharacterTableLimit) return {};
  std::call_once(impl_->table_once, [this] {
    const u64 q = impl_->q;
    std::vector<Complex> t(q * q);
    for (u64 a = 0; a < q; ++a)
      for (u64 x = 0; x < q; ++x) t[a * q + x] = root_of_unity(trace_pairing(a, x));
    impl_->table = std::move(t);
  });
  return impl_->table;
}

FieldElement field_arith(const FieldSpec& field, FieldOp op, const FieldElement& a,
                         const std::variant<FieldElement, std::uint64_t>& rhs) {
  auto element_rhs = [&]() -> const FieldElement& {
    if (const auto* b = std::get_if<FieldElement>(&rhs)) return *b;
    throw Error(ErrorKind::FieldMismatch, "operation needs a field element operand");
  };
  switch (op) {
    case FieldOp::Add: return field.add(a, element_rhs());
    case FieldOp::Sub: return field.sub(a, element_rhs());
    case FieldOp::Mul: return field.mul(a, element_rhs());
    case FieldOp::Inv: return field.inv(a);
    case FieldOp::Pow: {
      if (const auto* e = std::get_if<std::uint64_t>(&rhs)) return field.pow(a, *e);
      throw Error(ErrorKind::InvalidExponent, "pow needs an integer exponent");
    }
  }
  throw Error(ErrorKind::Usage, "unknown field operation");
}

}  // namespace ffprog
