#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace ffprog {

using Complex = std::complex<double>;

/// Element of GF(p^k) in the power basis of the field modulus:
/// coeffs[i] is the coordinate of t^i, always reduced into [0, p).
struct FieldElement {
  std::vector<std::uint64_t> coeffs;

  friend bool operator==(const FieldElement&, const FieldElement&) = default;
};

/// GF(p^k) with an explicit monic irreducible modulus.
///
/// Elements are enumerated by the base-p index  sum_i coeffs[i] * p^i,  which
/// is lexicographic order on (c_{k-1}, ..., c_0) with zero first; the prime
/// subfield occupies indices [0, p). Function tables throughout the library
/// are laid out in this order.
///
/// Copies share immutable tables and are cheap; every member is safe to call
/// concurrently.
class FieldSpec {
 public:
  /// Throws NotPrime, DegreeMismatch, InvalidRange, ReducibleModulus.
  /// With no modulus the smallest monic irreducible (by index of its lower
  /// coefficients) is chosen; for k = 1 this is t itself.
  static FieldSpec make(std::uint64_t p, int k,
                        std::optional<std::vector<std::uint64_t>> modulus = std::nullopt);

  std::uint64_t p() const;
  int k() const;
  std::uint64_t q() const;
  /// k+1 coefficients, low degree first, leading coefficient 1.
  const std::vector<std::uint64_t>& modulus() const;

  friend bool operator==(const FieldSpec& a, const FieldSpec& b);

  // Element view.
  FieldElement element(std::uint64_t index) const;
  std::uint64_t index_of(const FieldElement& a) const;
  std::vector<FieldElement> elements() const;
  FieldElement zero() const;
  FieldElement one() const;
  /// Image of an integer under Z -> F_p -> F_q.
  FieldElement from_int(std::int64_t v) const;
  bool contains(const FieldElement& a) const;

  FieldElement add(const FieldElement& a, const FieldElement& b) const;
  FieldElement sub(const FieldElement& a, const FieldElement& b) const;
  FieldElement neg(const FieldElement& a) const;
  FieldElement mul(const FieldElement& a, const FieldElement& b) const;
  /// Throws DivisionByZero for a = 0.
  FieldElement inv(const FieldElement& a) const;
  FieldElement pow(const FieldElement& a, std::uint64_t e) const;

  /// a + a^p + ... + a^{p^{k-1}}, computed with Frobenius powers.
  std::uint64_t trace(const FieldElement& a) const;
  /// psi_a(x) = exp(2 pi i Tr(a x) / p).
  Complex character(const FieldElement& a, const FieldElement& x) const;

  // Index-level kernels used by the counting and Fourier loops.
  std::uint64_t add_index(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t sub_index(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t neg_index(std::uint64_t a) const;
  std::uint64_t mul_index(std::uint64_t a, std::uint64_t b) const;
  /// Tr(a) through the precomputed linear form Tr(t^j).
  std::uint64_t trace_index(std::uint64_t a) const;
  /// Tr(a x) through the bilinear form Tr(t^{i+j}); no field multiplication.
  std::uint64_t trace_pairing(std::uint64_t a, std::uint64_t x) const;
  /// exp(2 pi i r / p).
  Complex root_of_unity(std::uint64_t r) const;
  Complex character_index(std::uint64_t a, std::uint64_t x) const;
  /// Index of the conjugate character: conj(psi_a) = psi_{-a}.
  std::uint64_t conj_character(std::uint64_t a) const { return neg_index(a); }

  /// Largest q for which character_table() is materialized.
  static constexpr std::uint64_t kCharacterTableLimit = 1024;
  /// Row-major q x q table, entry [a*q + x] = psi_a(x). Built on first use;
  /// empty when q exceeds kCharacterTableLimit.
  std::span<const Complex> character_table() const;

 private:
  struct Impl;
  explicit FieldSpec(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  void check(const FieldElement& a) const;

  std::shared_ptr<const Impl> impl_;
};

/// Trial-division primality test.
bool is_prime(std::uint64_t n);

/// Rabin irreducibility test for a monic polynomial over F_p (low degree first).
bool is_irreducible_mod_p(std::span<const std::uint64_t> monic, std::uint64_t p);

enum class FieldOp { Add, Sub, Mul, Inv, Pow };

/// Single entry point over the arithmetic members. `rhs` is an element for
/// Add/Sub/Mul, an exponent for Pow, and ignored for Inv.
FieldElement field_arith(const FieldSpec& field, FieldOp op, const FieldElement& a,
                         const std::variant<FieldElement, std::uint64_t>& rhs);

}  // namespace ffprog
