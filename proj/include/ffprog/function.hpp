#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "ffprog/field.hpp"
#include "ffprog/random.hpp"
#include "json.hpp"

namespace ffprog {

/// f : F_q -> C, values indexed by field enumeration order.
class DenseFunction {
 public:
  /// Throws ShapeMismatch unless values.size() == q.
  DenseFunction(FieldSpec field, std::vector<Complex> values);

  static DenseFunction constant(const FieldSpec& field, Complex c);
  static DenseFunction zero(const FieldSpec& field) { return constant(field, 0.0); }
  /// psi_a as a function.
  static DenseFunction character(const FieldSpec& field, std::uint64_t a);

  const FieldSpec& field() const { return field_; }
  std::span<const Complex> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  Complex operator[](std::uint64_t x) const { return values_[x]; }

  /// max |f| <= 1 + 1e-12.
  bool one_bounded() const;
  /// E_x f(x).
  Complex mean() const;
  DenseFunction conj() const;

  friend DenseFunction operator+(const DenseFunction& a, const DenseFunction& b);
  friend DenseFunction operator-(const DenseFunction& a, const DenseFunction& b);
  friend DenseFunction operator*(Complex c, const DenseFunction& a);
  /// Pointwise product.
  friend DenseFunction operator*(const DenseFunction& a, const DenseFunction& b);

 private:
  FieldSpec field_;
  std::vector<Complex> values_;
};

/// F : F_q^2 -> C, row-major with the first variable selecting the row.
class TwoVarFunction {
 public:
  TwoVarFunction(FieldSpec field, std::vector<Complex> values);

  const FieldSpec& field() const { return field_; }
  std::span<const Complex> values() const { return values_; }
  Complex at(std::uint64_t x, std::uint64_t y) const { return values_[x * field_.q() + y]; }
  bool one_bounded() const;

 private:
  FieldSpec field_;
  std::vector<Complex> values_;
};

/// coeffs[a] = <f, psi_a> = E_x f(x) conj(psi_a(x)).
struct FourierCoefficients {
  FieldSpec field;
  std::vector<Complex> coeffs;
};

inline constexpr double kOneBoundedSlack = 1e-12;

/// Throws ElementOutOfField for foreign elements.
DenseFunction indicator(const FieldSpec& field, std::span<const FieldElement> subset);
DenseFunction indicator_of_indices(const FieldSpec& field, std::span<const std::uint64_t> subset);

/// Direct O(q^2) transform against the character table.
FourierCoefficients fourier_transform(const DenseFunction& f);
/// f(x) = sum_a coeffs[a] psi_a(x).
DenseFunction inverse_fourier(const FourierCoefficients& coeffs);

/// Delta_h f(x) = f(x+h) conj(f(x)).
DenseFunction delta(const DenseFunction& f, std::uint64_t h);
/// Iterated differencing; the empty list returns f.
DenseFunction delta_multi(const DenseFunction& f, std::span<const FieldElement> hs);
DenseFunction delta_multi_indices(const DenseFunction& f, std::span<const std::uint64_t> hs);

/// Differencing in the first variable only.
TwoVarFunction delta_first_var(const TwoVarFunction& F, std::span<const FieldElement> hs);
TwoVarFunction delta_first_var_indices(const TwoVarFunction& F, std::span<const std::uint64_t> hs);

/// Averaged norm (E_x |f|^p)^{1/p}; p = infinity gives the sup norm.
/// Throws InvalidExponent for p < 1 or NaN.
double lp_norm(const DenseFunction& f, double p);
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// <f, g> = E_x f(x) conj(g(x)). Throws FieldMismatch.
Complex inner(const DenseFunction& f, const DenseFunction& g);

DenseFunction random_one_bounded(const FieldSpec& field, SplitMix64& rng);
/// |f(x)| = 1 everywhere, uniform phases; L2 norm exactly 1.
DenseFunction random_unimodular(const FieldSpec& field, SplitMix64& rng);
TwoVarFunction random_one_bounded_two_var(const FieldSpec& field, SplitMix64& rng);

/// {"p":..,"k":..,"modulus":[..],"values":[[re,im],..]}
nlohmann::json to_json(const DenseFunction& f);
/// Accepts the form above; "modulus" is optional (canonical modulus if absent).
DenseFunction function_from_json(const nlohmann::json& j);

}  // namespace ffprog
