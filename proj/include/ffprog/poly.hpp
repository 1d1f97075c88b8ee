#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ffprog/field.hpp"

namespace ffprog {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Integer polynomial in y; coeffs()[i] multiplies y^i. Trailing zeros are
/// stripped, so the zero polynomial has no coefficients and degree -1.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<BigInt> coeffs);
  IntPoly(std::initializer_list<long long> coeffs);

  const std::vector<BigInt>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  /// Membership in Z[y]_0.
  bool has_zero_constant_term() const { return coeffs_.empty() || coeffs_[0] == 0; }
  BigInt coeff(int i) const;
  const BigInt& leading_coefficient() const { return coeffs_.back(); }

  /// Canonical text  a_d y^d + ... + a_1 y + a_0 ; "0" for the zero polynomial.
  std::string render() const;

  friend IntPoly operator+(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator-(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator-(const IntPoly& a);
  friend IntPoly operator*(const BigInt& c, const IntPoly& a);
  friend bool operator==(const IntPoly&, const IntPoly&) = default;

 private:
  void normalize();
  std::vector<BigInt> coeffs_;
};

/// Grammar:  term (("+"|"-") term)*   with  term = [int]["y"["^"int]].
/// A leading sign and blanks between tokens are accepted. Like terms are
/// collected. Throws SyntaxError naming the byte offset.
IntPoly parse_poly(std::string_view text);

/// Comma-separated list of polynomials, e.g. "y, y^2+3y".
std::vector<IntPoly> parse_poly_list(std::string_view text);

struct DegreeSequence {
  std::map<int, int> counts;  // degree -> number of distinct leading terms; zeros omitted

  int operator[](int degree) const {
    const auto it = counts.find(degree);
    return it == counts.end() ? 0 : it->second;
  }
  friend bool operator==(const DegreeSequence&, const DegreeSequence&) = default;
};

/// Throws ZeroPolynomial if any input is zero.
DegreeSequence degree_sequence(std::span<const IntPoly> polys);

/// A nonvanishing m x m minor of the (d+1) x m coefficient matrix
/// (row i = coefficient of y^i, column j = polynomial j).
struct IndependenceCertificate {
  std::vector<int> rows;
  std::vector<int> columns;
  BigInt determinant;
};

/// Integer vector lambda, primitive with first nonzero entry positive,
/// with sum_j lambda_j P_j = 0.
struct DependenceWitness {
  std::vector<BigInt> lambda;
};

using IndependenceResult = std::variant<IndependenceCertificate, DependenceWitness>;

/// Exact test of linear independence over Q. The certificate uses the
/// lexicographically first row set whose minor is nonzero. Throws EmptyInput.
IndependenceResult independence_certificate(std::span<const IntPoly> polys);

/// Fraction-free (Bareiss) determinant of a square integer matrix.
BigInt bareiss_determinant(std::vector<std::vector<BigInt>> m);

/// 1 + the largest prime dividing |C|, or 2 when |C| = 1. Primes at or above
/// this value cannot divide the certificate minor.
BigInt characteristic_threshold(const IndependenceCertificate& cert);

/// Progression system x, x+P_1(y), ..., x+P_{m1}(y) twisted by Q_1..Q_{m2}.
/// Construction enforces: m1 >= 1, every polynomial nonzero and in Z[y]_0,
/// pairwise distinct, and P u Q linearly independent over Q.
class ProgressionSystem {
 public:
  ProgressionSystem(std::vector<IntPoly> P, std::vector<IntPoly> Q = {});

  /// Same checks except independence, for plain progression counting with
  /// families such as {y, 2y}. A dependent system has no certificate, and
  /// admits_characteristic is false for every p.
  static ProgressionSystem allow_dependent(std::vector<IntPoly> P, std::vector<IntPoly> Q = {});

  /// Convenience: comma-separated polynomial lists.
  static ProgressionSystem parse(std::string_view P, std::string_view Q = "");

  const std::vector<IntPoly>& P() const { return P_; }
  const std::vector<IntPoly>& Q() const { return Q_; }
  std::size_t m1() const { return P_.size(); }
  std::size_t m2() const { return Q_.size(); }
  /// P followed by Q.
  std::vector<IntPoly> all() const;

  const IndependenceCertificate& certificate() const { return certificate_; }
  /// Smallest safe characteristic for this certificate's minor.
  const BigInt& threshold() const { return threshold_; }
  bool admits_characteristic(std::uint64_t p) const { return independent_ && BigInt(p) >= threshold_; }
  bool independent() const { return independent_; }

  /// "y,y^2" or "y,y^2;y^3" when twisted.
  std::string describe() const;

 private:
  std::vector<IntPoly> P_;
  std::vector<IntPoly> Q_;
  IndependenceCertificate certificate_;
  BigInt threshold_;
  bool independent_ = true;

  struct Unchecked {};
  ProgressionSystem(std::vector<IntPoly> P, std::vector<IntPoly> Q, Unchecked);
};

inline BigInt characteristic_threshold(const ProgressionSystem& system) { return system.threshold(); }

/// c mod p in [0, p).
std::uint64_t reduce_mod(const BigInt& c, std::uint64_t p);

/// Reduce coefficients mod p and evaluate at y by Horner's scheme.
FieldElement reduce_and_eval(const IntPoly& poly, const FieldSpec& field, const FieldElement& y);

/// Index of P(y) for every y, in enumeration order.
std::vector<std::uint64_t> evaluation_table(const IntPoly& poly, const FieldSpec& field);

}  // namespace ffprog
