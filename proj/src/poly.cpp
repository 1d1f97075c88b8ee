#include "ffprog/poly.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "ffprog/error.hpp"

namespace ffprog {

IntPoly::IntPoly(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

IntPoly::IntPoly(std::initializer_list<long long> coeffs) {
  for (long long c : coeffs) coeffs_.emplace_back(c);
  normalize();
}

void IntPoly::normalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

BigInt IntPoly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(coeffs_.size())) return 0;
  return coeffs_[i];
}

std::string IntPoly::render() const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const BigInt& c = coeffs_[i];
    if (c == 0) continue;
    const BigInt mag = abs(c);
    if (first) {
      if (c < 0) out << '-';
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (i == 0) {
      out << mag;
      continue;
    }
    if (mag != 1) out << mag;
    out << 'y';
    if (i > 1) out << '^' << i;
  }
  return out.str();
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
  std::vector<BigInt> r(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
  return IntPoly(std::move(r));
}

IntPoly operator-(const IntPoly& a) {
  std::vector<BigInt> r = a.coeffs_;
  for (auto& c : r) c = -c;
  return IntPoly(std::move(r));
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) { return a + (-b); }

IntPoly operator*(const BigInt& c, const IntPoly& a) {
  std::vector<BigInt> r = a.coeffs_;
  for (auto& x : r) x *= c;
  return IntPoly(std::move(r));
}

namespace {

class PolyParser {
 public:
  explicit PolyParser(std::string_view text) : text_(text) {}

  IntPoly parse() {
    std::map<int, BigInt> terms;
    skip_blanks();
    int sign = 1;
    if (peek() == '+' || peek() == '-') {
      sign = peek() == '-' ? -1 : 1;
      ++pos_;
    }
    for (;;) {
      parse_term(sign, terms);
      skip_blanks();
      if (pos_ == text_.size()) break;
      const char c = peek();
      if (c != '+' && c != '-') fail("expected '+' or '-'");
      sign = c == '-' ? -1 : 1;
      ++pos_;
    }
    std::vector<BigInt> coeffs;
    for (const auto& [deg, c] : terms) {
      if (coeffs.size() <= static_cast<std::size_t>(deg)) coeffs.resize(deg + 1);
      coeffs[deg] += c;
    }
    return IntPoly(std::move(coeffs));
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_blanks() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::SyntaxError, what + " at position " + std::to_string(pos_) + " in \"" +
                                            std::string(text_) + "\"");
  }

  bool read_digits(BigInt& out) {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) return false;
    out = BigInt(std::string(text_.substr(start, pos_ - start)));
    return true;
  }

  void parse_term(int sign, std::map<int, BigInt>& terms) {
    skip_blanks();
    BigInt coeff = 1;
    const bool has_int = read_digits(coeff);
    skip_blanks();
    int degree = 0;
    if (peek() == 'y') {
      ++pos_;
      degree = 1;
      skip_blanks();
      if (peek() == '^') {
        ++pos_;
        skip_blanks();
        BigInt e;
        if (!read_digits(e)) fail("expected exponent after '^'");
        if (e > 100000) fail("exponent too large");
        degree = static_cast<int>(e);
      }
    } else if (!has_int) {
      fail("expected a term");
    }
    terms[degree] += sign * coeff;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

IntPoly parse_poly(std::string_view text) { return PolyParser(text).parse(); }

std::vector<IntPoly> parse_poly_list(std::string_view text) {
  std::vector<IntPoly> out;
  if (text.find_first_not_of(" \t") == std::string_view::npos) return out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = text.find(',', start);
    out.push_back(parse_poly(text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                                 : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

DegreeSequence degree_sequence(std::span<const IntPoly> polys) {
  std::set<std::pair<int, BigInt>> leading;
  for (const auto& p : polys) {
    if (p.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "degree sequence of the zero polynomial");
    leading.emplace(p.degree(), p.leading_coefficient());
  }
  DegreeSequence v;
  for (const auto& [deg, c] : leading) ++v.counts[deg];
  return v;
}

BigInt bareiss_determinant(std::vector<std::vector<BigInt>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  BigInt sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row][k] == 0) ++swap_row;
      if (swap_row == n) return 0;
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

namespace {

std::vector<std::vector<BigInt>> coefficient_matrix(std::span<const IntPoly> polys) {
  int d = 0;
  for (const auto& p : polys) d = std::max(d, p.degree());
  std::vector<std::vector<BigInt>> m(d + 1, std::vector<BigInt>(polys.size()));
  for (std::size_t j = 0; j < polys.size(); ++j)
    for (int i = 0; i <= d; ++i) m[i][j] = polys[j].coeff(i);
  return m;
}

// Reduced row echelon form over Q; returns pivot columns.
std::vector<int> rref(std::vector<std::vector<Rational>>& a) {
  std::vector<int> pivots;
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[r], a[piv]);
    const Rational inv = 1 / a[r][c];
    for (auto& x : a[r]) x *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational f = a[i][c];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivots.push_back(static_cast<int>(c));
    ++r;
  }
  return pivots;
}

bool next_combination(std::vector<int>& comb, int n) {
  const int k = static_cast<int>(comb.size());
  int i = k - 1;
  while (i >= 0 && comb[i] == n - k + i) --i;
  if (i < 0) return false;
  ++comb[i];
  for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
  return true;
}

}  // namespace

IndependenceResult independence_certificate(std::span<const IntPoly> polys) {
  if (polys.empty()) throw Error(ErrorKind::EmptyInput, "no polynomials");
  const auto m = coefficient_matrix(polys);
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(polys.size());

  std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(cols));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) a[i][j] = Rational(m[i][j]);
  const auto pivots = rref(a);

  if (static_cast<int>(pivots.size()) < cols) {
    int free_col = 0;
    while (std::find(pivots.begin(), pivots.end(), free_col) != pivots.end()) ++free_col;
    std::vector<Rational> lambda(cols, 0);
    lambda[free_col] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) lambda[pivots[r]] = -a[r][free_col];
    BigInt lcm = 1;
    for (const auto& x : lambda) {
      const BigInt den = denominator(x);
      lcm = lcm / gcd(lcm, den) * den;
    }
    std::vector<BigInt> ints(cols);
    BigInt g = 0;
    for (int j = 0; j < cols; ++j) {
      ints[j] = numerator(lambda[j]) * (lcm / denominator(lambda[j]));
      g = gcd(g, abs(ints[j]));
    }
    const auto first = std::find_if(ints.begin(), ints.end(), [](const BigInt& x) { return x != 0; });
    const BigInt scale = (*first < 0) ? -g : g;
    for (auto& x : ints) x /= scale;
    return DependenceWitness{std::move(ints)};
  }

  std::vector<int> comb(cols);
  for (int j = 0; j < cols; ++j) comb[j] = j;
  do {
    std::vector<std::vector<BigInt>> minor(cols, std::vector<BigInt>(cols));
    for (int r = 0; r < cols; ++r)
      for (int c = 0; c < cols; ++c) minor[r][c] = m[comb[r]][c];
    BigInt det = bareiss_determinant(std::move(minor));
    if (det != 0) {
      std::vector<int> columns(cols);
      for (int j = 0; j < cols; ++j) columns[j] = j;
      return IndependenceCertificate{comb, std::move(columns), std::move(det)};
    }
  } while (next_combination(comb, rows));
  throw Error(ErrorKind::NumericalInconsistency, "full rank matrix without a nonzero minor");
}

BigInt characteristic_threshold(const IndependenceCertificate& cert) {
  BigInt n = abs(cert.determinant);
  BigInt largest = 1;
  for (BigInt d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      largest = d;
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) largest = n;
  return largest == 1 ? BigInt(2) : largest + 1;
}

ProgressionSystem::ProgressionSystem(std::vector<IntPoly> P, std::vector<IntPoly> Q, Unchecked)
    : P_(std::move(P)), Q_(std::move(Q)) {
  if (P_.empty()) throw Error(ErrorKind::EmptyInput, "a progression system needs at least one P");
  const auto polys = all();
  for (const auto& p : polys) {
    if (p.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "zero polynomial in system");
    if (!p.has_zero_constant_term())
      throw Error(ErrorKind::ConstantTerm, p.render() + " has a nonzero constant term");
  }
  for (std::size_t i = 0; i < polys.size(); ++i)
    for (std::size_t j = i + 1; j < polys.size(); ++j)
      if (polys[i] == polys[j]) throw Error(ErrorKind::DuplicatePolynomial, polys[i].render() + " repeated");
  auto result = independence_certificate(polys);
  if (std::holds_alternative<DependenceWitness>(result)) {
    independent_ = false;
    threshold_ = 0;
    return;
  }
  certificate_ = std::get<IndependenceCertificate>(std::move(result));
  threshold_ = characteristic_threshold(certificate_);
}

ProgressionSystem::ProgressionSystem(std::vector<IntPoly> P, std::vector<IntPoly> Q)
    : ProgressionSystem(std::move(P), std::move(Q), Unchecked{}) {
  if (independent_) return;
  auto result = independence_certificate(all());
  if (auto* w = std::get_if<DependenceWitness>(&result)) {
    std::ostringstream msg;
    msg << "polynomials are linearly dependent, lambda = (";
    for (std::size_t j = 0; j < w->lambda.size(); ++j) msg << (j ? ", " : "") << w->lambda[j];
    msg << ")";
    throw Error(ErrorKind::DependentSystem, msg.str());
  }
}

ProgressionSystem ProgressionSystem::allow_dependent(std::vector<IntPoly> P, std::vector<IntPoly> Q) {
  return ProgressionSystem(std::move(P), std::move(Q), Unchecked{});
}

ProgressionSystem ProgressionSystem::parse(std::string_view P, std::string_view Q) {
  return ProgressionSystem(parse_poly_list(P), parse_poly_list(Q));
}

std::vector<IntPoly> ProgressionSystem::all() const {
  std::vector<IntPoly> out = P_;
  out.insert(out.end(), Q_.begin(), Q_.end());
  return out;
}

std::string ProgressionSystem::describe() const {
  auto join = [](const std::vector<IntPoly>& ps) {
    std::string s;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (i) s += ",";
      std::string r = ps[i].render();
      r.erase(std::remove(r.begin(), r.end(), ' '), r.end());
      s += r;
    }
    return s;
  };
  return Q_.empty() ? join(P_) : join(P_) + ";" + join(Q_);
}

std::uint64_t reduce_mod(const BigInt& c, std::uint64_t p) {
  BigInt r = c % p;
  if (r < 0) r += p;
  return static_cast<std::uint64_t>(r);
}

FieldElement reduce_and_eval(const IntPoly& poly, const FieldSpec& field, const FieldElement& y) {
  FieldElement acc = field.zero();
  for (int i = poly.degree(); i >= 0; --i) {
    FieldElement c = field.zero();
    c.coeffs[0] = reduce_mod(poly.coeffs()[i], field.p());
    acc = field.add(field.mul(acc, y), c);
  }
  return acc;
}

std::vector<std::uint64_t> evaluation_table(const IntPoly& poly, const FieldSpec& field) {
  const std::uint64_t q = field.q();
  std::vector<std::uint64_t> reduced(poly.coeffs().size());
  for (std::size_t i = 0; i < reduced.size(); ++i) reduced[i] = reduce_mod(poly.coeffs()[i], field.p());
  std::vector<std::uint64_t> table(q);
  for (std::uint64_t y = 0; y < q; ++y) {
    std::uint64_t acc = 0;
    for (int i = poly.degree(); i >= 0; --i) acc = field.add_index(field.mul_index(acc, y), reduced[i]);
    table[y] = acc;
  }
  return table;
}

}  // namespace ffprog
