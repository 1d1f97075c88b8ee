#include "ffprog/function.hpp"

#include <cmath>
#include <string>

#include "ffprog/error.hpp"
#include "ffprog/numeric.hpp"

namespace ffprog {

namespace {

void require_same_field(const FieldSpec& a, const FieldSpec& b) {
  if (!(a == b)) throw Error(ErrorKind::FieldMismatch, "functions live on different fields");
}

}  // namespace

DenseFunction::DenseFunction(FieldSpec field, std::vector<Complex> values)
    : field_(std::move(field)), values_(std::move(values)) {
  if (values_.size() != field_.q())
    throw Error(ErrorKind::ShapeMismatch,
                "expected " + std::to_string(field_.q()) + " values, got " + std::to_string(values_.size()));
}

DenseFunction DenseFunction::constant(const FieldSpec& field, Complex c) {
  return DenseFunction(field, std::vector<Complex>(field.q(), c));
}

DenseFunction DenseFunction::character(const FieldSpec& field, std::uint64_t a) {
  std::vector<Complex> v(field.q());
  for (std::uint64_t x = 0; x < field.q(); ++x) v[x] = field.character_index(a, x);
  return DenseFunction(field, std::move(v));
}

bool DenseFunction::one_bounded() const {
  for (const auto& v : values_)
    if (std::abs(v) > 1.0 + kOneBoundedSlack) return false;
  return true;
}

Complex DenseFunction::mean() const { return pairwise_sum(values_) / static_cast<double>(values_.size()); }

DenseFunction DenseFunction::conj() const {
  std::vector<Complex> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::conj(values_[i]);
  return DenseFunction(field_, std::move(v));
}

DenseFunction operator+(const DenseFunction& a, const DenseFunction& b) {
  require_same_field(a.field_, b.field_);
  std::vector<Complex> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values_[i] + b.values_[i];
  return DenseFunction(a.field_, std::move(v));
}

DenseFunction operator-(const DenseFunction& a, const DenseFunction& b) {
  require_same_field(a.field_, b.field_);
  std::vector<Complex> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values_[i] - b.values_[i];
  return DenseFunction(a.field_, std::move(v));
}

DenseFunction operator*(Complex c, const DenseFunction& a) {
  std::vector<Complex> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = c * a.values_[i];
  return DenseFunction(a.field_, std::move(v));
}

DenseFunction operator*(const DenseFunction& a, const DenseFunction& b) {
  require_same_field(a.field_, b.field_);
  std::vector<Complex> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values_[i] * b.values_[i];
  return DenseFunction(a.field_, std::move(v));
}

TwoVarFunction::TwoVarFunction(FieldSpec field, std::vector<Complex> values)
    : field_(std::move(field)), values_(std::move(values)) {
  if (values_.size() != field_.q() * field_.q())
    throw Error(ErrorKind::ShapeMismatch, "two-variable function needs q*q values");
}

bool TwoVarFunction::one_bounded() const {
  for (const auto& v : values_)
    if (std::abs(v) > 1.0 + kOneBoundedSlack) return false;
  return true;
}

DenseFunction indicator(const FieldSpec& field, std::span<const FieldElement> subset) {
  std::vector<Complex> v(field.q(), 0.0);
  for (const auto& e : subset) {
    if (!field.contains(e)) throw Error(ErrorKind::ElementOutOfField, "subset element not in field");
    v[field.index_of(e)] = 1.0;
  }
  return DenseFunction(field, std::move(v));
}

DenseFunction indicator_of_indices(const FieldSpec& field, std::span<const std::uint64_t> subset) {
  std::vector<Complex> v(field.q(), 0.0);
  for (auto x : subset) {
    if (x >= field.q()) throw Error(ErrorKind::ElementOutOfField, "index " + std::to_string(x));
    v[x] = 1.0;
  }
  return DenseFunction(field, std::move(v));
}

FourierCoefficients fourier_transform(const DenseFunction& f) {
  const FieldSpec& field = f.field();
  const std::uint64_t q = field.q();
  const auto table = field.character_table();
  FourierCoefficients out{field, std::vector<Complex>(q)};
  std::vector<Complex> terms(q);
  for (std::uint64_t a = 0; a < q; ++a) {
    for (std::uint64_t x = 0; x < q; ++x) {
      const Complex chi = table.empty() ? field.character_index(a, x) : table[a * q + x];
      terms[x] = f[x] * std::conj(chi);
    }
    out.coeffs[a] = pairwise_sum(terms) / static_cast<double>(q);
  }
  return out;
}

DenseFunction inverse_fourier(const FourierCoefficients& c) {
  const FieldSpec& field = c.field;
  const std::uint64_t q = field.q();
  if (c.coeffs.size() != q) throw Error(ErrorKind::ShapeMismatch, "coefficient vector has wrong length");
  const auto table = field.character_table();
  std::vector<Complex> v(q);
  std::vector<Complex> terms(q);
  for (std::uint64_t x = 0; x < q; ++x) {
    for (std::uint64_t a = 0; a < q; ++a) {
      const Complex chi = table.empty() ? field.character_index(a, x) : table[a * q + x];
      terms[a] = c.coeffs[a] * chi;
    }
    v[x] = pairwise_sum(terms);
  }
  return DenseFunction(field, std::move(v));
}

DenseFunction delta(const DenseFunction& f, std::uint64_t h) {
  const FieldSpec& field = f.field();
  std::vector<Complex> v(field.q());
  for (std::uint64_t x = 0; x < field.q(); ++x) v[x] = f[field.add_index(x, h)] * std::conj(f[x]);
  return DenseFunction(field, std::move(v));
}

DenseFunction delta_multi_indices(const DenseFunction& f, std::span<const std::uint64_t> hs) {
  DenseFunction g = f;
  for (auto h : hs) g = delta(g, h);
  return g;
}

DenseFunction delta_multi(const DenseFunction& f, std::span<const FieldElement> hs) {
  std::vector<std::uint64_t> idx;
  idx.reserve(hs.size());
  for (const auto& h : hs) idx.push_back(f.field().index_of(h));
  return delta_multi_indices(f, idx);
}

TwoVarFunction delta_first_var_indices(const TwoVarFunction& F, std::span<const std::uint64_t> hs) {
  const FieldSpec& field = F.field();
  const std::uint64_t q = field.q();
  std::vector<Complex> cur(F.values().begin(), F.values().end());
  std::vector<Complex> next(q * q);
  for (auto h : hs) {
    for (std::uint64_t x = 0; x < q; ++x) {
      const std::uint64_t xh = field.add_index(x, h);
      for (std::uint64_t y = 0; y < q; ++y) next[x * q + y] = cur[xh * q + y] * std::conj(cur[x * q + y]);
    }
    std::swap(cur, next);
  }
  return TwoVarFunction(field, std::move(cur));
}

TwoVarFunction delta_first_var(const TwoVarFunction& F, std::span<const FieldElement> hs) {
  std::vector<std::uint64_t> idx;
  idx.reserve(hs.size());
  for (const auto& h : hs) idx.push_back(F.field().index_of(h));
  return delta_first_var_indices(F, idx);
}

double lp_norm(const DenseFunction& f, double p) {
  if (std::isnan(p) || p < 1.0) throw Error(ErrorKind::InvalidExponent, "L^p norm needs p >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& v : f.values()) m = std::max(m, std::abs(v));
    return m;
  }
  std::vector<double> terms(f.size());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = std::pow(std::abs(f[i]), p);
  return std::pow(pairwise_sum(terms) / static_cast<double>(terms.size()), 1.0 / p);
}

Complex inner(const DenseFunction& f, const DenseFunction& g) {
  require_same_field(f.field(), g.field());
  std::vector<Complex> terms(f.size());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = f[i] * std::conj(g[i]);
  return pairwise_sum(terms) / static_cast<double>(terms.size());
}

DenseFunction random_one_bounded(const FieldSpec& field, SplitMix64& rng) {
  std::vector<Complex> v(field.q());
  for (auto& x : v) x = rng.unit_disk();
  return DenseFunction(field, std::move(v));
}

DenseFunction random_unimodular(const FieldSpec& field, SplitMix64& rng) {
  std::vector<Complex> v(field.q());
  for (auto& x : v) x = rng.unit_circle();
  return DenseFunction(field, std::move(v));
}

TwoVarFunction random_one_bounded_two_var(const FieldSpec& field, SplitMix64& rng) {
  std::vector<Complex> v(field.q() * field.q());
  for (auto& x : v) x = rng.unit_disk();
  return TwoVarFunction(field, std::move(v));
}

nlohmann::json to_json(const DenseFunction& f) {
  nlohmann::json values = nlohmann::json::array();
  for (const auto& v : f.values()) values.push_back({v.real(), v.imag()});
  return {{"p", f.field().p()}, {"k", f.field().k()}, {"modulus", f.field().modulus()}, {"values", values}};
}

DenseFunction function_from_json(const nlohmann::json& j) {
  try {
    const auto p = j.at("p").get<std::uint64_t>();
    const auto k = j.at("k").get<int>();
    std::optional<std::vector<std::uint64_t>> modulus;
    if (j.contains("modulus")) modulus = j.at("modulus").get<std::vector<std::uint64_t>>();
    FieldSpec field = FieldSpec::make(p, k, modulus);
    std::vector<Complex> values;
    for (const auto& v : j.at("values")) {
      if (v.is_number()) {
        values.emplace_back(v.get<double>(), 0.0);
      } else {
        values.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
      }
    }
    return DenseFunction(std::move(field), std::move(values));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::SyntaxError, std::string("function JSON: ") + e.what());
  }
}

}  // namespace ffprog
