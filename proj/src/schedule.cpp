#include "ffprog/schedule.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "ffprog/error.hpp"

namespace ffprog {

namespace {

BigInt pow10(int e) {
  BigInt r = 1;
  for (int i = 0; i < e; ++i) r *= 10;
  return r;
}

BigInt parse_digits(std::string_view s, std::string_view whole) {
  if (s.empty()) throw Error(ErrorKind::SyntaxError, "expected digits in '" + std::string(whole) + "'");
  BigInt r = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw Error(ErrorKind::SyntaxError, "unexpected '" + std::string(1, c) + "' in '" + std::string(whole) + "'");
    r = r * 10 + (c - '0');
  }
  return r;
}

Rational parse_decimal(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s.remove_prefix(1);
  }
  int exponent = 0;
  if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view es = s.substr(e + 1);
    bool eneg = false;
    if (!es.empty() && (es[0] == '-' || es[0] == '+')) {
      eneg = es[0] == '-';
      es.remove_prefix(1);
    }
    const BigInt ev = parse_digits(es, whole);
    if (ev > 4000) throw Error(ErrorKind::InvalidRange, "exponent too large in '" + std::string(whole) + "'");
    exponent = static_cast<int>(ev) * (eneg ? -1 : 1);
    s = s.substr(0, e);
  }
  std::string digits;
  int frac_len = 0;
  if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    digits = std::string(s.substr(0, dot)) + std::string(s.substr(dot + 1));
    frac_len = static_cast<int>(s.size() - dot - 1);
  } else {
    digits = std::string(s);
  }
  Rational r(parse_digits(digits, whole));
  const int shift = exponent - frac_len;
  if (shift >= 0) r *= Rational(pow10(shift));
  else r /= Rational(pow10(-shift));
  return negative ? Rational(-r) : r;
}

double pow_q(double log_q, double exponent) { return std::exp(exponent * log_q); }

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw Error(ErrorKind::SyntaxError, "empty number");
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const Rational num = parse_decimal(text.substr(0, slash), text);
    const Rational den = parse_decimal(text.substr(slash + 1), text);
    if (den == 0) throw Error(ErrorKind::DivisionByZero, "zero denominator in '" + std::string(text) + "'");
    return num / den;
  }
  return parse_decimal(text, text);
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::InvalidRange, "non-finite value");
  if (x == 0.0) return Rational(0);
  int e = 0;
  const double m = std::frexp(x, &e);
  const auto mant = static_cast<long long>(std::ldexp(m, 53));
  return Rational(BigInt(mant)) * pow2(e - 53);
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::string to_string(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational pow2(int e) {
  const BigInt p = BigInt(1) << std::abs(e);
  return e >= 0 ? Rational(p) : Rational(1) / Rational(p);
}

const Rational& ScheduleParams::delta(int k, int ell) const {
  const auto it = levels.find(ell);
  if (k < 1 || k > 4 || it == levels.end()) throw Error(ErrorKind::IndexOutOfRange, "no delta at that (k, level)");
  const LevelDeltas& d = it->second;
  switch (k) {
    case 1: return d.d1;
    case 2: return d.d2;
    case 3: return d.d3;
    default: return d.d4;
  }
}

bool ScheduleParams::well_formed() const {
  for (int ell = 2; ell <= s; ++ell) {
    const auto it = levels.find(ell);
    if (it == levels.end()) return false;
    const LevelDeltas& d = it->second;
    if (d.d1 <= 0 || d.d2 <= 0 || d.d3 <= 0 || d.d4 <= 0) return false;
    if (!(d.d2 < d.d3) || !(d.d4 < d.d1)) return false;
  }
  return true;
}

ScheduleParams delta_schedule(int s, const Rational& beta, const Rational& gamma) {
  if (s < 2) throw Error(ErrorKind::InvalidRange, "s must be at least 2");
  if (s > 64) throw Error(ErrorKind::InvalidRange, "s above 64 is not supported");
  if (!(beta > 0 && beta <= 1)) throw Error(ErrorKind::InvalidRange, "beta must lie in (0, 1]");
  if (!(gamma > 0)) throw Error(ErrorKind::InvalidRange, "gamma must be positive");
  ScheduleParams out;
  out.s = s;
  out.beta = beta;
  out.gamma = gamma;
  const Rational gb = gamma * beta;
  const Rational gbb = gb * beta;
  for (int ell = 2; ell <= s; ++ell) {
    LevelDeltas d;
    d.d1 = pow2(1 - 2 * s * ell) * gb;
    d.d2 = pow2(2 * ell - 4 * s * s) * gbb;
    d.d3 = pow2(1 + 2 * ell - 4 * s * s) * gbb;
    d.d4 = pow2(-2 * s * ell) * gb;
    out.levels.emplace(ell, d);
  }
  return out;
}

BudgetCheck budget_condition_log(const LevelDeltas& d, double log_q) {
  if (!(log_q > 0)) throw Error(ErrorKind::InvalidRange, "q must exceed 1");
  BudgetCheck out;
  out.lhs = pow_q(log_q, to_double(d.d2 - d.d3)) + pow_q(log_q, to_double(d.d4 - d.d1));
  out.ok = out.lhs <= 0.5;
  return out;
}

BudgetCheck budget_condition(const LevelDeltas& d, double q) {
  if (!(q > 1)) throw Error(ErrorKind::InvalidRange, "q must exceed 1");
  return budget_condition_log(d, std::log(q));
}

BoundState initial_bound_state(const ScheduleParams& params, double q) {
  BoundState s;
  s.ell = params.s;
  s.b1 = 1.0;
  s.b2 = to_double(params.beta);
  s.b3 = std::pow(q, -s.b2);
  s.q = q;
  return s;
}

BoundTrajectory bound_recursion(const ScheduleParams& params, const BoundState& init, double q,
                                double gamma_prime, double c2_prime) {
  if (init.ell != params.s) throw Error(ErrorKind::InvalidInit, "initial state must sit at level s");
  if (init.b1 != 1.0) throw Error(ErrorKind::InvalidInit, "initial coefficient must be 1");
  if (init.b2 != to_double(params.beta)) throw Error(ErrorKind::InvalidInit, "initial exponent must equal beta");
  if (!(init.b3 >= 0)) throw Error(ErrorKind::InvalidInit, "initial additive error must be nonnegative");
  if (!(q > 1)) throw Error(ErrorKind::InvalidRange, "q must exceed 1");
  if (!params.well_formed()) throw Error(ErrorKind::InvalidInit, "deltas violate d2 < d3 or d4 < d1");

  const double lq = std::log(q);
  BoundTrajectory out;
  BoundState cur = init;
  cur.q = q;
  out.states.push_back(cur);
  for (int ell = params.s; ell >= 2; --ell) {
    const double d1 = to_double(params.delta(1, ell));
    const double d2 = to_double(params.delta(2, ell));
    const double d3 = to_double(params.delta(3, ell));
    const double d4 = to_double(params.delta(4, ell));
    double lower = 0.0;
    if (!std::isinf(gamma_prime)) {
      const double inner = c2_prime * pow_q(lq, -gamma_prime);
      lower = pow_q(lq, d1) * std::pow(inner, std::ldexp(1.0, 2 - 2 * ell));
    }
    BoundState next;
    next.ell = ell - 1;
    next.q = q;
    next.b1 = 2.0 * pow_q(lq, d1);
    next.b2 = std::ldexp(1.0, 1 - ell);
    next.b3 = lower + pow_q(lq, -d2) + pow_q(lq, (1.0 - cur.b2) * d3 - cur.b2 * d4) * cur.b1 + pow_q(lq, d3) * cur.b3;
    out.states.push_back(next);
    cur = next;
  }
  out.final_coeff = cur.b1;
  out.u1_exponent = cur.b2;
  out.b3_final = cur.b3;
  return out;
}

ExponentReport exponent_negativity(const ScheduleParams& params) {
  const int s = params.s;
  const Rational& beta = params.beta;
  const Rational& gamma = params.gamma;
  auto d = [&](int k, int ell) -> const Rational& { return params.delta(k, ell); };
  auto tail = [&](int j) {
    Rational t = 0;
    for (int i = j + 1; i <= s - 2; ++i) t += d(3, s - i);
    return t;
  };

  ExponentReport out;
  auto add = [&](int family, int j, Rational value, Rational ceiling) {
    ExponentCheck c;
    c.family = family;
    c.j = j;
    c.negative = value < 0;
    c.below_ceiling = value < ceiling;
    c.value = std::move(value);
    c.ceiling = std::move(ceiling);
    out.all_pass = out.all_pass && c.negative && c.below_ceiling;
    out.checks.push_back(std::move(c));
  };

  add(1, 0, -beta + tail(-1), -beta * (1 - pow2(-10)));
  add(2, 0, (1 - beta) * d(3, s) - beta * d(4, s) + tail(0),
      -gamma * beta * beta * pow2(-2 * s * s) * Rational(7, 8));
  for (int j = 1; j <= s - 2; ++j) {
    const Rational b2 = pow2(-(s - j));
    add(3, j, d(1, s - j + 1) + (1 - b2) * d(3, s - j) - b2 * d(4, s - j) + tail(j),
        -gamma * beta * pow2(-2 * s * s));
  }
  for (int j = 0; j <= s - 2; ++j)
    add(4, j, -d(2, s - j) + tail(j), -gamma * beta * beta * pow2(4 - 4 * s * s) / 3);
  for (int j = 0; j <= s - 2; ++j)
    add(5, j, d(1, s - j) - pow2(2 - 2 * (s - j)) * gamma + tail(j),
        -gamma * pow2(2 - 2 * s) * Rational(15, 16));
  return out;
}

bool example_constraints_hold(const LevelDeltas& d) {
  if (d.d1 <= 0 || d.d2 <= 0 || d.d3 <= 0 || d.d4 <= 0) return false;
  const Rational quarter(1, 4);
  return d.d2 < d.d3 && d.d4 < d.d1 && d.d1 < quarter && 3 * d.d3 / 4 < d.d4 / 4 && d.d3 < quarter;
}

Rational example_error_exponent(const LevelDeltas& d) {
  const Rational quarter(1, 4);
  Rational e = d.d1 - quarter;
  for (const Rational& v : {Rational(-d.d2), Rational(3 * d.d3 / 4 - d.d4 / 4), Rational(d.d3 - quarter)})
    if (v > e) e = v;
  return e;
}

nlohmann::json schedule_report(const ScheduleParams& params, const ScheduleReportOptions& options) {
  using nlohmann::json;
  json j;
  j["s"] = params.s;
  j["beta"] = to_string(params.beta);
  j["gamma"] = to_string(params.gamma);
  json deltas = json::array();
  for (const auto& [ell, d] : params.levels) {
    int k = 1;
    for (const Rational* v : {&d.d1, &d.d2, &d.d3, &d.d4}) {
      deltas.push_back({{"k", k}, {"ell", ell}, {"exact", to_string(*v)}, {"value", to_double(*v)}});
      ++k;
    }
  }
  j["deltas"] = deltas;
  const auto rep = exponent_negativity(params);
  json exps = json::array();
  for (const auto& c : rep.checks) {
    exps.push_back({{"family", c.family},
                    {"j", c.j},
                    {"exact", to_string(c.value)},
                    {"value", to_double(c.value)},
                    {"ceiling", to_string(c.ceiling)},
                    {"negative", c.negative},
                    {"below_ceiling", c.below_ceiling}});
  }
  j["exponents"] = exps;
  j["all_negative"] = rep.all_pass;
  if (options.q) {
    const double q = *options.q;
    const double gp = options.gamma_prime > 0 ? options.gamma_prime : to_double(params.gamma);
    const auto traj = bound_recursion(params, initial_bound_state(params, q), q, gp, options.c2_prime);
    json states = json::array();
    for (const auto& st : traj.states)
      states.push_back({{"ell", st.ell}, {"b1", st.b1}, {"b2", st.b2}, {"b3", st.b3}});
    j["trajectory"] = states;
    j["final_bound"] = {{"coeff", traj.final_coeff},
                        {"u1_exponent", traj.u1_exponent},
                        {"b3_final", traj.b3_final},
                        {"implied_constants_dropped", traj.implied_constants_dropped}};
    j["q"] = q;
    j["gamma_prime"] = gp;
    j["c2_prime"] = options.c2_prime;
  }
  return j;
}

}  // namespace ffprog
