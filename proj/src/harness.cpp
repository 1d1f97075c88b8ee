#include "ffprog/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "ffprog/counting.hpp"
#include "ffprog/decomposition.hpp"
#include "ffprog/error.hpp"
#include "ffprog/extremal.hpp"
#include "ffprog/gowers.hpp"
#include "ffprog/numeric.hpp"
#include "ffprog/schedule.hpp"

namespace ffprog::harness {

using nlohmann::json;

namespace {

OptionSpec opt(std::string name, OptType type, json def, std::string help) {
  return OptionSpec{std::move(name), type, std::move(def), std::move(help)};
}

std::vector<OptionSpec> field_options(std::uint64_t p) {
  return {opt("p", OptType::Int, p, "field characteristic"),
          opt("k", OptType::Int, 1, "extension degree"),
          opt("modulus", OptType::Text, "", "monic modulus coefficients c_0,...,c_k (default: canonical)")};
}

std::vector<OptionSpec> with(std::vector<OptionSpec> a, std::vector<OptionSpec> b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

const OptionSpec kSeed = opt("seed", OptType::Int, nullptr, "RNG seed (drawn and recorded when absent)");

}  // namespace

const std::vector<CommandSpec>& command_specs() {
  static const std::vector<CommandSpec> specs = {
      {"count", "count progressions in a set and split the average into main term and error",
       with(field_options(101),
            {opt("polys", OptType::Text, "y,y^2", "progression polynomials P_1,...,P_m"),
             opt("twists", OptType::Text, "", "twist polynomials Q_1,...,Q_m2"),
             opt("psi", OptType::Text, "", "character indices for the twists (default trivial)"),
             opt("set", OptType::Text, "random:0.5", "set source"),
             opt("y_rule", OptType::Text, "all", "all | nonzero"),
             opt("dependent", OptType::Flag, false, "accept linearly dependent P (e.g. y,2y)"), kSeed})},
      {"norms", "Gowers norms, the Fourier form of U^2 and its dual bound",
       with(field_options(13),
            {opt("smax", OptType::Int, 3, "largest norm index"),
             opt("trials", OptType::Int, 10, "number of functions"),
             opt("source", OptType::Text, "random", "random | unimodular | file:PATH | set:SOURCE"),
             opt("budget", OptType::Real, kDefaultGowersBudget, "operation budget per norm"), kSeed})},
      {"weil-scan", "normalized character sums against the Weil bound over a prime range",
       {opt("pmin", OptType::Int, 5, "smallest prime"), opt("pmax", OptType::Int, 199, "largest prime"),
        opt("polys", OptType::Text, "y^3", "polynomials; one polynomial scans every nontrivial character"),
        opt("trials", OptType::Int, 50, "random character tuples per prime for several polynomials"), kSeed}},
      {"base-scan", "empirical constant of the single-polynomial twisted average",
       {opt("pmin", OptType::Int, 7, "smallest prime"), opt("pmax", OptType::Int, 199, "largest prime"),
        opt("p1", OptType::Text, "y^3", "the progression polynomial"),
        opt("twists", OptType::Text, "", "twist polynomials"),
        opt("psi", OptType::Text, "random", "random (nontrivial) | trivial"),
        opt("trials", OptType::Int, 5, "random instances per prime"),
        opt("limit", OptType::Real, 10.0, "flag |error| sqrt(q) above this"), kSeed}},
      {"extremal", "largest progression-free subsets over a prime range",
       {opt("pmin", OptType::Int, 5, "smallest prime"), opt("pmax", OptType::Int, 31, "largest prime"),
        opt("k", OptType::Int, 1, "extension degree"), opt("polys", OptType::Text, "y,2y", "polynomials"),
        opt("y_rule", OptType::Text, "nonzero", "nonzero | all"),
        opt("degeneracy", OptType::Text, "literal", "literal | distinct_points"),
        opt("node_budget", OptType::Int, 50000000, "branch-and-bound node limit"),
        opt("random_iters", OptType::Int, 0, "randomized greedy runs for a lower bound"), kSeed}},
      {"decompose", "Fourier-threshold decomposition checked against a schedule budget",
       with(field_options(101),
            {opt("source", OptType::Text, "unimodular", "unimodular | random | file:PATH | set:SOURCE"),
             opt("trials", OptType::Int, 1, "number of functions"),
             opt("s", OptType::Int, 2, "schedule length"), opt("level", OptType::Int, 2, "schedule level"),
             opt("beta", OptType::Text, "1", "schedule beta"), opt("gamma", OptType::Text, "1/2", "schedule gamma"),
             opt("deltas", OptType::Text, "", "explicit d1,d2,d3,d4 overriding the schedule"), kSeed})},
      {"schedule", "delta schedule, exponent signs and the bound recursion",
       {opt("s", OptType::Int, 4, "norm index"), opt("beta", OptType::Text, "1/4", "beta in (0,1]"),
        opt("gamma", OptType::Text, "1/2", "gamma > 0"), opt("q", OptType::Text, "", "field size for the recursion"),
        opt("gamma_prime", OptType::Real, 0.0, "lower-level rate (0: use gamma)"),
        opt("c2_prime", OptType::Real, 1.0, "lower-level constant"), kSeed}},
      {"cs-check", "Cauchy-Schwarz reduction of U^s to averaged U^2 norms",
       with(field_options(7),
            {opt("s", OptType::Int, 3, "norm index"), opt("m", OptType::Int, 2, "number of two-variable functions"),
             opt("trials", OptType::Int, 10, "random instances"),
             opt("budget", OptType::Real, kDefaultGowersBudget, "operation budget per norm"), kSeed})},
      {"verify-theorem", "error of the progression count across primes and random sets",
       {opt("polys", OptType::Text, "y,y^2", "progression polynomials"),
        opt("twists", OptType::Text, "", "twist polynomials (random nontrivial characters)"),
        opt("pmin", OptType::Int, 31, "smallest prime"), opt("pmax", OptType::Int, 199, "largest prime"),
        opt("density", OptType::Real, 0.5, "set density"), opt("trials", OptType::Int, 20, "sets per prime"),
        opt("allow_below_threshold", OptType::Flag, false, "warn instead of failing below the threshold"),
        kSeed}},
  };
  return specs;
}

const CommandSpec& command_spec(std::string_view name) {
  for (const auto& s : command_specs())
    if (s.name == name) return s;
  throw Error(ErrorKind::Usage, "unknown command '" + std::string(name) + "'");
}

namespace {

json coerce(const OptionSpec& o, const json& v) {
  if (v.is_null()) return v;
  auto bad = [&] { return Error(ErrorKind::Usage, "option '" + o.name + "' has the wrong type: " + v.dump()); };
  switch (o.type) {
    case OptType::Int:
      if (v.is_number_integer()) return v;
      if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>())
        return static_cast<std::int64_t>(v.get<double>());
      if (v.is_string()) {
        try {
          const double d = std::stod(v.get<std::string>());
          if (std::floor(d) == d) return static_cast<std::int64_t>(d);
        } catch (const std::exception&) {
        }
      }
      throw bad();
    case OptType::Real:
      if (v.is_number()) return v.get<double>();
      if (v.is_string()) {
        try {
          return to_double(parse_rational(v.get<std::string>()));
        } catch (const std::exception&) {
        }
      }
      throw bad();
    case OptType::Text:
      if (v.is_string()) return v;
      if (v.is_number()) return v.dump();
      throw bad();
    case OptType::Flag:
      if (v.is_boolean()) return v;
      throw bad();
  }
  throw bad();
}

void merge_into(const CommandSpec& spec, json& cfg, const json& src, const char* origin) {
  if (src.is_null()) return;
  if (!src.is_object()) throw Error(ErrorKind::Usage, std::string(origin) + " must be a JSON object");
  for (const auto& [key, value] : src.items()) {
    const auto it = std::find_if(spec.options.begin(), spec.options.end(),
                                 [&](const OptionSpec& o) { return o.name == key; });
    if (it == spec.options.end())
      throw Error(ErrorKind::Usage, "unknown option '" + key + "' for " + spec.name + " in " + origin);
    cfg[key] = coerce(*it, value);
  }
}

std::int64_t geti(const json& c, const char* k) { return c.at(k).get<std::int64_t>(); }
double getr(const json& c, const char* k) { return c.at(k).get<double>(); }
std::string gett(const json& c, const char* k) { return c.at(k).get<std::string>(); }
bool getb(const json& c, const char* k) { return c.at(k).get<bool>(); }

std::uint64_t positive(const json& c, const char* k) {
  const auto v = geti(c, k);
  if (v < 0) throw Error(ErrorKind::Usage, std::string(k) + " must be nonnegative");
  return static_cast<std::uint64_t>(v);
}

json cjson(Complex z) { return json::array({z.real(), z.imag()}); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::vector<std::uint64_t> parse_index_list(std::string_view text) {
  std::vector<std::uint64_t> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(cur, &used));
      if (used != cur.size()) throw std::invalid_argument(cur);
    } catch (const std::exception&) {
      throw Error(ErrorKind::SyntaxError, "expected a nonnegative integer, got '" + cur + "'");
    }
    cur.clear();
  };
  for (char ch : text) {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) flush();
    else cur.push_back(ch);
  }
  flush();
  return out;
}

FieldSpec field_from(const json& c) {
  const auto mod = gett(c, "modulus");
  std::optional<std::vector<std::uint64_t>> modulus;
  if (!mod.empty()) modulus = parse_index_list(mod);
  return FieldSpec::make(positive(c, "p"), static_cast<int>(geti(c, "k")), modulus);
}

ProgressionSystem system_from(const std::string& P, const std::string& Q, bool allow_dependent) {
  auto Ps = parse_poly_list(P);
  auto Qs = Q.empty() ? std::vector<IntPoly>{} : parse_poly_list(Q);
  return allow_dependent ? ProgressionSystem::allow_dependent(std::move(Ps), std::move(Qs))
                         : ProgressionSystem(std::move(Ps), std::move(Qs));
}

YRule y_rule_from(const std::string& s) {
  if (s == "all") return YRule::All;
  if (s == "nonzero") return YRule::Nonzero;
  throw Error(ErrorKind::Usage, "y_rule must be 'all' or 'nonzero'");
}

std::uint64_t nontrivial_character(const FieldSpec& field, SplitMix64& rng) { return 1 + rng.below(field.q() - 1); }

DenseFunction function_from_source(const std::string& source, const FieldSpec& field, SplitMix64& rng,
                                   std::uint64_t seed) {
  if (source == "random") return random_one_bounded(field, rng);
  if (source == "unimodular") return random_unimodular(field, rng);
  if (source.rfind("file:", 0) == 0) {
    std::ifstream in(source.substr(5));
    if (!in) throw Error(ErrorKind::Usage, "cannot open " + source.substr(5));
    auto f = function_from_json(json::parse(in));
    if (!(f.field() == field)) throw Error(ErrorKind::FieldMismatch, "function file is over a different field");
    return f;
  }
  if (source.rfind("set:", 0) == 0) return indicator_of_indices(field, load_set(source.substr(4), field, seed));
  throw Error(ErrorKind::Usage, "unknown function source '" + source + "'");
}

// ---------------------------------------------------------------- commands

Outcome cmd_count(const json& c, std::uint64_t seed, const RunOptions&) {
  Outcome out;
  const FieldSpec field = field_from(c);
  const auto system = system_from(gett(c, "polys"), gett(c, "twists"), getb(c, "dependent"));
  const auto A = load_set(gett(c, "set"), field, seed);
  auto psi = parse_index_list(gett(c, "psi"));
  if (psi.empty()) psi.assign(system.m2(), 0);
  if (psi.size() != system.m2()) throw Error(ErrorKind::Usage, "psi needs one character per twist polynomial");
  for (auto a : psi)
    if (a >= field.q()) throw Error(ErrorKind::Usage, "character index outside the field");

  const auto r = main_term_error(system, field, A, psi);
  const double q = static_cast<double>(field.q());
  const double a = static_cast<double>(A.size());
  json rec{{"type", "count"},
           {"q", field.q()},
           {"system", system.describe()},
           {"independent", system.independent()},
           {"threshold", system.independent() ? json(system.threshold().str()) : json(nullptr)},
           {"below_threshold", r.below_threshold},
           {"set_size", A.size()},
           {"lambda", cjson(r.value)},
           {"main_term", cjson(r.main_term)},
           {"error", cjson(r.error)},
           {"scaled_error", cjson(r.scaled_error)}};
  const double bc = a > 0 ? std::abs(r.scaled_error) / (std::pow(a, 1.5) * std::pow(q, 0.4)) : 0.0;
  rec["bc_ratio"] = bc;
  if (system.m2() == 0) {
    const auto rule = y_rule_from(gett(c, "y_rule"));
    const auto n = count_progressions(system, field, A, rule);
    rec["count"] = n;
    rec["y_rule"] = to_string(rule);
    if (rule == YRule::All && std::abs(q * q * r.value.real() - static_cast<double>(n)) > 1e-6)
      out.failures.push_back("q^2 * Lambda disagrees with the exact count");
  }
  if (r.below_threshold) out.warnings.push_back("characteristic below the system threshold");
  if (!system.independent()) out.warnings.push_back("linearly dependent system: the main-term asymptotics do not apply");
  out.records.push_back(rec);
  return out;
}

Outcome cmd_norms(const json& c, std::uint64_t seed, const RunOptions& ro) {
  Outcome out;
  const FieldSpec field = field_from(c);
  const int smax = static_cast<int>(geti(c, "smax"));
  if (smax < 1) throw Error(ErrorKind::Usage, "smax must be at least 1");
  const auto trials = positive(c, "trials");
  const double budget = getr(c, "budget");
  const std::string source = gett(c, "source");
  const SplitMix64 root(seed);
  std::vector<json> recs(trials);
  std::vector<std::vector<std::string>> fails(trials);
  parallel_for(trials, ro.jobs, [&](std::size_t t) {
    SplitMix64 rng = root.split(t);
    const auto f = function_from_source(source, field, rng, seed);
    json norms = json::array();
    double prev = -1.0;
    for (int s = 1; s <= smax; ++s) {
      const double v = gowers_norm(f, s, budget).value;
      norms.push_back(v);
      if (prev > v + 1e-9) fails[t].push_back("trial " + std::to_string(t) + ": U^" + std::to_string(s - 1) +
                                              " exceeds U^" + std::to_string(s));
      prev = v;
    }
    const double fourier = gowers_u2_via_fourier(f).value;
    if (smax >= 2 && std::abs(norms[1].get<double>() - fourier) > 1e-8 * std::max(1.0, fourier))
      fails[t].push_back("trial " + std::to_string(t) + ": U^2 differs from its Fourier form");
    recs[t] = {{"type", "norms"},
               {"trial", t},
               {"q", field.q()},
               {"u", norms},
               {"u2_fourier", fourier},
               {"u2_dual_upper_bound", u2_dual_upper_bound(f)},
               {"l2", lp_norm(f, 2.0)},
               {"linf", lp_norm(f, kInfinity)}};
  });
  out.records = std::move(recs);
  for (auto& f : fails) out.failures.insert(out.failures.end(), f.begin(), f.end());
  return out;
}

Outcome cmd_weil_scan(const json& c, std::uint64_t seed, const RunOptions& ro) {
  Outcome out;
  const auto polys = parse_poly_list(gett(c, "polys"));
  const ProgressionSystem system(polys);
  const auto primes = primes_in(positive(c, "pmin"), positive(c, "pmax"));
  const auto trials = positive(c, "trials");
  int max_deg = 0;
  for (const auto& p : polys) max_deg = std::max(max_deg, p.degree());
  const SplitMix64 root(seed);

  std::vector<json> recs(primes.size());
  std::vector<std::vector<std::string>> row(primes.size());
  std::vector<std::string> fails(primes.size());
  parallel_for(primes.size(), ro.jobs, [&](std::size_t i) {
    const std::uint64_t p = primes[i];
    json rec{{"type", "weil"}, {"p", p}};
    if (p <= static_cast<std::uint64_t>(max_deg) || !system.admits_characteristic(p)) {
      rec["skipped"] = true;
      recs[i] = rec;
      return;
    }
    const FieldSpec field = FieldSpec::make(p, 1);
    SplitMix64 rng = root.split(p);
    double worst = 0.0, bound = 0.0;
    std::uint64_t violations = 0, cases = 0;
    auto run = [&](const std::vector<std::uint64_t>& a) {
      const auto w = weil_sum(field, polys, a);
      ++cases;
      const double sp = std::sqrt(static_cast<double>(p));
      worst = std::max(worst, std::abs(w.value) * sp);
      bound = std::max(bound, w.bound * sp);
      if (!w.within_bound) ++violations;
    };
    if (polys.size() == 1) {
      for (std::uint64_t a = 1; a < p; ++a) run({a});
    } else {
      for (std::uint64_t t = 0; t < trials; ++t) {
        std::vector<std::uint64_t> a(polys.size());
        do {
          for (auto& x : a) x = rng.below(p);
        } while (std::all_of(a.begin(), a.end(), [](std::uint64_t x) { return x == 0; }));
        run(a);
      }
    }
    rec["skipped"] = false;
    rec["cases"] = cases;
    rec["max_scaled"] = worst;
    rec["bound"] = bound;
    rec["violations"] = violations;
    recs[i] = rec;
    row[i] = {std::to_string(p), fmt(worst), fmt(bound), violations == 0 ? "true" : "false"};
    if (violations) fails[i] = "p = " + std::to_string(p) + ": " + std::to_string(violations) + " sums above the bound";
  });
  out.records = std::move(recs);
  out.csv_header = {"p", "max_scaled", "bound", "within"};
  for (auto& r : row)
    if (!r.empty()) out.csv_rows.push_back(r);
  for (auto& f : fails)
    if (!f.empty()) out.failures.push_back(f);
  return out;
}

Outcome cmd_base_scan(const json& c, std::uint64_t seed, const RunOptions& ro) {
  Outcome out;
  const IntPoly P1 = parse_poly(gett(c, "p1"));
  const auto twists = gett(c, "twists");
  const std::vector<IntPoly> Qs = twists.empty() ? std::vector<IntPoly>{} : parse_poly_list(twists);
  const ProgressionSystem system({P1}, Qs);
  const auto mode = gett(c, "psi");
  if (mode != "random" && mode != "trivial") throw Error(ErrorKind::Usage, "psi must be 'random' or 'trivial'");
  const auto primes = primes_in(positive(c, "pmin"), positive(c, "pmax"));
  const auto trials = positive(c, "trials");
  const double limit = getr(c, "limit");
  const SplitMix64 root(seed);

  std::vector<json> recs(primes.size());
  std::vector<std::string> fails(primes.size());
  std::vector<std::vector<std::string>> rows(primes.size());
  parallel_for(primes.size(), ro.jobs, [&](std::size_t i) {
    const std::uint64_t p = primes[i];
    json rec{{"type", "base"}, {"p", p}};
    if (!system.admits_characteristic(p) || BigInt(p) <= P1.degree()) {
      rec["skipped"] = true;
      recs[i] = rec;
      return;
    }
    const FieldSpec field = FieldSpec::make(p, 1);
    SplitMix64 rng = root.split(p);
    double worst = 0.0;
    for (std::uint64_t t = 0; t < trials; ++t) {
      std::vector<DenseFunction> F{random_one_bounded(field, rng), random_one_bounded(field, rng)};
      std::vector<std::uint64_t> psi(Qs.size(), 0);
      if (mode == "random") {
        for (auto& a : psi) a = rng.below(p);
        if (!psi.empty() && std::all_of(psi.begin(), psi.end(), [](auto a) { return a == 0; }))
          psi[0] = nontrivial_character(field, rng);
      }
      worst = std::max(worst, base_case_report(P1, Qs, F, psi).scaled_error);
    }
    rec["skipped"] = false;
    rec["max_scaled_error"] = worst;
    recs[i] = rec;
    rows[i] = {std::to_string(p), fmt(worst)};
    if (worst > limit) fails[i] = "p = " + std::to_string(p) + ": |error| sqrt(q) = " + fmt(worst) + " above limit";
  });
  out.records = std::move(recs);
  out.csv_header = {"p", "max_scaled_error"};
  for (auto& r : rows)
    if (!r.empty()) out.csv_rows.push_back(r);
  for (auto& f : fails)
    if (!f.empty()) out.failures.push_back(f);
  return out;
}

Degeneracy degeneracy_from(const std::string& s) {
  if (s == "literal" || s == "paper_literal") return Degeneracy::Literal;
  if (s == "distinct_points") return Degeneracy::DistinctPoints;
  throw Error(ErrorKind::Usage, "degeneracy must be 'literal' or 'distinct_points'");
}

Outcome cmd_extremal(const json& c, std::uint64_t seed, const RunOptions& ro) {
  Outcome out;
  const auto system = system_from(gett(c, "polys"), "", true);
  const auto rule = y_rule_from(gett(c, "y_rule"));
  const auto deg = degeneracy_from(gett(c, "degeneracy"));
  const int k = static_cast<int>(geti(c, "k"));
  const auto budget = positive(c, "node_budget");
  const auto iters = positive(c, "random_iters");
  const auto primes = primes_in(positive(c, "pmin"), positive(c, "pmax"));

  std::vector<ExtremalResult> results(primes.size());
  std::vector<json> recs(primes.size());
  std::vector<std::string> fails(primes.size());
  parallel_for(primes.size(), ro.jobs, [&](std::size_t i) {
    const FieldSpec field = FieldSpec::make(primes[i], k);
    const auto h = build_hypergraph(system, field, rule, deg);
    const auto r = r_exact(h, budget);
    results[i] = r;
    json rec = to_json(r);
    if (!ro.timing) rec.erase("ms");
    rec["type"] = "extremal";
    rec["system"] = system.describe();
    rec["p"] = primes[i];
    rec["k"] = k;
    rec["edges"] = h.edges.size();
    bool ok = is_independent(h, r.witness);
    if (deg == Degeneracy::Literal && rule == YRule::Nonzero)
      ok = ok && count_progressions(system, field, r.witness, YRule::Nonzero) == 0;
    rec["witness_verified"] = ok;
    if (!ok) fails[i] = "q = " + std::to_string(field.q()) + ": witness contains a progression";
    if (iters > 0) {
      const auto lower = r_lower_random(h, iters, SplitMix64(seed).split(primes[i]).seed());
      rec["random_lower"] = lower.r;
      if (r.exact && lower.r > r.r) fails[i] = "q = " + std::to_string(field.q()) + ": random bound exceeds exact";
    }
    recs[i] = rec;
  });
  out.records = std::move(recs);
  out.csv_header = {"q", "r", "exact", "gamma_point"};
  for (const auto& r : results) {
    const double gp = r.r >= 1 ? 1.0 - std::log(static_cast<double>(r.r)) / std::log(static_cast<double>(r.q)) : NAN;
    out.csv_rows.push_back({std::to_string(r.q), std::to_string(r.r), r.exact ? "true" : "false", fmt(gp)});
  }
  for (auto& f : fails)
    if (!f.empty()) out.failures.push_back(f);
  try {
    const auto g = gamma_fit(results);
    out.records.push_back({{"type", "gamma_fit"},
                           {"gamma_hat", g.gamma_hat},
                           {"stderr", g.stderr_},
                           {"points_used", g.points_used},
                           {"residuals", g.residuals}});
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InsufficientData) throw;
    out.warnings.push_back("gamma fit skipped: fewer than three exact results with r >= 1");
  }
  return out;
}

Outcome cmd_decompose(const json& c, std::uint64_t seed, const RunOptions& ro) {
  Outcome out;
  const FieldSpec field = field_from(c);
  const auto trials = positive(c, "trials");
  DecompositionBudget budget;
  const auto explicit_deltas = gett(c, "deltas");
  if (!explicit_deltas.empty()) {
    std::vector<double> d;
    std::string cur;
    std::istringstream is(explicit_deltas);
    while (std::getline(is, cur, ',')) d.push_back(to_double(parse_rational(cur)));
    if (d.size() != 4) throw Error(ErrorKind::Usage, "deltas needs four values");
    budget = {d[0], d[1], d[2], d[3], 2};
  } else {
    const auto params = delta_schedule(static_cast<int>(geti(c, "s")), parse_rational(gett(c, "beta")),
                                       parse_rational(gett(c, "gamma")));
    budget = decomposition_budget_from_schedule(params, static_cast<int>(geti(c, "level")));
  }
  if (budget.s != 2) throw Error(ErrorKind::Usage, "the Fourier producer needs level 2");
  const std::string source = gett(c, "source");
  const SplitMix64 root(seed);
  const double q = static_cast<double>(field.q());
  std::vector<json> recs(trials);
  std::vector<std::string> fails(trials);
  parallel_for(trials, ro.jobs, [&](std::size_t t) {
    SplitMix64 rng = root.split(t);
    auto f = function_from_source(source, field, rng, seed);
    const double l2 = lp_norm(f, 2.0);
    if (l2 > 1.0) f = Complex(1.0 / l2) * f;
    const auto r = u2_threshold_decompose(f, budget, q);
    json rec = to_json(r);
    rec["type"] = "decomposition";
    rec["trial"] = t;
    rec["q"] = field.q();
    rec["budget"] = {{"d1", budget.d1}, {"d2", budget.d2}, {"d3", budget.d3}, {"d4", budget.d4}, {"s", budget.s}};
    recs[t] = rec;
    if (r.status != DecompositionStatus::Certified)
      fails[t] = "trial " + std::to_string(t) + ": decomposition " + to_string(r.status);
  });
  out.records = std::move(recs);
  for (auto& f : fails)
    if (!f.empty()) out.failures.push_back(f);
  return out;
}

Outcome cmd_schedule(const json& c, std::uint64_t, const RunOptions&) {
  Outcome out;
  const auto params = delta_schedule(static_cast<int>(geti(c, "s")), parse_rational(gett(c, "beta")),
                                     parse_rational(gett(c, "gamma")));
  ScheduleReportOptions opts;
  const auto qtext = gett(c, "q");
  if (!qtext.empty()) opts.q = to_double(parse_rational(qtext));
  opts.gamma_prime = getr(c, "gamma_prime");
  opts.c2_prime = getr(c, "c2_prime");
  json rec = schedule_report(params, opts);
  rec["type"] = "schedule";
  rec["well_formed"] = params.well_formed();
  if (opts.q) {
    json budgets = json::array();
    for (const auto& [ell, d] : params.levels) {
      const auto b = budget_condition(d, *opts.q);
      budgets.push_back({{"ell", ell}, {"lhs", b.lhs}, {"ok", b.ok}});
    }
    rec["budget_condition"] = budgets;
  }
  if (!rec["all_negative"].get<bool>()) out.failures.push_back("an exponent family is not below its ceiling");
  if (!params.well_formed()) out.failures.push_back("deltas violate d2 < d3 or d4 < d1");
  out.records.push_back(rec);
  return out;
}

Outcome cmd_cs_check(const json& c, std::uint64_t seed, const RunOptions& ro) {
  Outcome out;
  const FieldSpec field = field_from(c);
  const int s = static_cast<int>(geti(c, "s"));
  const auto m = positive(c, "m");
  const auto trials = positive(c, "trials");
  const double budget = getr(c, "budget");
  const SplitMix64 root(seed);
  std::vector<json> recs(trials);
  std::vector<std::string> fails(trials);
  parallel_for(trials, ro.jobs, [&](std::size_t t) {
    SplitMix64 rng = root.split(t);
    std::vector<TwoVarFunction> fs;
    for (std::uint64_t i = 0; i < m; ++i) fs.push_back(random_one_bounded_two_var(field, rng));
    const auto r = check_cs_inequality(fs, s, budget);
    recs[t] = {{"type", "cs"}, {"trial", t}, {"s", s}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"holds", r.holds}};
    if (!r.holds) fails[t] = "trial " + std::to_string(t) + ": lhs exceeds rhs";
  });
  out.records = std::move(recs);
  for (auto& f : fails)
    if (!f.empty()) out.failures.push_back(f);
  return out;
}

Outcome cmd_verify_theorem(const json& c, std::uint64_t seed, const RunOptions& ro) {
  Outcome out;
  const auto system = system_from(gett(c, "polys"), gett(c, "twists"), false);
  const auto primes = primes_in(positive(c, "pmin"), positive(c, "pmax"));
  const auto trials = positive(c, "trials");
  const double density = getr(c, "density");
  if (!(density >= 0.0 && density <= 1.0)) throw Error(ErrorKind::Usage, "density must lie in [0, 1]");
  const bool allow_below = getb(c, "allow_below_threshold");
  for (auto p : primes) {
    if (!system.admits_characteristic(p)) {
      if (!allow_below)
        throw Error(ErrorKind::ThresholdViolation,
                    "p = " + std::to_string(p) + " is below the threshold " + system.threshold().str());
      out.warnings.push_back("p = " + std::to_string(p) + " below the threshold");
    }
  }
  const SplitMix64 root(seed);
  const std::size_t cells = primes.size() * trials;
  std::vector<json> recs(cells);
  std::vector<double> err(cells);
  parallel_for(cells, ro.jobs, [&](std::size_t cell) {
    const std::uint64_t p = primes[cell / trials];
    const std::uint64_t t = cell % trials;
    const FieldSpec field = FieldSpec::make(p, 1);
    SplitMix64 rng = root.split(p * 1000003ULL + t);
    std::vector<std::uint64_t> A;
    for (std::uint64_t x = 0; x < p; ++x)
      if (rng.uniform() < density) A.push_back(x);
    std::vector<std::uint64_t> psi(system.m2());
    for (auto& a : psi) a = nontrivial_character(field, rng);
    const auto r = main_term_error(system, field, A, psi);
    err[cell] = std::abs(r.scaled_error);
    recs[cell] = {{"type", "cell"},        {"p", p},
                  {"trial", t},            {"set_size", A.size()},
                  {"psi", psi},            {"lambda", cjson(r.value)},
                  {"main_term", cjson(r.main_term)}, {"abs_scaled_error", err[cell]}};
  });
  out.records = std::move(recs);
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    double worst = 0.0;
    for (std::size_t t = 0; t < trials; ++t) worst = std::max(worst, err[i * trials + t]);
    out.csv_rows.push_back({std::to_string(primes[i]), fmt(worst)});
    if (worst > 0) {
      lx.push_back(std::log(static_cast<double>(primes[i])));
      ly.push_back(std::log(worst));
    }
  }
  out.csv_header = {"p", "max_abs_scaled_error"};
  json summary{{"type", "summary"}, {"evidence", "empirical"}, {"primes", primes.size()}, {"trials", trials}};
  if (lx.size() >= 2) {
    const auto fit = least_squares(lx, ly);
    summary["error_exponent"] = fit.slope;
    summary["error_exponent_stderr"] = fit.slope_stderr;
    summary["gamma_emp"] = (2.0 - fit.slope) / static_cast<double>(system.m1() + 1);
    if (!(fit.slope < 2.0)) out.failures.push_back("fitted error exponent is not below 2");
  } else {
    summary["error_exponent"] = nullptr;
  }
  out.records.push_back(summary);
  return out;
}

}  // namespace

json resolve_config(const CommandSpec& spec, const json& file, const json& flags) {
  json cfg = json::object();
  for (const auto& o : spec.options) cfg[o.name] = o.default_value;
  merge_into(spec, cfg, file, "config file");
  merge_into(spec, cfg, flags, "flags");
  return cfg;
}

Outcome run_command(std::string_view command, const json& config, const RunOptions& options) {
  const auto& spec = command_spec(command);
  json cfg = resolve_config(spec, config, json::object());
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> embedded;
  if (cfg.contains("set")) embedded = embedded_seed(cfg["set"].get<std::string>());
  if (!cfg["seed"].is_null()) seed = static_cast<std::uint64_t>(cfg["seed"].get<std::int64_t>());
  else if (embedded) seed = *embedded;
  else seed = (static_cast<std::uint64_t>(std::random_device{}()) << 32) ^ std::random_device{}();

  Outcome out;
  if (command == "count") out = cmd_count(cfg, seed, options);
  else if (command == "norms") out = cmd_norms(cfg, seed, options);
  else if (command == "weil-scan") out = cmd_weil_scan(cfg, seed, options);
  else if (command == "base-scan") out = cmd_base_scan(cfg, seed, options);
  else if (command == "extremal") out = cmd_extremal(cfg, seed, options);
  else if (command == "decompose") out = cmd_decompose(cfg, seed, options);
  else if (command == "schedule") out = cmd_schedule(cfg, seed, options);
  else if (command == "cs-check") out = cmd_cs_check(cfg, seed, options);
  else if (command == "verify-theorem") out = cmd_verify_theorem(cfg, seed, options);
  else throw Error(ErrorKind::Usage, "unknown command '" + std::string(command) + "'");
  out.seed = seed;
  return out;
}

json envelope(std::string_view command, const json& config, std::uint64_t seed, const json& payload) {
  json cfg = config;
  if (cfg.contains("seed")) cfg["seed"] = seed;
  json r{{"schema", kSchemaVersion},
         {"version", kToolVersion},
         {"command", std::string(command)},
         {"seed", seed},
         {"config", cfg}};
  for (const auto& [k, v] : payload.items()) {
    if (r.contains(k)) throw Error(ErrorKind::Usage, "payload key '" + k + "' collides with the envelope");
    r[k] = v;
  }
  return r;
}

bool validate_record(const json& r, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (!r.is_object()) return fail("record is not an object");
  if (!r.contains("schema") || !r["schema"].is_number_integer() || r["schema"].get<int>() != kSchemaVersion)
    return fail("schema must be 1");
  if (!r.contains("version") || !r["version"].is_string()) return fail("version must be a string");
  if (!r.contains("command") || !r["command"].is_string()) return fail("command must be a string");
  if (!r.contains("seed") || !r["seed"].is_number_unsigned()) return fail("seed must be a nonnegative integer");
  if (!r.contains("config") || !r["config"].is_object()) return fail("config must be an object");
  if (!r.contains("type") || !r["type"].is_string()) return fail("type must be a string");
  const auto cmd = r["command"].get<std::string>();
  if (cmd != "acceptance") {
    const CommandSpec* spec = nullptr;
    for (const auto& s : command_specs())
      if (s.name == cmd) spec = &s;
    if (!spec) return fail("unknown command " + cmd);
    for (const auto& o : spec->options)
      if (!r["config"].contains(o.name)) return fail("config lacks " + o.name);
  }
  return true;
}

std::optional<std::uint64_t> embedded_seed(std::string_view source) {
  if (source.rfind("random:", 0) != 0) return std::nullopt;
  const auto pos = source.find(":seed");
  if (pos == std::string_view::npos) return std::nullopt;
  const auto digits = parse_index_list(source.substr(pos + 5));
  if (digits.size() != 1) throw Error(ErrorKind::SyntaxError, "bad seed in '" + std::string(source) + "'");
  return digits[0];
}

namespace {

std::uint64_t element_index(const FieldSpec& field, const std::vector<std::uint64_t>& coeffs) {
  if (coeffs.size() == 1 && field.k() != 1) {
    if (coeffs[0] >= field.q()) throw Error(ErrorKind::ElementOutOfField, "index outside the field");
    return coeffs[0];
  }
  if (coeffs.size() != static_cast<std::size_t>(field.k()))
    throw Error(ErrorKind::ShapeMismatch, "element tuple needs k coefficients");
  FieldElement e{coeffs};
  if (!field.contains(e)) throw Error(ErrorKind::ElementOutOfField, "coefficient outside [0, p)");
  return field.index_of(e);
}

}  // namespace

std::vector<std::uint64_t> load_set(std::string_view source, const FieldSpec& field, std::uint64_t seed) {
  std::vector<std::uint64_t> out;
  const std::string src(source);
  if (src == "full") {
    for (std::uint64_t x = 0; x < field.q(); ++x) out.push_back(x);
  } else if (src == "empty") {
  } else if (src.rfind("random:", 0) == 0) {
    std::string rest = src.substr(7);
    const auto colon = rest.find(':');
    const std::string dens = rest.substr(0, colon);
    double density = 0.0;
    try {
      density = to_double(parse_rational(dens));
    } catch (const Error&) {
      throw Error(ErrorKind::SyntaxError, "bad density in '" + src + "'");
    }
    if (!(density >= 0.0 && density <= 1.0)) throw Error(ErrorKind::InvalidRange, "density must lie in [0, 1]");
    SplitMix64 rng(embedded_seed(src).value_or(seed));
    for (std::uint64_t x = 0; x < field.q(); ++x)
      if (rng.uniform() < density) out.push_back(x);
  } else if (src.rfind("explicit:", 0) == 0) {
    for (auto v : parse_index_list(src.substr(9))) {
      if (v >= field.q()) throw Error(ErrorKind::ElementOutOfField, "index " + std::to_string(v) + " outside the field");
      out.push_back(v);
    }
  } else if (src.rfind("file:", 0) == 0) {
    std::ifstream in(src.substr(5));
    if (!in) throw Error(ErrorKind::Usage, "cannot open " + src.substr(5));
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') {
      for (const auto& item : json::parse(text)) {
        if (item.is_number_unsigned()) out.push_back(element_index(field, {item.get<std::uint64_t>()}));
        else out.push_back(element_index(field, item.get<std::vector<std::uint64_t>>()));
      }
    } else {
      std::istringstream lines(text);
      std::string line;
      while (std::getline(lines, line)) {
        std::string cleaned;
        for (char ch : line)
          if (ch != '(' && ch != ')') cleaned.push_back(ch);
        const auto coeffs = parse_index_list(cleaned);
        if (coeffs.empty()) continue;
        out.push_back(coeffs.size() == 1 ? (coeffs[0] < field.q() ? coeffs[0]
                                                                    : throw Error(ErrorKind::ElementOutOfField,
                                                                                  "index outside the field"))
                                         : element_index(field, coeffs));
      }
    }
  } else {
    throw Error(ErrorKind::Usage, "unknown set source '" + src + "'");
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi) {
  if (hi > 100000) throw Error(ErrorKind::InvalidRange, "prime range above 100000");
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = std::max<std::uint64_t>(lo, 2); n <= hi; ++n)
    if (is_prime(n)) out.push_back(n);
  return out;
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    const auto& c = cells[i];
    if (c.find_first_of(",\"\n") == std::string::npos) {
      line += c;
    } else {
      line += '"';
      for (char ch : c) {
        if (ch == '"') line += '"';
        line += ch;
      }
      line += '"';
    }
  }
  return line;
}

}  // namespace ffprog::harness
