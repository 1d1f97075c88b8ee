#include "ffprog/extremal.hpp"

#include <algorithm>
#include <bitset>
#include <chrono>
#include <cmath>
#include <numeric>

#include "ffprog/error.hpp"
#include "ffprog/numeric.hpp"
#include "ffprog/random.hpp"

namespace ffprog {

const char* to_string(Degeneracy d) { return d == Degeneracy::Literal ? "literal" : "distinct_points"; }
const char* to_string(YRule r) { return r == YRule::All ? "all" : "nonzero"; }

ProgressionHypergraph build_hypergraph(const ProgressionSystem& system, const FieldSpec& field, YRule rule,
                                       Degeneracy degeneracy) {
  if (system.m2() != 0) throw Error(ErrorKind::TwistedSystem, "hypergraph needs an untwisted system");
  ProgressionHypergraph h{field, {}, rule, degeneracy, 0, system.m1() + 1};
  const std::uint64_t q = field.q();
  std::vector<std::vector<std::uint64_t>> tabs;
  for (const auto& p : system.P()) tabs.push_back(evaluation_table(p, field));

  std::vector<std::uint32_t> e;
  for (std::uint64_t y = (rule == YRule::Nonzero ? 1 : 0); y < q; ++y) {
    for (std::uint64_t x = 0; x < q; ++x) {
      ++h.generating_pairs;
      e.assign(1, static_cast<std::uint32_t>(x));
      for (const auto& t : tabs) e.push_back(static_cast<std::uint32_t>(field.add_index(x, t[y])));
      std::sort(e.begin(), e.end());
      e.erase(std::unique(e.begin(), e.end()), e.end());
      if (degeneracy == Degeneracy::DistinctPoints && e.size() != h.uniformity) continue;
      h.edges.push_back(e);
    }
  }
  std::sort(h.edges.begin(), h.edges.end());
  h.edges.erase(std::unique(h.edges.begin(), h.edges.end()), h.edges.end());
  return h;
}

bool is_independent(const ProgressionHypergraph& h, std::span<const std::uint64_t> vertices) {
  std::vector<char> in(h.field.q(), 0);
  for (auto v : vertices) {
    if (v >= h.field.q()) throw Error(ErrorKind::ElementOutOfField, "vertex outside the field");
    in[v] = 1;
  }
  for (const auto& e : h.edges)
    if (std::all_of(e.begin(), e.end(), [&](std::uint32_t v) { return in[v] != 0; })) return false;
  return true;
}

namespace {

using Bits = std::bitset<kMaxExactVertices>;

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

int lowest(const Bits& b) {
  if (b.none()) return -1;
  return static_cast<int>(b._Find_first());
}

class BranchAndBound {
 public:
  BranchAndBound(const ProgressionHypergraph& h, std::uint64_t budget) : h_(h), q_(h.field.q()), budget_(budget) {
    incident_.resize(q_);
    edge_bits_.resize(h.edges.size());
    for (std::size_t i = 0; i < h.edges.size(); ++i) {
      for (auto v : h.edges[i]) {
        edge_bits_[i].set(v);
        incident_[v].push_back(static_cast<std::uint32_t>(i));
      }
    }
  }

  ExtremalResult run() {
    const auto start = std::chrono::steady_clock::now();
    Bits candidates;
    for (std::uint64_t v = 0; v < q_; ++v) candidates.set(v);
    for (const auto& e : h_.edges)
      if (e.size() == 1) candidates.reset(e[0]);
    Bits chosen;
    search(chosen, 0, candidates);

    ExtremalResult r;
    r.q = q_;
    r.r = best_size_;
    for (std::uint64_t v = 0; v < q_; ++v)
      if (best_.test(v)) r.witness.push_back(v);
    r.exact = !aborted_;
    r.nodes_explored = nodes_;
    r.wall_ms = elapsed_ms(start);
    return r;
  }

 private:
  // Greedy clique cover of the candidates under pair conflicts: candidate
  // pairs {u, w} that would complete an edge together with `chosen`.
  std::size_t clique_cover_bound(const Bits& chosen, const Bits& candidates) const {
    std::vector<Bits> adj(q_);
    for (std::size_t i = 0; i < edge_bits_.size(); ++i) {
      const Bits rest = edge_bits_[i] & ~chosen;
      if (rest.count() != 2 || (rest & ~candidates).any()) continue;
      const int u = lowest(rest);
      Bits tmp = rest;
      tmp.reset(u);
      const int w = lowest(tmp);
      adj[u].set(w);
      adj[w].set(u);
    }
    Bits remaining = candidates;
    std::size_t cliques = 0;
    while (remaining.any()) {
      const int v = lowest(remaining);
      remaining.reset(v);
      Bits pool = adj[v] & remaining;
      while (pool.any()) {
        const int w = lowest(pool);
        remaining.reset(w);
        pool &= adj[w];
        pool.reset(w);
      }
      ++cliques;
    }
    return cliques;
  }

  void search(Bits& chosen, std::size_t size, Bits candidates) {
    if (aborted_) return;
    if (++nodes_ > budget_) {
      aborted_ = true;
      return;
    }
    if (size > best_size_ || (best_size_ == 0 && nodes_ == 1)) {
      best_size_ = size;
      best_ = chosen;
    }
    if (candidates.none()) return;
    if (size + candidates.count() <= best_size_) return;
    if (size + clique_cover_bound(chosen, candidates) <= best_size_) return;

    const int v = lowest(candidates);
    candidates.reset(v);

    // Include v: forbid every candidate that would now close an edge.
    chosen.set(v);
    Bits next = candidates;
    for (auto ei : incident_[v]) {
      const Bits rest = edge_bits_[ei] & ~chosen;
      if (rest.count() == 1) next &= ~rest;
    }
    search(chosen, size + 1, next);
    chosen.reset(v);

    search(chosen, size, candidates);
  }

  const ProgressionHypergraph& h_;
  std::uint64_t q_;
  std::uint64_t budget_;
  std::vector<Bits> edge_bits_;
  std::vector<std::vector<std::uint32_t>> incident_;
  Bits best_;
  std::size_t best_size_ = 0;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
};

}  // namespace

ExtremalResult r_exact(const ProgressionHypergraph& h, std::uint64_t node_budget) {
  if (h.field.q() > kMaxExactVertices) throw Error(ErrorKind::InvalidRange, "exact search supports q <= 512");
  return BranchAndBound(h, node_budget).run();
}

ExtremalResult r_lower_random(const ProgressionHypergraph& h, std::uint64_t iters, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t q = h.field.q();
  std::vector<std::vector<std::uint32_t>> incident(q);
  for (std::size_t i = 0; i < h.edges.size(); ++i)
    for (auto v : h.edges[i]) incident[v].push_back(static_cast<std::uint32_t>(i));

  SplitMix64 rng(seed);
  std::vector<std::uint64_t> order(q);
  std::vector<char> in(q);
  ExtremalResult best;
  best.q = q;
  for (std::uint64_t it = 0; it < iters; ++it) {
    std::iota(order.begin(), order.end(), 0);
    for (std::uint64_t i = q; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    std::fill(in.begin(), in.end(), 0);
    std::size_t size = 0;
    for (auto v : order) {
      in[v] = 1;
      bool closes = false;
      for (auto ei : incident[v]) {
        const auto& e = h.edges[ei];
        if (std::all_of(e.begin(), e.end(), [&](std::uint32_t u) { return in[u] != 0; })) {
          closes = true;
          break;
        }
      }
      if (closes) in[v] = 0;
      else ++size;
    }
    if (size > best.r || it == 0) {
      best.r = size;
      best.witness.clear();
      for (std::uint64_t v = 0; v < q; ++v)
        if (in[v]) best.witness.push_back(v);
    }
  }
  best.exact = false;
  best.nodes_explored = iters;
  best.wall_ms = elapsed_ms(start);
  return best;
}

GammaFit gamma_fit(std::span<const ExtremalResult> results) {
  std::vector<double> x, y;
  for (const auto& r : results) {
    if (!r.exact || r.r < 1) continue;
    x.push_back(std::log(static_cast<double>(r.q)));
    y.push_back(std::log(static_cast<double>(r.r)));
  }
  if (x.size() < 3) throw Error(ErrorKind::InsufficientData, "need at least three exact results with r >= 1");
  const auto fit = least_squares(x, y);
  GammaFit g;
  g.gamma_hat = 1.0 - fit.slope;
  g.stderr_ = fit.slope_stderr;
  g.points_used = x.size();
  g.residuals = fit.residuals;
  return g;
}

nlohmann::json to_json(const ExtremalResult& r) {
  return {{"q", r.q}, {"r", r.r}, {"witness", r.witness}, {"exact", r.exact}, {"nodes", r.nodes_explored},
          {"ms", r.wall_ms}};
}

}  // namespace ffprog
