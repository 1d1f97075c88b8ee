#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ffprog/counting.hpp"
#include "json.hpp"

namespace ffprog {

/// How to treat (x, y) whose points x, x+P_1(y), ... are not all distinct.
/// Literal keeps the collapsed edge (possibly a singleton), DistinctPoints
/// keeps only edges with m+1 distinct vertices.
enum class Degeneracy { Literal, DistinctPoints };
const char* to_string(Degeneracy d);
const char* to_string(YRule r);

struct ProgressionHypergraph {
  FieldSpec field;
  std::vector<std::vector<std::uint32_t>> edges;  // sorted vertex sets, deduplicated, sorted
  YRule y_rule = YRule::Nonzero;
  Degeneracy degeneracy = Degeneracy::Literal;
  std::uint64_t generating_pairs = 0;  // (x, y) pairs enumerated before deduplication
  std::size_t uniformity = 0;          // m + 1
};

/// Throws TwistedSystem for a nonempty Q list.
ProgressionHypergraph build_hypergraph(const ProgressionSystem& system, const FieldSpec& field, YRule rule,
                                       Degeneracy degeneracy);

/// No edge lies entirely inside `vertices`.
bool is_independent(const ProgressionHypergraph& h, std::span<const std::uint64_t> vertices);

struct ExtremalResult {
  std::uint64_t q = 0;
  std::size_t r = 0;
  std::vector<std::uint64_t> witness;  // ascending element indices
  bool exact = false;
  std::uint64_t nodes_explored = 0;
  double wall_ms = 0.0;
};

/// Largest vertex count allowed by the bitset search.
inline constexpr std::uint64_t kMaxExactVertices = 512;

/// Maximum independent set by depth-first branch and bound: vertices in
/// ascending order, include-branch first, upper bound from a greedy clique
/// cover of the pair conflicts induced by the partial set. The witness is the
/// first maximum reached, so it is deterministic. exact is false iff more
/// than node_budget nodes were needed. Throws InvalidRange for q > 512.
ExtremalResult r_exact(const ProgressionHypergraph& h, std::uint64_t node_budget);

/// Best of `iters` greedy insertions in random order; exact = false.
ExtremalResult r_lower_random(const ProgressionHypergraph& h, std::uint64_t iters, std::uint64_t seed);

struct GammaFit {
  double gamma_hat = 0.0;  // r ~ C q^{1 - gamma_hat}
  double stderr_ = 0.0;
  std::size_t points_used = 0;
  std::vector<double> residuals;
};

/// Least squares of log r on log q over exact results with r >= 1.
/// Throws InsufficientData with fewer than three such results.
GammaFit gamma_fit(std::span<const ExtremalResult> results);

nlohmann::json to_json(const ExtremalResult& r);

}  // namespace ffprog
