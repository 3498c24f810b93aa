#pragma once

#include <vector>

#include "fxlab/graph.hpp"

namespace fxlab {

inline constexpr std::size_t kDefaultExactCap = 12;

struct ExactResult {
  /// Fixation probability from each singleton start {u}.
  std::vector<double> per_start;
  /// Mean of per_start, i.e. fp under a uniformly placed mutant.
  double average = 0.0;
};

/// Solves the absorbing chain over all 2^n configurations. Dense elimination,
/// O(8^n) time and O(4^n) memory.
ExactResult exact_fp(const Graph& g, const ActiveSet& active, double delta,
                     std::size_t cap_n = kDefaultExactCap);

/// Strong-selection limit: neutral chain on configurations avoiding S, with any
/// configuration touching S counted as fixation. Undirected graphs only.
ExactResult exact_fp_strong(const Graph& g, const ActiveSet& active,
                            std::size_t cap_n = kDefaultExactCap);

/// Expected number of neutral steps spent with i mutant and j resident,
/// starting from a uniform singleton. Row-major n x n; diagonal is zero.
std::vector<double> exact_occupation_psi(const Graph& g, std::size_t cap_n = kDefaultExactCap);

/// Forward difference (fp(h) - fp(0)) / h, both sides from exact_fp.
double finite_diff_fp_derivative(const Graph& g, const ActiveSet& active, double h = 1e-5,
                                 std::size_t cap_n = kDefaultExactCap);

}  // namespace fxlab
