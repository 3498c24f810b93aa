#pragma once

#include <vector>

#include "fxlab/graph.hpp"

namespace fxlab {

/// Neutral fixation probability from each singleton start.
std::vector<double> solve_pi(const Graph& g);

/// pi_i proportional to 1/deg(u_i). Undirected graphs only.
std::vector<double> pi_closed_form_undirected(const Graph& g);

/// Expected neutral time with i mutant and j resident, as a row-major n x n
/// table with zero diagonal. Solves the n(n-1) pair system densely, O(n^6).
std::vector<double> solve_psi(const Graph& g);

/// alpha(u_i) = (1/n) sum_j p_ij pi_j psi_ij, the first-order gain from
/// activating u_i.
std::vector<double> alpha_scores(const Graph& g);

/// pi, psi and alpha for one graph, computed once.
struct WeakSelectionTables {
  std::vector<double> pi;
  std::vector<double> psi;
  std::vector<double> alpha;

  static WeakSelectionTables compute(const Graph& g);
};

struct WeakSelection {
  ActiveSet chosen;
  double objective = 0.0;
};

/// Sum of scores over a set. Values are added largest first so that sets
/// holding the same multiset of scores give the same bits.
double linear_objective(const std::vector<double>& scores, const ActiveSet& set);

/// Top-min(k, n) nodes by alpha, lower index first on ties.
WeakSelection weak_select(const WeakSelectionTables& tables, std::size_t k);
WeakSelection weak_select(const Graph& g, std::size_t k);

}  // namespace fxlab
