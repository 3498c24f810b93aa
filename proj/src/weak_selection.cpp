#include "fxlab/weak_selection.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "fxlab/dense_solver.hpp"
#include "fxlab/error.hpp"

namespace fxlab {

std::vector<double> solve_pi(const Graph& g) {
  const std::size_t n = g.size();
  // Balance rows: (sum_j p_ji) pi_i - sum_j p_ij pi_j = 0. The last one is
  // replaced by sum_i pi_i = 1.
  DenseMatrix a(n);
  std::vector<double> b(n, 0.0);
  for (NodeId i = 0; i + 1 < n; ++i) {
    for (double w : g.in_weights(i)) a(i, i) += w;
    auto t = g.out_neighbors(i);
    auto w = g.out_weights(i);
    for (std::size_t e = 0; e < t.size(); ++e) a(i, t[e]) -= w[e];
  }
  for (std::size_t j = 0; j < n; ++j) a(n - 1, j) = 1.0;
  b[n - 1] = 1.0;
  return solve_dense(std::move(a), std::move(b));
}

std::vector<double> pi_closed_form_undirected(const Graph& g) {
  if (!g.undirected()) {
    throw Error(ErrorCode::DirectedUnsupported, "closed-form pi needs an undirected graph");
  }
  std::vector<double> pi(g.size());
  double total = 0.0;
  for (NodeId u = 0; u < g.size(); ++u) {
    pi[u] = 1.0 / double(g.degree(u));
    total += pi[u];
  }
  for (double& v : pi) v /= total;
  return pi;
}

std::vector<double> solve_psi(const Graph& g) {
  const std::size_t n = g.size();
  const std::size_t m = n * (n - 1);
  // Pair (i, j), i != j, in row-major order with the diagonal skipped.
  auto index = [n](std::size_t i, std::size_t j) { return i * (n - 1) + (j < i ? j : j - 1); };

  std::vector<double> heat(n, 0.0);
  for (NodeId u = 0; u < n; ++u) heat[u] = temperature(g, u);

  // (sum_l p_li + p_lj) psi_ij - sum_l p_li psi_lj - sum_l p_lj psi_il = 1
  DenseMatrix a(m);
  std::vector<double> b(m, 1.0);
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      if (i == j) continue;
      const std::size_t row = index(i, j);
      a(row, row) += heat[i] + heat[j];
      auto src_i = g.in_neighbors(i);
      auto w_i = g.in_weights(i);
      for (std::size_t e = 0; e < src_i.size(); ++e) {
        if (src_i[e] != j) a(row, index(src_i[e], j)) -= w_i[e];
      }
      auto src_j = g.in_neighbors(j);
      auto w_j = g.in_weights(j);
      for (std::size_t e = 0; e < src_j.size(); ++e) {
        if (src_j[e] != i) a(row, index(i, src_j[e])) -= w_j[e];
      }
    }
  }
  const auto x = solve_dense(std::move(a), std::move(b));

  std::vector<double> psi(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) psi[i * n + j] = x[index(i, j)];
  return psi;
}

namespace {

std::vector<double> combine_alpha(const Graph& g, const std::vector<double>& pi,
                                  const std::vector<double>& psi) {
  const std::size_t n = g.size();
  std::vector<double> alpha(n, 0.0);
  for (NodeId i = 0; i < n; ++i) {
    auto t = g.out_neighbors(i);
    auto w = g.out_weights(i);
    double s = 0.0;
    for (std::size_t e = 0; e < t.size(); ++e) s += w[e] * pi[t[e]] * psi[i * n + t[e]];
    alpha[i] = s / double(n);
  }
  return alpha;
}

}  // namespace

std::vector<double> alpha_scores(const Graph& g) { return combine_alpha(g, solve_pi(g), solve_psi(g)); }

WeakSelectionTables WeakSelectionTables::compute(const Graph& g) {
  WeakSelectionTables t;
  t.pi = solve_pi(g);
  t.psi = solve_psi(g);
  t.alpha = combine_alpha(g, t.pi, t.psi);
  return t;
}

double linear_objective(const std::vector<double>& scores, const ActiveSet& set) {
  std::vector<double> picked;
  picked.reserve(set.size());
  for (NodeId u : set) picked.push_back(scores.at(u));
  std::sort(picked.begin(), picked.end(), std::greater<>());
  double s = 0.0;
  for (double v : picked) s += v;
  return s;
}

WeakSelection weak_select(const WeakSelectionTables& tables, std::size_t k) {
  const auto& alpha = tables.alpha;
  std::vector<NodeId> order(alpha.size());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return alpha[a] > alpha[b]; });
  order.resize(std::min(k, order.size()));
  WeakSelection out;
  out.chosen = ActiveSet(std::move(order));
  out.objective = linear_objective(alpha, out.chosen);
  return out;
}

WeakSelection weak_select(const Graph& g, std::size_t k) {
  return weak_select(WeakSelectionTables::compute(g), k);
}

}  // namespace fxlab
