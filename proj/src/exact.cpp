#include "fxlab/exact.hpp"

#include <cmath>

#include "fxlab/dense_solver.hpp"
#include "fxlab/error.hpp"

namespace fxlab {

namespace {

// Configurations are n-bit masks; bit u set means node u is a mutant.
using Mask = std::uint32_t;
constexpr std::size_t kMaskBits = 26;

void check_size(const Graph& g, std::size_t cap_n) {
  const std::size_t limit = std::min(cap_n, kMaskBits);
  if (g.size() > limit) {
    throw Error(ErrorCode::TooLarge, "exact solving is capped at n = " + std::to_string(limit) +
                                         " (got " + std::to_string(g.size()) + ")");
  }
}

inline bool has(Mask x, NodeId u) { return (x >> u) & 1u; }

// System for fixation probabilities from every transient configuration, with
// unknown X stored at index X - 1. Row X reads
//   (1 - P(X,X)) x_X - sum_{Y transient, Y != X} P(X,Y) x_Y = P(X,V).
// 1 - P(X,X) is accumulated as the total leaving probability.
struct ChainSystem {
  DenseMatrix a;
  std::vector<double> rhs;
};

ChainSystem build_chain(const Graph& g, const std::vector<std::uint8_t>& active, double delta,
                        bool transpose = false) {
  const std::size_t n = g.size();
  const Mask full = (Mask{1} << n) - 1;
  const std::size_t m = full - 1;
  ChainSystem sys{DenseMatrix(m), std::vector<double>(m, 0.0)};
  for (Mask x = 1; x < full; ++x) {
    const std::size_t row = x - 1;
    double total = 0.0;
    for (NodeId u = 0; u < n; ++u) total += (has(x, u) && active[u]) ? 1.0 + delta : 1.0;
    double leaving = 0.0;
    for (NodeId u = 0; u < n; ++u) {
      const bool mutant = has(x, u);
      const double birth = ((mutant && active[u]) ? 1.0 + delta : 1.0) / total;
      auto t = g.out_neighbors(u);
      auto w = g.out_weights(u);
      for (std::size_t i = 0; i < t.size(); ++i) {
        const NodeId v = t[i];
        if (has(x, v) == mutant) continue;
        const double p = birth * w[i];
        const Mask y = mutant ? (x | (Mask{1} << v)) : (x & ~(Mask{1} << v));
        leaving += p;
        if (y == full) {
          sys.rhs[row] += p;
        } else if (y != 0) {
          (transpose ? sys.a(y - 1, row) : sys.a(row, y - 1)) -= p;
        }
      }
    }
    sys.a(row, row) += leaving;
  }
  return sys;
}

ExactResult summarize(std::vector<double> per_start) {
  ExactResult r;
  double s = 0.0;
  for (double v : per_start) s += v;
  r.average = s / double(per_start.size());
  r.per_start = std::move(per_start);
  return r;
}

}  // namespace

ExactResult exact_fp(const Graph& g, const ActiveSet& active, double delta, std::size_t cap_n) {
  check_size(g, cap_n);
  if (!std::isfinite(delta) || delta < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "delta must be finite and >= 0");
  }
  const std::size_t n = g.size();
  auto sys = build_chain(g, active.mask(n), delta);
  const auto x = solve_dense(std::move(sys.a), std::move(sys.rhs));
  std::vector<double> per_start(n);
  for (NodeId u = 0; u < n; ++u) per_start[u] = x[(Mask{1} << u) - 1];
  return summarize(std::move(per_start));
}

ExactResult exact_fp_strong(const Graph& g, const ActiveSet& active, std::size_t cap_n) {
  if (!g.undirected()) {
    throw Error(ErrorCode::DirectedUnsupported, "strong-selection limit requires an undirected graph");
  }
  check_size(g, cap_n);
  const std::size_t n = g.size();
  const auto in_s = active.mask(n);

  // Unknowns are the non-empty subsets of the inactive nodes R, addressed by
  // their compressed mask over R. If S is empty, R = V and V itself is absorbing.
  std::vector<int> pos(n, -1);
  std::vector<NodeId> inactive;
  for (NodeId u = 0; u < n; ++u) {
    if (!in_s[u]) {
      pos[u] = int(inactive.size());
      inactive.push_back(u);
    }
  }
  const std::size_t r = inactive.size();
  const Mask all_r = (Mask{1} << r) - 1;
  const bool s_empty = r == n;
  const std::size_t m = s_empty ? all_r - 1 : all_r;

  std::vector<double> per_start(n, 1.0);
  if (m == 0) return summarize(std::move(per_start));

  DenseMatrix a(m);
  std::vector<double> rhs(m, 0.0);
  const double birth = 1.0 / double(n);
  for (Mask c = 1; c <= m; ++c) {
    Mask x = 0;
    for (std::size_t b = 0; b < r; ++b)
      if ((c >> b) & 1u) x |= Mask{1} << inactive[b];

    const std::size_t row = c - 1;
    double leaving = 0.0;
    for (NodeId u = 0; u < n; ++u) {
      const bool mutant = has(x, u);
      auto t = g.out_neighbors(u);
      auto w = g.out_weights(u);
      for (std::size_t i = 0; i < t.size(); ++i) {
        const NodeId v = t[i];
        if (has(x, v) == mutant) continue;
        const double p = birth * w[i];
        leaving += p;
        if (mutant) {
          if (in_s[v]) {
            rhs[row] += p;
            continue;
          }
          const Mask y = c | (Mask{1} << pos[v]);
          if (s_empty && y == all_r) {
            rhs[row] += p;
          } else {
            a(row, y - 1) -= p;
          }
        } else {
          // v is a mutant, hence inactive.
          const Mask y = c & ~(Mask{1} << pos[v]);
          if (y != 0) a(row, y - 1) -= p;
        }
      }
    }
    a(row, row) += leaving;
  }
  const auto x = solve_dense(std::move(a), std::move(rhs));
  for (NodeId u = 0; u < n; ++u) {
    if (!in_s[u]) per_start[u] = x[(Mask{1} << pos[u]) - 1];
  }
  return summarize(std::move(per_start));
}

std::vector<double> exact_occupation_psi(const Graph& g, std::size_t cap_n) {
  check_size(g, cap_n);
  const std::size_t n = g.size();
  // Expected visits v solve (I - Q)^T v = start distribution.
  auto sys = build_chain(g, std::vector<std::uint8_t>(n, 0), 0.0, true);
  const std::size_t m = sys.a.size();
  std::vector<double> start(m, 0.0);
  for (NodeId u = 0; u < n; ++u) start[(Mask{1} << u) - 1] = 1.0 / double(n);
  const auto visits = solve_dense(std::move(sys.a), std::move(start));

  std::vector<double> psi(n * n, 0.0);
  for (Mask x = 1; x <= m; ++x) {
    const double v = visits[x - 1];
    for (NodeId i = 0; i < n; ++i) {
      if (!has(x, i)) continue;
      for (NodeId j = 0; j < n; ++j)
        if (!has(x, j)) psi[i * n + j] += v;
    }
  }
  return psi;
}

double finite_diff_fp_derivative(const Graph& g, const ActiveSet& active, double h, std::size_t cap_n) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "step h must be > 0");
  const double fp_h = exact_fp(g, active, h, cap_n).average;
  const double fp_0 = exact_fp(g, active, 0.0, cap_n).average;
  return (fp_h - fp_0) / h;
}

}  // namespace fxlab
