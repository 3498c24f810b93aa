#include "fxlab/dense_solver.hpp"

#include <cmath>
#include <utility>

#include "fxlab/error.hpp"

namespace fxlab {

namespace {

constexpr double kSingularPivot = 1e-300;
// Below this many trailing rows the fork/join cost outweighs the update.
constexpr std::ptrdiff_t kParallelRows = 96;

std::size_t choose_pivot(const DenseMatrix& a, std::size_t col) {
  std::size_t best = col;
  double best_abs = std::abs(a(col, col));
  for (std::size_t r = col + 1; r < a.size(); ++r) {
    double v = std::abs(a(r, col));
    if (v > best_abs) {
      best_abs = v;
      best = r;
    }
  }
  if (!(best_abs > kSingularPivot)) {
    throw Error(ErrorCode::SolverSingular, "zero pivot in column " + std::to_string(col));
  }
  return best;
}

void swap_rows(DenseMatrix& a, std::vector<double>& b, std::size_t r1, std::size_t r2) {
  if (r1 == r2) return;
  auto x = a.row(r1);
  auto y = a.row(r2);
  for (std::size_t c = 0; c < a.size(); ++c) std::swap(x[c], y[c]);
  std::swap(b[r1], b[r2]);
}

// Eliminates column `col` from row `r` using the pivot row.
inline void eliminate_row(DenseMatrix& a, std::vector<double>& b, std::size_t col, std::size_t r) {
  const std::size_t n = a.size();
  const double factor = a(r, col) / a(col, col);
  if (factor == 0.0) return;
  double* dst = &a(r, 0);
  const double* src = &a(col, 0);
  dst[col] = 0.0;
  for (std::size_t c = col + 1; c < n; ++c) dst[c] -= factor * src[c];
  b[r] -= factor * b[col];
}

std::vector<double> back_substitute(const DenseMatrix& a, std::vector<double> b) {
  const std::size_t n = a.size();
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a(i, c) * b[c];
    b[i] = s / a(i, i);
  }
  return b;
}

void check_shape(const DenseMatrix& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "matrix/rhs size mismatch");
}

}  // namespace

std::vector<double> solve_dense_serial(DenseMatrix a, std::vector<double> b) {
  check_shape(a, b);
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    swap_rows(a, b, col, choose_pivot(a, col));
    for (std::size_t r = col + 1; r < n; ++r) eliminate_row(a, b, col, r);
  }
  return back_substitute(a, std::move(b));
}

std::vector<double> solve_dense(DenseMatrix a, std::vector<double> b) {
  check_shape(a, b);
  const auto n = std::ptrdiff_t(a.size());
  for (std::ptrdiff_t col = 0; col < n; ++col) {
    swap_rows(a, b, std::size_t(col), choose_pivot(a, std::size_t(col)));
#pragma omp parallel for schedule(static) if (n - col > kParallelRows)
    for (std::ptrdiff_t r = col + 1; r < n; ++r) eliminate_row(a, b, std::size_t(col), std::size_t(r));
  }
  return back_substitute(a, std::move(b));
}

}  // namespace fxlab
