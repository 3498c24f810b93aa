#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fxlab {

/// Row-major square matrix.
class DenseMatrix {
 public:
  explicit DenseMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * n_, n_}; }

 private:
  std::size_t n_;
  std::vector<double> data_;
};

// Gaussian elimination with partial pivoting (largest magnitude, lowest row on
// ties). Both variants perform identical arithmetic, so their results agree
// bit for bit. Throws SolverSingular when a pivot falls below 1e-300.

/// OpenMP-parallel row updates.
std::vector<double> solve_dense(DenseMatrix a, std::vector<double> b);

/// Single-threaded reference.
std::vector<double> solve_dense_serial(DenseMatrix a, std::vector<double> b);

}  // namespace fxlab
