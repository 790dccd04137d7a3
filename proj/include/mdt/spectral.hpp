#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace mdt {

// Row-compressed sparse matrix with double entries.
struct CsrMatrix {
  std::size_t dim = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::uint32_t> col;
  std::vector<double> val;

  std::size_t nnz() const noexcept { return col.size(); }
  void multiply(const std::vector<double>& x, std::vector<double>& y) const;
  CsrMatrix transposed() const;
  double at(std::size_t r, std::size_t c) const;
  std::vector<std::vector<double>> to_dense() const;
  static CsrMatrix from_dense(const std::vector<std::vector<double>>& dense);
  static CsrMatrix identity(std::size_t dim);
};

struct PerronResult {
  double rho = 0.0;
  // Normalized so that sum(right) = 1 and left . right = 1.
  std::vector<double> left;
  std::vector<double> right;
  std::size_t iterations = 0;
  double residual = 0.0;
};

inline constexpr double kDefaultEigenTolerance = 1e-13;

// Strongly connected components of the support pattern, in Tarjan order.
std::vector<std::vector<std::uint32_t>> strong_components(const CsrMatrix& m);
bool is_irreducible(const CsrMatrix& m);

// Perron root and eigenvector pair of a nonnegative matrix. Reducible input
// is split into strongly connected blocks and the largest block root wins.
PerronResult spectral_radius(const CsrMatrix& m, double tolerance = kDefaultEigenTolerance);

// Matrix-free variant: power iteration only, on an operator assumed
// irreducible and aperiodic.
struct LinearOperator {
  std::size_t dim = 0;
  std::function<void(const std::vector<double>&, std::vector<double>&)> apply;
  std::function<void(const std::vector<double>&, std::vector<double>&)> apply_transpose;
};

PerronResult spectral_radius(const LinearOperator& op, double tolerance = kDefaultEigenTolerance,
                             std::size_t max_iterations = 20000);

}  // namespace mdt
