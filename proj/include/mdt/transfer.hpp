#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "mdt/bignum.hpp"
#include "mdt/graphs.hpp"
#include "mdt/spectral.hpp"

namespace mdt {

using Subset = std::uint32_t;

inline constexpr std::size_t kDefaultWidthGuard = 16;
inline constexpr std::size_t kMatrixFreeThreshold = 4096;

void check_width(std::size_t width, std::size_t width_guard);

// Matching polynomials of the base graph induced on every vertex subset W.
// c_ST is the entry for W = U \ (S u T) when S and T are disjoint.
class IntraLayerTable {
 public:
  IntraLayerTable() = default;
  static IntraLayerTable build(const Graph& base, std::size_t width_guard = kDefaultWidthGuard);

  std::size_t width() const noexcept { return width_; }
  Subset full() const noexcept { return static_cast<Subset>((std::size_t{1} << width_) - 1); }
  // Coefficients of the matching polynomial of F[W], lowest degree first.
  const std::vector<std::int64_t>& induced(Subset w) const { return polys_[w]; }
  // c_ST; empty when S and T intersect.
  std::vector<std::int64_t> c(Subset s, Subset t) const;

 private:
  std::size_t width_ = 0;
  std::vector<std::vector<std::int64_t>> polys_;
};

// Sparse nonnegative integer matrix of permanents per(A[S,T]).
class ConnectionLift {
 public:
  struct Entry {
    Subset col;
    std::int64_t value;
  };

  ConnectionLift() = default;
  static ConnectionLift build(const ConnectionMatrix& a, std::size_t width_guard = kDefaultWidthGuard);

  std::size_t width() const noexcept { return width_; }
  std::size_t dim() const noexcept { return rows_.size(); }
  const std::vector<Entry>& row(Subset s) const { return rows_[s]; }
  std::int64_t at(Subset s, Subset t) const;
  std::size_t nnz() const noexcept;
  bool is_permutation() const;

 private:
  std::size_t width_ = 0;
  std::vector<std::vector<Entry>> rows_;
};

ConnectionLift lift_connection(const ConnectionMatrix& a, std::size_t width_guard = kDefaultWidthGuard);
IntraLayerTable build_intra_table(const Graph& base, std::size_t width_guard = kDefaultWidthGuard);

// B(t) = sum_i e^{it} B_i with B_i integer matrices, i = 0..N, N = #U.
class TransferMatrix {
 public:
  struct Term {
    std::uint8_t power;
    std::int64_t coeff;
  };

  TransferMatrix() = default;
  TransferMatrix(const LayeredFamily& family, std::size_t width_guard = kDefaultWidthGuard);
  // Ã replaced by the identity: the matrix M(t).
  static TransferMatrix intra_only(const Graph& base, std::size_t width_guard = kDefaultWidthGuard);

  std::size_t width() const noexcept { return table_.width(); }
  std::size_t dim() const noexcept { return std::size_t{1} << width(); }
  bool matrix_free() const noexcept { return dim() > kMatrixFreeThreshold; }
  const IntraLayerTable& table() const noexcept { return table_; }
  const ConnectionLift& lift() const noexcept { return lift_; }

  // Stored pattern; empty when matrix_free().
  const std::vector<std::size_t>& row_ptr() const noexcept { return row_ptr_; }
  const std::vector<Subset>& cols() const noexcept { return cols_; }
  const std::vector<std::size_t>& term_ptr() const noexcept { return term_ptr_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }

  // sum_i e^{it} B_i; RangeError when some exponent leaves double range.
  CsrMatrix evaluate(double t) const;
  // sum_i i e^{it} B_i
  CsrMatrix derivative(double t) const;
  // sum_i e^{(i-N)t} B_i and its i-weighted companion.
  CsrMatrix evaluate_shifted(double t) const;
  CsrMatrix derivative_shifted(double t) const;

  // Operators for the matrix-free path (any dimension).
  LinearOperator operator_at(double t, bool shifted) const;
  // left^T (sum_i i e^{(i - shift N)t} B_i) right without materializing.
  double derivative_form(double t, bool shifted, const std::vector<double>& left,
                         const std::vector<double>& right) const;

  // C = b^N B(a/b) as exact integers, x = e^t = a/b.
  std::vector<std::vector<std::pair<Subset, BigInt>>> scaled_exact(const Rational& x, BigInt& scale) const;

  // "dim" line then "S T i coeff" per term.
  void dump(std::ostream& out) const;

 private:
  TransferMatrix(IntraLayerTable table, ConnectionLift lift);
  CsrMatrix assemble(double t, bool shifted, bool weighted) const;
  std::vector<double> weights(double t, bool shifted, bool weighted) const;

  IntraLayerTable table_;
  ConnectionLift lift_;
  std::vector<std::size_t> row_ptr_;
  std::vector<Subset> cols_;
  std::vector<std::size_t> term_ptr_;
  std::vector<Term> terms_;
};

// Convenience: Perron data of B(t), shifted form when requested.
PerronResult transfer_perron(const TransferMatrix& tm, double t, bool shifted, double tolerance = kDefaultEigenTolerance);

// tr B^n at e^t = x, exact, for n >= 2.
Rational exact_trace_power(const TransferMatrix& tm, const Rational& x, std::size_t n,
                           std::size_t max_dim = kMatrixFreeThreshold);

// Characteristic polynomial det(zI - B(x)) by Faddeev-LeVerrier, lowest
// degree first, dimension <= 16.
std::vector<Rational> exact_characteristic_polynomial(const TransferMatrix& tm, const Rational& x);
// Largest real root of a rational polynomial, isolated with a Sturm chain.
double largest_real_root(const std::vector<Rational>& poly);

struct MaxPressureRow {
  double t = 0.0;
  double pressure_connected = 0.0;  // log rho(M(t) Ã) / #U
  double pressure_layers = 0.0;     // log rho(M(t)) / #U
  double margin = 0.0;              // pressure_layers - pressure_connected
  bool holds = true;
};

std::vector<MaxPressureRow> max_pressure_check(const Graph& base, const ConnectionMatrix& a,
                                               const std::vector<double>& t_list, double slack = 1e-10,
                                               double tolerance = kDefaultEigenTolerance);

}  // namespace mdt
