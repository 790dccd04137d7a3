#include "mdt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "mdt/errors.hpp"

namespace mdt {

void CsrMatrix::multiply(const std::vector<double>& x, std::vector<double>& y) const {
  y.assign(dim, 0.0);
  for (std::size_t r = 0; r < dim; ++r) {
    double acc = 0.0;
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) acc += val[k] * x[col[k]];
    y[r] = acc;
  }
}

CsrMatrix CsrMatrix::transposed() const {
  CsrMatrix t;
  t.dim = dim;
  t.row_ptr.assign(dim + 1, 0);
  for (auto c : col) ++t.row_ptr[c + 1];
  std::partial_sum(t.row_ptr.begin(), t.row_ptr.end(), t.row_ptr.begin());
  t.col.resize(nnz());
  t.val.resize(nnz());
  std::vector<std::size_t> fill(t.row_ptr.begin(), t.row_ptr.end() - 1);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
      const std::size_t slot = fill[col[k]]++;
      t.col[slot] = static_cast<std::uint32_t>(r);
      t.val[slot] = val[k];
    }
  return t;
}

double CsrMatrix::at(std::size_t r, std::size_t c) const {
  for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
    if (col[k] == c) return val[k];
  return 0.0;
}

std::vector<std::vector<double>> CsrMatrix::to_dense() const {
  std::vector<std::vector<double>> d(dim, std::vector<double>(dim, 0.0));
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) d[r][col[k]] += val[k];
  return d;
}

CsrMatrix CsrMatrix::from_dense(const std::vector<std::vector<double>>& dense) {
  CsrMatrix m;
  m.dim = dense.size();
  for (const auto& row : dense) {
    if (row.size() != m.dim) throw InvalidArgument("matrix must be square");
    for (std::size_t c = 0; c < row.size(); ++c)
      if (row[c] != 0.0) {
        m.col.push_back(static_cast<std::uint32_t>(c));
        m.val.push_back(row[c]);
      }
    m.row_ptr.push_back(m.col.size());
  }
  return m;
}

CsrMatrix CsrMatrix::identity(std::size_t dim) {
  CsrMatrix m;
  m.dim = dim;
  for (std::size_t r = 0; r < dim; ++r) {
    m.col.push_back(static_cast<std::uint32_t>(r));
    m.val.push_back(1.0);
    m.row_ptr.push_back(m.col.size());
  }
  return m;
}

std::vector<std::vector<std::uint32_t>> strong_components(const CsrMatrix& m) {
  // Iterative Tarjan.
  const std::size_t n = m.dim;
  constexpr std::uint32_t unvisited = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> index(n, unvisited), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::uint32_t> stack;
  std::vector<std::pair<std::uint32_t, std::size_t>> call;
  std::vector<std::vector<std::uint32_t>> components;
  std::uint32_t counter = 0;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    call.emplace_back(root, m.row_ptr[root]);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, edge] = call.back();
      if (edge < m.row_ptr[v + 1]) {
        const std::uint32_t w = m.col[edge++];
        if (m.val[edge - 1] == 0.0) continue;
        if (index[w] == unvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.emplace_back(w, m.row_ptr[w]);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::uint32_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        std::vector<std::uint32_t> comp;
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != done);
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
      }
    }
  }
  return components;
}

bool is_irreducible(const CsrMatrix& m) { return m.dim > 0 && strong_components(m).size() == 1; }

namespace {

using Apply = std::function<void(const std::vector<double>&, std::vector<double>&)>;

struct Bounds {
  double lo;
  double hi;
};

// Collatz-Wielandt bounds min/max (Bx)_i / x_i over the support of x.
Bounds collatz_wielandt(const std::vector<double>& x, const std::vector<double>& bx) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0) {
      const double q = bx[i] / x[i];
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    } else if (bx[i] > 0.0) {
      hi = std::numeric_limits<double>::infinity();
      lo = 0.0;
    } else {
      lo = 0.0;
    }
  }
  return {lo, hi};
}

void normalize_sum(std::vector<double>& x) {
  const double s = std::accumulate(x.begin(), x.end(), 0.0);
  for (auto& v : x) v /= s;
}

struct Iterate {
  double rho = 0.0;
  std::vector<double> vec;
  std::size_t iterations = 0;
  double gap = std::numeric_limits<double>::infinity();
  bool converged = false;
};

Iterate power_iterate(const Apply& apply, std::size_t dim, double tol, std::size_t cap) {
  Iterate it;
  it.vec.assign(dim, 1.0 / static_cast<double>(dim));
  std::vector<double> y;
  for (it.iterations = 1; it.iterations <= cap; ++it.iterations) {
    apply(it.vec, y);
    const auto [lo, hi] = collatz_wielandt(it.vec, y);
    const double s = std::accumulate(y.begin(), y.end(), 0.0);
    if (!(s > 0.0) || !std::isfinite(s)) break;
    it.rho = s;  // vec sums to one
    it.gap = std::isfinite(hi) ? (hi - lo) / hi : it.gap;
    for (std::size_t i = 0; i < dim; ++i) it.vec[i] = y[i] / s;
    if (std::isfinite(hi) && hi - lo <= tol * hi) {
      it.rho = 0.5 * (hi + lo);
      it.converged = true;
      return it;
    }
  }
  it.iterations = std::min(it.iterations, cap);
  return it;
}

// Noda's inverse iteration with Rayleigh-type shift sigma = max CW ratio.
Iterate noda_iterate(const CsrMatrix& m, std::vector<double> x, double tol) {
  const auto n = static_cast<Eigen::Index>(m.dim);
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t r = 0; r < m.dim; ++r)
    for (std::size_t k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k)
      dense(static_cast<Eigen::Index>(r), m.col[k]) += m.val[k];
  for (auto& v : x) v = std::max(v, std::numeric_limits<double>::min());
  normalize_sum(x);
  std::vector<double> bx;
  m.multiply(x, bx);
  Bounds cw = collatz_wielandt(x, bx);
  Iterate it;
  it.vec = x;
  it.rho = cw.hi;
  it.gap = (cw.hi - cw.lo) / cw.hi;
  double best_gap = it.gap;
  std::size_t stalled = 0;
  for (it.iterations = 1; it.iterations <= 200; ++it.iterations) {
    if (cw.hi - cw.lo <= tol * cw.hi) {
      it.converged = true;
      it.rho = 0.5 * (cw.hi + cw.lo);
      return it;
    }
    Eigen::MatrixXd shifted = cw.hi * Eigen::MatrixXd::Identity(n, n) - dense;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(shifted);
    Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(x.data(), n);
    Eigen::VectorXd y = lu.solve(rhs);
    bool ok = y.allFinite();
    for (Eigen::Index i = 0; ok && i < n; ++i) x[static_cast<std::size_t>(i)] = std::abs(y(i));
    if (!ok) break;
    normalize_sum(x);
    m.multiply(x, bx);
    const Bounds next = collatz_wielandt(x, bx);
    const double gap = (next.hi - next.lo) / next.hi;
    if (gap < it.gap || !std::isfinite(it.gap)) {
      it.vec = x;
      it.gap = gap;
      it.rho = 0.5 * (next.hi + next.lo);
    }
    if (gap >= best_gap) {
      if (++stalled >= 4) break;
    } else {
      best_gap = gap;
      stalled = 0;
    }
    cw = next;
  }
  it.converged = it.gap <= tol;
  return it;
}

CsrMatrix submatrix(const CsrMatrix& m, const std::vector<std::uint32_t>& nodes) {
  std::vector<std::int64_t> local(m.dim, -1);
  for (std::size_t i = 0; i < nodes.size(); ++i) local[nodes[i]] = static_cast<std::int64_t>(i);
  CsrMatrix s;
  s.dim = nodes.size();
  for (auto r : nodes) {
    for (std::size_t k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k)
      if (local[m.col[k]] >= 0) {
        s.col.push_back(static_cast<std::uint32_t>(local[m.col[k]]));
        s.val.push_back(m.val[k]);
      }
    s.row_ptr.push_back(s.col.size());
  }
  return s;
}

constexpr std::size_t kDenseFallbackLimit = 2048;

Iterate perron_vector(const CsrMatrix& m, double tol) {
  if (m.dim == 1) {
    Iterate it;
    it.rho = m.at(0, 0);
    it.vec = {1.0};
    it.gap = 0.0;
    it.converged = true;
    return it;
  }
  const double dim = static_cast<double>(m.dim);
  const double nnz = static_cast<double>(std::max<std::size_t>(m.nnz(), 1));
  const auto cap = static_cast<std::size_t>(std::clamp(dim * dim * dim / (3.0 * nnz), 50.0, 5000.0));
  Iterate it = power_iterate([&m](const std::vector<double>& x, std::vector<double>& y) { m.multiply(x, y); },
                             m.dim, tol, m.dim <= kDenseFallbackLimit ? cap : 20000);
  if (it.converged || m.dim > kDenseFallbackLimit) return it;
  Iterate refined = noda_iterate(m, it.vec, tol);
  refined.iterations += it.iterations;
  return refined.gap <= it.gap ? refined : it;
}

double residual_of(const CsrMatrix& m, double rho, const std::vector<double>& v) {
  std::vector<double> bv;
  m.multiply(v, bv);
  double num = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    num = std::max(num, std::abs(bv[i] - rho * v[i]));
    scale = std::max(scale, std::abs(v[i]));
  }
  return scale > 0.0 && rho > 0.0 ? num / (rho * scale) : 0.0;
}

// Extends a block eigenvector to the full index set through v <- B v / rho.
// Entries of the block stay fixed; upstream entries converge when their own
// roots are smaller than rho.
void extend_vector(const CsrMatrix& m, double rho, std::vector<double>& v, const std::vector<char>& in_block,
                   double tol) {
  if (rho <= 0.0) return;
  std::vector<double> next;
  for (std::size_t iter = 0; iter < 10000; ++iter) {
    m.multiply(v, next);
    double change = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (in_block[i]) continue;
      const double nv = next[i] / rho;
      change = std::max(change, std::abs(nv - v[i]));
      scale = std::max(scale, std::abs(nv));
      v[i] = nv;
    }
    if (!std::isfinite(change)) break;
    if (change <= tol * std::max(scale, 1e-300)) return;
  }
}

}  // namespace

PerronResult spectral_radius(const CsrMatrix& m, double tolerance) {
  if (m.dim == 0) throw InvalidArgument("empty matrix");
  if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  for (double v : m.val)
    if (v < 0.0 || !std::isfinite(v)) throw InvalidArgument("matrix must be nonnegative and finite");

  const auto components = strong_components(m);
  PerronResult out;
  out.right.assign(m.dim, 0.0);
  out.left.assign(m.dim, 0.0);

  const std::vector<std::uint32_t>* best_block = nullptr;
  Iterate best_right;
  std::size_t total_iterations = 0;
  for (const auto& comp : components) {
    const CsrMatrix block = components.size() == 1 ? m : submatrix(m, comp);
    if (block.nnz() == 0) continue;
    Iterate r = perron_vector(block, tolerance);
    total_iterations += r.iterations;
    if (!r.converged)
      throw NumericFailure("power iteration did not converge on a block of size " + std::to_string(block.dim),
                           r.gap);
    if (best_block == nullptr || r.rho > best_right.rho) {
      best_block = &comp;
      best_right = std::move(r);
    }
  }
  if (best_block == nullptr) throw InvalidArgument("matrix is nilpotent (no cycles in its support)");

  const CsrMatrix block = components.size() == 1 ? m : submatrix(m, *best_block);
  Iterate l = perron_vector(block.transposed(), tolerance);
  total_iterations += l.iterations;
  if (!l.converged) throw NumericFailure("left power iteration did not converge", l.gap);

  std::vector<char> in_block(m.dim, 0);
  for (std::size_t i = 0; i < best_block->size(); ++i) {
    const auto node = (*best_block)[i];
    in_block[node] = 1;
    out.right[node] = best_right.vec[i];
    out.left[node] = l.vec[i];
  }
  out.rho = best_right.rho;
  if (components.size() > 1) {
    extend_vector(m, out.rho, out.right, in_block, tolerance);
    extend_vector(m.transposed(), out.rho, out.left, in_block, tolerance);
  }
  normalize_sum(out.right);
  const double dot = std::inner_product(out.left.begin(), out.left.end(), out.right.begin(), 0.0);
  for (auto& v : out.left) v /= dot;
  out.iterations = total_iterations;
  out.residual = residual_of(m, out.rho, out.right);
  return out;
}

PerronResult spectral_radius(const LinearOperator& op, double tolerance, std::size_t max_iterations) {
  if (op.dim == 0) throw InvalidArgument("empty operator");
  Iterate r = power_iterate(op.apply, op.dim, tolerance, max_iterations);
  if (!r.converged) throw NumericFailure("matrix-free power iteration did not converge", r.gap);
  Iterate l = power_iterate(op.apply_transpose, op.dim, tolerance, max_iterations);
  if (!l.converged) throw NumericFailure("matrix-free left power iteration did not converge", l.gap);
  PerronResult out;
  out.rho = r.rho;
  out.right = std::move(r.vec);
  out.left = std::move(l.vec);
  const double dot = std::inner_product(out.left.begin(), out.left.end(), out.right.begin(), 0.0);
  for (auto& v : out.left) v /= dot;
  out.iterations = r.iterations + l.iterations;
  std::vector<double> bv;
  op.apply(out.right, bv);
  double num = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < op.dim; ++i) {
    num = std::max(num, std::abs(bv[i] - out.rho * out.right[i]));
    scale = std::max(scale, out.right[i]);
  }
  out.residual = num / (out.rho * scale);
  return out;
}

}  // namespace mdt
