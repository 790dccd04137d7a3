#include "mdt/transfer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <ostream>
#include <string>

#include "mdt/errors.hpp"

namespace mdt {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) throw ResourceLimit("transfer coefficient overflows 64 bits");
  return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) throw ResourceLimit("transfer coefficient overflows 64 bits");
  return out;
}

constexpr double kMaxExponent = 700.0;

double guarded_exp(double exponent) {
  if (exponent > kMaxExponent) throw RangeError("exponent " + std::to_string(exponent) + " overflows double");
  return std::exp(exponent);
}

}  // namespace

void check_width(std::size_t width, std::size_t width_guard) {
  if (width == 0) throw InvalidArgument("base graph has no vertices");
  if (width > width_guard || width > 20)
    throw ResourceLimit("layer width " + std::to_string(width) + " exceeds guard " +
                        std::to_string(std::min<std::size_t>(width_guard, 20)));
}

IntraLayerTable IntraLayerTable::build(const Graph& base, std::size_t width_guard) {
  check_width(base.vertex_count(), width_guard);
  IntraLayerTable table;
  table.width_ = base.vertex_count();
  const auto adj = base.adjacency();
  const std::size_t states = std::size_t{1} << table.width_;
  table.polys_.resize(states);
  table.polys_[0] = {1};
  for (std::size_t w = 1; w < states; ++w) {
    const int v = std::countr_zero(w);
    const std::size_t rest = w & (w - 1);
    auto poly = table.polys_[rest];
    for (const auto& [u, mult] : adj[v]) {
      if (((rest >> u) & 1U) == 0) continue;
      const auto& sub = table.polys_[rest & ~(std::size_t{1} << u)];
      if (poly.size() < sub.size() + 1) poly.resize(sub.size() + 1, 0);
      for (std::size_t j = 0; j < sub.size(); ++j)
        poly[j + 1] = checked_add(poly[j + 1], checked_mul(sub[j], static_cast<std::int64_t>(mult)));
    }
    table.polys_[w] = std::move(poly);
  }
  return table;
}

std::vector<std::int64_t> IntraLayerTable::c(Subset s, Subset t) const {
  if ((s & t) != 0) return {};
  return polys_[full() & ~(s | t)];
}

ConnectionLift ConnectionLift::build(const ConnectionMatrix& a, std::size_t width_guard) {
  check_width(a.size(), width_guard);
  ConnectionLift lift;
  lift.width_ = a.size();
  const std::size_t n = a.size();
  const std::size_t states = std::size_t{1} << n;
  lift.rows_.resize(states);
  lift.rows_[0] = {{0, 1}};
  // Expand along the lowest row of S: per(A[S,T]) = sum_t a_{s0 t} per(A[S-s0, T-t]).
  std::map<Subset, std::int64_t> acc;
  for (std::size_t s = 1; s < states; ++s) {
    const std::size_t s0 = static_cast<std::size_t>(std::countr_zero(s));
    acc.clear();
    for (const Entry& e : lift.rows_[s & (s - 1)])
      for (std::size_t t = 0; t < n; ++t)
        if (a.at(s0, t) && ((e.col >> t) & 1U) == 0) {
          auto& slot = acc[e.col | (Subset{1} << t)];
          slot = checked_add(slot, e.value);
        }
    auto& row = lift.rows_[s];
    row.reserve(acc.size());
    for (const auto& [col, value] : acc) row.push_back({col, value});
  }
  return lift;
}

std::int64_t ConnectionLift::at(Subset s, Subset t) const {
  for (const Entry& e : rows_[s])
    if (e.col == t) return e.value;
  return 0;
}

std::size_t ConnectionLift::nnz() const noexcept {
  std::size_t total = 0;
  for (const auto& row : rows_) total += row.size();
  return total;
}

bool ConnectionLift::is_permutation() const {
  std::vector<int> col_count(rows_.size(), 0);
  for (const auto& row : rows_) {
    if (row.size() != 1 || row[0].value != 1) return false;
    if (++col_count[row[0].col] > 1) return false;
  }
  return true;
}

ConnectionLift lift_connection(const ConnectionMatrix& a, std::size_t width_guard) {
  return ConnectionLift::build(a, width_guard);
}

IntraLayerTable build_intra_table(const Graph& base, std::size_t width_guard) {
  return IntraLayerTable::build(base, width_guard);
}

TransferMatrix::TransferMatrix(const LayeredFamily& family, std::size_t width_guard)
    : TransferMatrix(IntraLayerTable::build(family.base(), width_guard),
                     ConnectionLift::build(family.connection(), width_guard)) {}

TransferMatrix TransferMatrix::intra_only(const Graph& base, std::size_t width_guard) {
  return TransferMatrix(IntraLayerTable::build(base, width_guard),
                        ConnectionLift::build(ConnectionMatrix::identity(base.vertex_count()), width_guard));
}

TransferMatrix::TransferMatrix(IntraLayerTable table, ConnectionLift lift)
    : table_(std::move(table)), lift_(std::move(lift)) {
  if (table_.width() != lift_.width()) throw InvalidArgument("connection matrix size differs from base width");
  if (matrix_free()) return;
  const std::size_t n = width();
  const std::size_t d = dim();
  const Subset full = table_.full();
  const std::size_t stride = n + 1;
  std::vector<std::int64_t> acc(d * stride, 0);
  std::vector<char> touched(d, 0);
  std::vector<Subset> touched_list;
  row_ptr_.assign(1, 0);
  term_ptr_.assign(1, 0);
  for (Subset s = 0; s < d; ++s) {
    const Subset comp = full & ~s;
    const int size_s = std::popcount(s);
    // K runs over all subsets of the complement of S.
    for (Subset k = comp;; k = (k - 1) & comp) {
      const auto& poly = table_.induced(comp & ~k);
      const int base_power = size_s + std::popcount(k);
      for (const auto& e : lift_.row(k)) {
        if (!touched[e.col]) {
          touched[e.col] = 1;
          touched_list.push_back(e.col);
        }
        for (std::size_t j = 0; j < poly.size(); ++j) {
          if (poly[j] == 0) continue;
          auto& slot = acc[e.col * stride + 2 * j + static_cast<std::size_t>(base_power)];
          slot = checked_add(slot, checked_mul(poly[j], e.value));
        }
      }
      if (k == 0) break;
    }
    std::sort(touched_list.begin(), touched_list.end());
    for (Subset t : touched_list) {
      bool any = false;
      for (std::size_t i = 0; i <= n; ++i) {
        auto& slot = acc[t * stride + i];
        if (slot != 0) {
          terms_.push_back({static_cast<std::uint8_t>(i), slot});
          slot = 0;
          any = true;
        }
      }
      touched[t] = 0;
      if (any) {
        cols_.push_back(t);
        term_ptr_.push_back(terms_.size());
      }
    }
    touched_list.clear();
    row_ptr_.push_back(cols_.size());
  }
}

CsrMatrix TransferMatrix::assemble(double t, bool shifted, bool weighted) const {
  if (matrix_free())
    throw ResourceLimit("dimension " + std::to_string(dim()) + " is above the materialization threshold");
  const double n = static_cast<double>(width());
  std::vector<double> factor(width() + 1);
  for (std::size_t i = 0; i <= width(); ++i) {
    const double exponent = (static_cast<double>(i) - (shifted ? n : 0.0)) * t;
    factor[i] = guarded_exp(exponent) * (weighted ? static_cast<double>(i) : 1.0);
  }
  CsrMatrix m;
  m.dim = dim();
  m.row_ptr.reserve(dim() + 1);
  m.col.reserve(cols_.size());
  m.val.reserve(cols_.size());
  for (std::size_t r = 0; r < dim(); ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      double v = 0.0;
      for (std::size_t q = term_ptr_[k]; q < term_ptr_[k + 1]; ++q)
        v += static_cast<double>(terms_[q].coeff) * factor[terms_[q].power];
      if (v != 0.0) {
        m.col.push_back(cols_[k]);
        m.val.push_back(v);
      }
    }
    m.row_ptr.push_back(m.col.size());
  }
  return m;
}

CsrMatrix TransferMatrix::evaluate(double t) const { return assemble(t, false, false); }
CsrMatrix TransferMatrix::derivative(double t) const { return assemble(t, false, true); }
CsrMatrix TransferMatrix::evaluate_shifted(double t) const { return assemble(t, true, false); }
CsrMatrix TransferMatrix::derivative_shifted(double t) const { return assemble(t, true, true); }

// Entry M_SK depends only on W = U \ (S u K): sum_j c_{W,j} e^{(2j + N - |W|)t},
// optionally weighted by the exponent 2j + N - |W| and shifted by e^{-Nt}.
std::vector<double> TransferMatrix::weights(double t, bool shifted, bool weighted) const {
  const std::size_t d = dim();
  const double n = static_cast<double>(width());
  std::vector<double> w(d, 0.0);
  for (std::size_t s = 0; s < d; ++s) {
    const auto& poly = table_.induced(static_cast<Subset>(s));
    const double size_w = std::popcount(s);
    double acc = 0.0;
    for (std::size_t j = 0; j < poly.size(); ++j) {
      if (poly[j] == 0) continue;
      const double power = 2.0 * static_cast<double>(j) + n - size_w;
      acc += static_cast<double>(poly[j]) * guarded_exp((power - (shifted ? n : 0.0)) * t) * (weighted ? power : 1.0);
    }
    w[s] = acc;
  }
  return w;
}

namespace {

// y_S = sum_{K subset of U \ S} w[U \ (S u K)] z_K
void apply_intra(const std::vector<double>& w, Subset full, const std::vector<double>& z, std::vector<double>& y) {
  const std::size_t d = z.size();
  y.assign(d, 0.0);
  for (std::size_t s = 0; s < d; ++s) {
    const Subset comp = full & ~static_cast<Subset>(s);
    double acc = 0.0;
    for (Subset k = comp;; k = (k - 1) & comp) {
      acc += w[comp & ~k] * z[k];
      if (k == 0) break;
    }
    y[s] = acc;
  }
}

void apply_lift(const ConnectionLift& lift, const std::vector<double>& x, std::vector<double>& z) {
  z.assign(x.size(), 0.0);
  for (std::size_t s = 0; s < x.size(); ++s) {
    double acc = 0.0;
    for (const auto& e : lift.row(static_cast<Subset>(s))) acc += static_cast<double>(e.value) * x[e.col];
    z[s] = acc;
  }
}

void apply_lift_transpose(const ConnectionLift& lift, const std::vector<double>& x, std::vector<double>& z) {
  z.assign(x.size(), 0.0);
  for (std::size_t s = 0; s < x.size(); ++s)
    for (const auto& e : lift.row(static_cast<Subset>(s))) z[e.col] += static_cast<double>(e.value) * x[s];
}

}  // namespace

LinearOperator TransferMatrix::operator_at(double t, bool shifted) const {
  auto w = std::make_shared<std::vector<double>>(weights(t, shifted, false));
  const Subset full = table_.full();
  LinearOperator op;
  op.dim = dim();
  op.apply = [this, w, full](const std::vector<double>& x, std::vector<double>& y) {
    std::vector<double> z;
    apply_lift(lift_, x, z);
    apply_intra(*w, full, z, y);
  };
  op.apply_transpose = [this, w, full](const std::vector<double>& x, std::vector<double>& y) {
    std::vector<double> u;
    apply_intra(*w, full, x, u);
    apply_lift_transpose(lift_, u, y);
  };
  return op;
}

double TransferMatrix::derivative_form(double t, bool shifted, const std::vector<double>& left,
                                       const std::vector<double>& right) const {
  if (left.size() != dim() || right.size() != dim()) throw InvalidArgument("vector size differs from dimension");
  std::vector<double> y;
  if (matrix_free()) {
    const auto w = weights(t, shifted, true);
    std::vector<double> z;
    apply_lift(lift_, right, z);
    apply_intra(w, table_.full(), z, y);
  } else {
    (shifted ? derivative_shifted(t) : derivative(t)).multiply(right, y);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) acc += left[i] * y[i];
  return acc;
}

std::vector<std::vector<std::pair<Subset, BigInt>>> TransferMatrix::scaled_exact(const Rational& x,
                                                                                  BigInt& scale) const {
  if (matrix_free()) throw ResourceLimit("exact mode needs a materialized transfer matrix");
  if (x <= 0) throw InvalidArgument("e^t must be positive");
  const BigInt a = boost::multiprecision::numerator(x);
  const BigInt b = boost::multiprecision::denominator(x);
  const std::size_t n = width();
  std::vector<BigInt> weight(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    weight[i] = boost::multiprecision::pow(a, static_cast<unsigned>(i)) *
                boost::multiprecision::pow(b, static_cast<unsigned>(n - i));
  }
  scale = boost::multiprecision::pow(b, static_cast<unsigned>(n));
  std::vector<std::vector<std::pair<Subset, BigInt>>> rows(dim());
  for (std::size_t r = 0; r < dim(); ++r)
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      BigInt v = 0;
      for (std::size_t q = term_ptr_[k]; q < term_ptr_[k + 1]; ++q) v += BigInt(terms_[q].coeff) * weight[terms_[q].power];
      if (v != 0) rows[r].emplace_back(cols_[k], std::move(v));
    }
  return rows;
}

void TransferMatrix::dump(std::ostream& out) const {
  if (matrix_free()) throw ResourceLimit("dump needs a materialized transfer matrix");
  out << dim() << '\n';
  for (std::size_t r = 0; r < dim(); ++r)
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      for (std::size_t q = term_ptr_[k]; q < term_ptr_[k + 1]; ++q)
        out << r << ' ' << cols_[k] << ' ' << static_cast<int>(terms_[q].power) << ' ' << terms_[q].coeff << '\n';
}

PerronResult transfer_perron(const TransferMatrix& tm, double t, bool shifted, double tolerance) {
  if (tm.matrix_free()) return spectral_radius(tm.operator_at(t, shifted), tolerance);
  return spectral_radius(shifted ? tm.evaluate_shifted(t) : tm.evaluate(t), tolerance);
}

Rational exact_trace_power(const TransferMatrix& tm, const Rational& x, std::size_t n, std::size_t max_dim) {
  if (n < 2) throw InvalidArgument("trace power needs n >= 2");
  if (tm.dim() > max_dim)
    throw ResourceLimit("exact trace: dimension " + std::to_string(tm.dim()) + " exceeds guard " +
                        std::to_string(max_dim));
  BigInt scale;
  const auto rows = tm.scaled_exact(x, scale);
  const std::size_t d = tm.dim();
  BigInt trace = 0;
  std::vector<BigInt> v(d), next(d);
  for (std::size_t s = 0; s < d; ++s) {
    // Column s of C^n, built by repeated sparse products.
    std::fill(v.begin(), v.end(), BigInt(0));
    v[s] = 1;
    for (std::size_t step = 0; step < n; ++step) {
      for (std::size_t r = 0; r < d; ++r) {
        BigInt acc = 0;
        for (const auto& [c, value] : rows[r])
          if (v[c] != 0) acc += value * v[c];
        next[r] = std::move(acc);
      }
      std::swap(v, next);
    }
    trace += v[s];
  }
  return Rational(trace, boost::multiprecision::pow(scale, static_cast<unsigned>(n)));
}

std::vector<Rational> exact_characteristic_polynomial(const TransferMatrix& tm, const Rational& x) {
  if (tm.dim() > 16) throw ResourceLimit("exact characteristic polynomial limited to dimension 16");
  BigInt scale;
  const auto rows = tm.scaled_exact(x, scale);
  const std::size_t d = tm.dim();
  using Mat = std::vector<std::vector<Rational>>;
  Mat a(d, std::vector<Rational>(d, Rational(0)));
  for (std::size_t r = 0; r < d; ++r)
    for (const auto& [c, value] : rows[r]) a[r][c] = Rational(value, scale);

  std::vector<Rational> coeff(d + 1, Rational(0));
  coeff[d] = 1;
  Mat m(d, std::vector<Rational>(d, Rational(0)));
  for (std::size_t k = 1; k <= d; ++k) {
    // M_k = A M_{k-1} + c_{d-k+1} I,  c_{d-k} = -tr(A M_k) / k
    Mat next(d, std::vector<Rational>(d, Rational(0)));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t l = 0; l < d; ++l) {
        if (a[i][l] == 0) continue;
        for (std::size_t j = 0; j < d; ++j) next[i][j] += a[i][l] * m[l][j];
      }
    for (std::size_t i = 0; i < d; ++i) next[i][i] += coeff[d - k + 1];
    m = std::move(next);
    Rational tr = 0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t l = 0; l < d; ++l) tr += a[i][l] * m[l][i];
    coeff[d - k] = -tr / Rational(static_cast<long>(k));
  }
  return coeff;
}

namespace {

using RPoly = std::vector<Rational>;

void trim(RPoly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

RPoly remainder(RPoly num, const RPoly& den) {
  trim(num);
  while (num.size() >= den.size() && !(num.size() == 1 && num[0] == 0)) {
    const Rational q = num.back() / den.back();
    const std::size_t shift = num.size() - den.size();
    for (std::size_t i = 0; i < den.size(); ++i) num[i + shift] -= q * den[i];
    num.pop_back();
    trim(num);
    if (num.empty()) num = {Rational(0)};
  }
  return num;
}

Rational eval(const RPoly& p, const Rational& x) {
  Rational acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

int sign_changes(const std::vector<RPoly>& chain, const Rational& x) {
  int changes = 0, last = 0;
  for (const auto& p : chain) {
    const Rational v = eval(p, x);
    const int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace

double largest_real_root(const std::vector<Rational>& poly) {
  RPoly p = poly;
  trim(p);
  if (p.size() < 2) throw InvalidArgument("polynomial has no roots");
  std::vector<RPoly> chain{p};
  RPoly dp(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) dp[i - 1] = p[i] * Rational(static_cast<long>(i));
  chain.push_back(dp);
  while (chain.back().size() > 1) {
    RPoly r = remainder(chain[chain.size() - 2], chain.back());
    if (r.size() == 1 && r[0] == 0) break;
    for (auto& c : r) c = -c;
    chain.push_back(std::move(r));
  }
  // Cauchy bound.
  Rational bound = 0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) bound = std::max(bound, Rational(abs(p[i] / p.back())));
  bound += 1;
  Rational lo = -bound, hi = bound;
  if (sign_changes(chain, lo) == sign_changes(chain, hi)) throw InvalidArgument("polynomial has no real root");
  for (int iter = 0; iter < 90; ++iter) {
    const Rational mid = (lo + hi) / 2;
    if (sign_changes(chain, mid) - sign_changes(chain, hi) >= 1)
      lo = mid;
    else
      hi = mid;
  }
  return static_cast<double>(((lo + hi) / 2).convert_to<double>());
}

namespace {

double log_rho_per_width(const TransferMatrix& tm, double t, double tolerance) {
  const bool shifted = t > 0.0;
  const auto pr = transfer_perron(tm, t, shifted, tolerance);
  const double n = static_cast<double>(tm.width());
  return (shifted ? n * t : 0.0) / n + std::log(pr.rho) / n;
}

}  // namespace

std::vector<MaxPressureRow> max_pressure_check(const Graph& base, const ConnectionMatrix& a,
                                               const std::vector<double>& t_list, double slack, double tolerance) {
  if (!a.is_permutation()) throw InvalidArgument("max pressure check needs a permutation connection matrix");
  const TransferMatrix connected(LayeredFamily(base, a, "connected"));
  const TransferMatrix layers = TransferMatrix::intra_only(base);
  std::vector<MaxPressureRow> rows;
  for (double t : t_list) {
    MaxPressureRow row;
    row.t = t;
    row.pressure_connected = log_rho_per_width(connected, t, tolerance);
    row.pressure_layers = log_rho_per_width(layers, t, tolerance);
    row.margin = row.pressure_layers - row.pressure_connected;
    row.holds = row.margin >= -slack;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mdt
