#include "mdt/bounds.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "mdt/errors.hpp"
#include "mdt/matching.hpp"

namespace mdt {

namespace {

void check_r(int r) {
  if (r < 2) throw InvalidArgument("bound parameter r must be at least 2");
}

void check_p(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("density must lie in [0,1]");
}

// (1-p) log(1-p) accurate near p = 0.
double one_minus_xlog(double p) {
  if (p >= 1.0) return 0.0;
  return (1.0 - p) * std::log1p(-p);
}

// p log p + (1-p) log(1-p)
double binary_entropy_term(double p) { return xlogx(p) + one_minus_xlog(p); }

double lerp(double x0, double y0, double x1, double y1, double x) {
  if (x1 == x0) return y0;
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

// Index s with anchor(r, s+1) <= p <= anchor(r, s), or -1 below the cutoff.
int bracket(int r, double p, int s_max) {
  if (p < anchor(r, s_max)) return -1;
  // p = r/(r+s) solves to s = r(1-p)/p.
  int s = static_cast<int>(std::floor(static_cast<double>(r) * (1.0 - p) / p));
  s = std::clamp(s, 0, s_max - 1);
  while (s > 0 && p > anchor(r, s)) --s;
  while (s + 1 < s_max && p < anchor(r, s + 1)) ++s;
  return s;
}

}  // namespace

double xlogx(double x) { return x <= 0.0 ? 0.0 : x * std::log(x); }

double h1(double p) {
  check_p(p);
  return xlogx(1.0 - p / 2.0) - xlogx(p / 2.0) - one_minus_xlog(p);
}

double gh(int r, double p) {
  check_r(r);
  check_p(p);
  const double rd = r;
  const double tail = (rd - p) * std::log1p(-p / rd);
  return 0.5 * (p * std::log(rd) - xlogx(p) - 2.0 * one_minus_xlog(p) + tail);
}

double anchor(int r, int s) { return static_cast<double>(r) / static_cast<double>(r + s); }

double ghl(int r, double p, int s_max) {
  check_r(r);
  check_p(p);
  if (p == 0.0) return 0.0;
  const int s = bracket(r, p, s_max);
  if (s < 0) return lerp(0.0, 0.0, anchor(r, s_max), gh(r, anchor(r, s_max)), p);
  const double a = anchor(r, s + 1), b = anchor(r, s);
  return lerp(a, gh(r, a), b, gh(r, b), p);
}

double low1(int r, double p, int s_max) {
  check_r(r);
  check_p(p);
  if (p == 0.0) return 0.0;
  // Interpolate gh + (1/2)(p log p + (1-p) log(1-p)) and shift back.
  auto shifted = [r](double q) { return gh(r, q) + 0.5 * binary_entropy_term(q); };
  const int s = bracket(r, p, s_max);
  double value;
  if (s < 0) {
    value = lerp(0.0, 0.0, anchor(r, s_max), shifted(anchor(r, s_max)), p);
  } else {
    const double a = anchor(r, s + 1), b = anchor(r, s);
    value = lerp(a, shifted(a), b, shifted(b), p);
  }
  return value - 0.5 * binary_entropy_term(p);
}

double fg_bound(int r, double p, int j) {
  check_r(r);
  if (j < 1) throw InvalidArgument("fg_bound needs j >= 1");
  check_p(p);
  if (p == 0.0) return 0.0;
  const double rd = r, jd = j;
  const double head = 0.5 * p * std::log(rd) + 0.5 * (-xlogx(p) - 2.0 * one_minus_xlog(p));
  const double tail = (rd + jd - 1.0) * std::log1p(-1.0 / (rd + jd)) - (jd - 1.0 + p) * std::log1p(-(1.0 - p) / jd);
  return head + 0.5 * tail;
}

double schrijver_branch(int r, double p) {
  check_r(r);
  check_p(p);
  const double rd = r;
  return 0.5 * p * (std::log(rd) + (rd - 1.0) * std::log1p(-1.0 / rd)) - 0.5 * binary_entropy_term(p);
}

namespace {

// Open-interval piece s of low2: (r/(r+s+1), r/(r+s)).
double low2_piece(int r, int s, double p) {
  if (s == 0) return std::max(schrijver_branch(r, p), fg_bound(r, p, 1));
  return std::max(fg_bound(r, p, s), fg_bound(r, p, s + 1));
}

}  // namespace

std::pair<double, std::optional<double>> low2_one_sided(int r, int s) {
  check_r(r);
  if (s < 0) throw InvalidArgument("anchor index must be nonnegative");
  const double p = anchor(r, s);
  const double left = low2_piece(r, s, p);
  if (s == 0) return {left, std::nullopt};
  return {left, low2_piece(r, s - 1, p)};
}

double low2(int r, double p, int s_max) {
  check_r(r);
  check_p(p);
  if (p == 0.0) return 0.0;
  const int s = bracket(r, p, s_max);
  if (s < 0) return lerp(0.0, 0.0, anchor(r, s_max), gh(r, anchor(r, s_max)), p);
  if (p == anchor(r, s)) return gh(r, p);
  if (p == anchor(r, s + 1)) return gh(r, p);
  return low2_piece(r, s, p);
}

double low_best(int r, double p, int s_max) { return std::max(low1(r, p, s_max), low2(r, p, s_max)); }

ExactBound schrijver_gl(int r, int l, int n) {
  check_r(r);
  if (n < 1 || l < 0 || l > n) throw InvalidArgument("schrijver_gl needs 0 <= l <= n, n >= 1");
  const BigInt c = binomial(n, l);
  const BigInt nr = BigInt(n) * r;
  const Rational ratio(nr - l, nr);
  const Rational scale(BigInt(l) * r, BigInt(n));
  Rational value = Rational(c * c);
  value *= power(ratio, static_cast<unsigned>(r * n - l));
  value *= power(scale, static_cast<unsigned>(l));
  const double log_value = 2.0 * log_big(c) +
                           static_cast<double>(r * n - l) * std::log1p(-static_cast<double>(l) / (n * static_cast<double>(r))) +
                           (l == 0 ? 0.0 : l * std::log(static_cast<double>(l) * r / n));
  return {value, log_value};
}

ExactBound tverberg_fl(int r, int l, int n) {
  if (r < 1) throw InvalidArgument("tverberg_fl needs r >= 1");
  if (n < 1 || l < 0 || l > n) throw InvalidArgument("tverberg_fl needs 0 <= l <= n, n >= 1");
  const BigInt c = binomial(n, l);
  const BigInt f = factorial(l);
  Rational value = Rational(c * c * f) * power(Rational(r, n), static_cast<unsigned>(l));
  const double log_value =
      2.0 * log_big(c) + log_big(f) + (l == 0 ? 0.0 : l * std::log(static_cast<double>(r) / n));
  return {value, log_value};
}

double fh(int d, double p) {
  if (d < 1) throw InvalidArgument("fh needs d >= 1");
  check_p(p);
  return 0.5 * (-xlogx(p) - 2.0 * one_minus_xlog(p) + p * std::log(2.0 * d) - p);
}

double upp1(int r, double p) {
  check_r(r);
  check_p(p);
  return p * std::lgamma(r + 1.0) / (2.0 * r) - 0.5 * xlogx(p) - one_minus_xlog(p);
}

double upp2(int r, double p) {
  check_r(r);
  check_p(p);
  return 0.5 * p * std::log(static_cast<double>(r)) - 0.5 * binary_entropy_term(p);
}

HKPoint hK(int r, double t) {
  check_r(r);
  // log-sum-exp over l of w_l e^{2lt}, w_l = C(r,l)^2 l!
  std::vector<double> logs(r + 1);
  for (int l = 0; l <= r; ++l) logs[l] = log_big(krr_matching_count(r, l)) + 2.0 * l * t;
  const double top = *std::max_element(logs.begin(), logs.end());
  double z = 0.0, zl = 0.0;
  for (int l = 0; l <= r; ++l) {
    const double e = std::exp(logs[l] - top);
    z += e;
    zl += 2.0 * l * e;
  }
  HKPoint out;
  out.t = t;
  out.pressure = (top + std::log(z)) / (2.0 * r);
  out.p = zl / (2.0 * r * z);
  out.h = out.pressure - t * out.p;
  return out;
}

Rational hK_density_exact(int r, const Rational& y) {
  check_r(r);
  if (y <= 0) throw InvalidArgument("e^{2t} must be positive");
  Rational z = 0, zl = 0, power = 1;
  for (int l = 0; l <= r; ++l) {
    const Rational term = Rational(krr_matching_count(r, l)) * power;
    z += term;
    zl += term * (2 * l);
    power *= y;
  }
  return zl / (z * (2 * r));
}

double hK_at_density(int r, double p) {
  check_r(r);
  check_p(p);
  if (p == 0.0) return 0.0;
  if (p == 1.0) return std::lgamma(r + 1.0) / (2.0 * r);
  // p(t) is strictly increasing; bracket and bisect on t.
  double lo = -1.0, hi = 1.0;
  while (hK(r, lo).p > p && lo > -700.0) lo *= 2.0;
  while (hK(r, hi).p < p && hi < 700.0) hi *= 2.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++iter) {
    const double mid = 0.5 * (lo + hi);
    (hK(r, mid).p < p ? lo : hi) = mid;
  }
  const HKPoint k = hK(r, 0.5 * (lo + hi));
  // First-order correction along the curve, dh/dp = -t.
  return k.h - k.t * (p - k.p);
}

namespace {

double evaluate_single(const std::string& name, int r, double p) {
  if (name == "h1") return h1(p);
  if (name == "gh") return gh(r, p);
  if (name == "ghl") return ghl(r, p);
  if (name == "low1") return low1(r, p);
  if (name == "low2") return low2(r, p);
  if (name == "low") return low_best(r, p);
  if (name == "fh") {
    if (r % 2 != 0) throw InvalidArgument("fh needs an even degree r = 2d");
    return fh(r / 2, p);
  }
  if (name == "upp1") return upp1(r, p);
  if (name == "upp2") return upp2(r, p);
  if (name == "upp") return std::min(upp1(r, p), upp2(r, p));
  if (name == "hK") return hK_at_density(r, p);
  if (name.size() > 2 && name.rfind("fg", 0) == 0) {
    const std::string digits = name.substr(2);
    if (std::all_of(digits.begin(), digits.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
      return fg_bound(r, p, std::stoi(digits));
  }
  throw InvalidArgument("unknown bound name: " + name);
}

bool is_single_name(const std::string& name) {
  static const char* names[] = {"h1", "gh", "ghl", "low1", "low2", "low", "fh", "upp1", "upp2", "upp", "hK"};
  for (const char* n : names)
    if (name == n) return true;
  if (name.size() > 2 && name.rfind("fg", 0) == 0 && name[2] != '0')
    return std::all_of(name.begin() + 2, name.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); });
  return false;
}

}  // namespace

bool is_bound_name(const std::string& name) {
  const auto dash = name.find('-');
  if (dash == std::string::npos) return is_single_name(name);
  return is_single_name(name.substr(0, dash)) && is_single_name(name.substr(dash + 1));
}

double evaluate_bound(const std::string& name, int r, double p) {
  const auto dash = name.find('-');
  if (dash == std::string::npos) return evaluate_single(name, r, p);
  return evaluate_single(name.substr(0, dash), r, p) - evaluate_single(name.substr(dash + 1), r, p);
}

BoundCurve make_bound_curve(const std::string& name, int r, const std::vector<double>& p_grid) {
  if (!is_bound_name(name)) throw InvalidArgument("unknown bound name: " + name);
  BoundCurve curve{name, r, {}};
  curve.samples.reserve(p_grid.size());
  for (double p : p_grid) curve.samples.emplace_back(p, evaluate_bound(name, r, p));
  return curve;
}

std::vector<double> uniform_density_grid(std::size_t n) {
  if (n < 2) throw InvalidArgument("density grid needs at least two points");
  std::vector<double> grid(n);
  for (std::size_t k = 0; k < n; ++k) grid[k] = static_cast<double>(k) / static_cast<double>(n - 1);
  grid.back() = 1.0;
  return grid;
}

}  // namespace mdt
