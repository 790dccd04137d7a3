#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mdt/bignum.hpp"

namespace mdt {

inline constexpr int kDefaultAnchorCutoff = 64;

// x log x with 0 log 0 = 0.
double xlogx(double x);

double h1(double p);
double gh(int r, double p);
// Density anchors r/(r+s), s = 0..s_max.
double anchor(int r, int s);
double ghl(int r, double p, int s_max = kDefaultAnchorCutoff);
double low1(int r, double p, int s_max = kDefaultAnchorCutoff);
double fg_bound(int r, double p, int j);
// Mean-inequality branch used on (r/(r+1), 1]; valid for every p.
double schrijver_branch(int r, double p);
double low2(int r, double p, int s_max = kDefaultAnchorCutoff);
// Values of the two open pieces adjacent to anchor s (left, right). The
// right piece does not exist for s = 0.
std::pair<double, std::optional<double>> low2_one_sided(int r, int s);
double low_best(int r, double p, int s_max = kDefaultAnchorCutoff);

struct ExactBound {
  Rational value;
  double log_value;
};

// g_r(l, 2n) = C(n,l)^2 ((nr-l)/(nr))^{rn-l} (lr/n)^l
ExactBound schrijver_gl(int r, int l, int n);
// f_r(l, 2n) = C(n,l)^2 l! (r/n)^l
ExactBound tverberg_fl(int r, int l, int n);
double fh(int d, double p);

double upp1(int r, double p);
double upp2(int r, double p);

struct HKPoint {
  double t = 0.0;
  double pressure = 0.0;
  double p = 0.0;
  double h = 0.0;
};

// Disjoint copies of K_{r,r}: pressure, density and entropy at t.
HKPoint hK(int r, double t);
// Exact density at e^{2t} = y.
Rational hK_density_exact(int r, const Rational& y);
// h_K(r)(p) by bisection on the monotone closed-form p(t); h(1) is
// log(r!)/(2r).
double hK_at_density(int r, double p);

struct BoundCurve {
  std::string name;
  int parameter = 0;
  std::vector<std::pair<double, double>> samples;
};

// Known names: h1 gh ghl low1 low2 low fg<j> fh upp1 upp2 upp hK, and
// differences written "a-b".
bool is_bound_name(const std::string& name);
double evaluate_bound(const std::string& name, int r, double p);
BoundCurve make_bound_curve(const std::string& name, int r, const std::vector<double>& p_grid);

// n points uniformly spaced on [0, 1].
std::vector<double> uniform_density_grid(std::size_t n);

}  // namespace mdt
