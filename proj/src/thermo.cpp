#include "mdt/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "mdt/bounds.hpp"
#include "mdt/errors.hpp"
#include "mdt/parallel.hpp"

namespace mdt {

namespace {

constexpr double kClampSlack = 1e-9;

}  // namespace

ThermoModel::ThermoModel(const LayeredFamily& family, std::size_t width_guard, double tolerance)
    : ThermoModel(TransferMatrix(family, width_guard), family.name(), tolerance) {}

ThermoModel::ThermoModel(TransferMatrix matrix, std::string name, double tolerance)
    : matrix_(std::move(matrix)), name_(std::move(name)), tolerance_(tolerance) {
  if (!(tolerance_ > 0.0)) throw InvalidArgument("tolerance must be positive");
}

double ThermoModel::pressure(double t) const {
  const auto pr = transfer_perron(matrix_, t, false, tolerance_);
  return std::log(pr.rho) / static_cast<double>(width());
}

double ThermoModel::pressure_shifted(double t) const {
  const auto pr = transfer_perron(matrix_, t, true, tolerance_);
  return t + std::log(pr.rho) / static_cast<double>(width());
}

double ThermoModel::density(double t) const { return sample(t).density; }

std::pair<double, double> ThermoModel::entropy_point(double t) const {
  const auto s = sample(t);
  return {s.density, s.entropy};
}

ThermoSample ThermoModel::sample(double t) const { return sample_with(t, t > kShiftThreshold); }

ThermoSample ThermoModel::sample_with(double t, bool shifted) const {
  const auto pr = transfer_perron(matrix_, t, shifted, tolerance_);
  const double n = static_cast<double>(width());
  ThermoSample s;
  s.t = t;
  const double log_rho = std::log(pr.rho) + (shifted ? n * t : 0.0);
  s.rho = std::exp(log_rho);
  s.pressure = log_rho / n;
  // left . right = 1, so rho' = left^T B' right.
  double p = matrix_.derivative_form(t, shifted, pr.left, pr.right) / (n * pr.rho);
  if (p < 0.0 || p > 1.0) {
    if (p < -kClampSlack || p > 1.0 + kClampSlack) throw NumericFailure("density outside [0,1] at t=" + std::to_string(t), p);
    p = std::clamp(p, 0.0, 1.0);
    s.clamped = true;
  }
  s.density = p;
  s.entropy = s.pressure - t * p;
  if (s.entropy < 0.0 && s.entropy >= -kClampSlack) {
    s.entropy = 0.0;
    s.clamped = true;
  }
  return s;
}

CurveInvariants EntropyCurve::check_invariants() const {
  CurveInvariants inv;
  const auto& s = samples;
  auto fail = [&inv](bool& flag, const std::string& what) {
    if (flag) inv.failures.push_back(what);
    flag = false;
  };
  for (std::size_t k = 0; k < s.size(); ++k) {
    const std::string at = " at t=" + std::to_string(s[k].t);
    if (s[k].density < 0.0 || s[k].density > 1.0) fail(inv.density_in_range, "density out of [0,1]" + at);
    if (s[k].entropy < 0.0) fail(inv.entropy_nonnegative, "negative entropy" + at);
    if (k > 0) {
      if (s[k].density < s[k - 1].density - 1e-12) fail(inv.density_monotone, "density decreases" + at);
      if (s[k].pressure < s[k - 1].pressure - 1e-12 * std::max(1.0, std::abs(s[k].pressure)))
        fail(inv.pressure_monotone, "pressure decreases" + at);
    }
    if (k > 0 && k + 1 < s.size()) {
      // Chord form of the discrete second difference.
      const auto chord = [](double x0, double y0, double x1, double y1, double x) {
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
      };
      const double pc = chord(s[k - 1].t, s[k - 1].pressure, s[k + 1].t, s[k + 1].pressure, s[k].t);
      if (s[k].pressure - pc > 1e-9) fail(inv.pressure_convex, "pressure not convex" + at);
      if (s[k + 1].density > s[k - 1].density) {
        const double hc = chord(s[k - 1].density, s[k - 1].entropy, s[k + 1].density, s[k + 1].entropy, s[k].density);
        if (hc - s[k].entropy > 1e-8) fail(inv.entropy_concave, "entropy not concave" + at);
      }
    }
  }
  for (const auto& a : s)
    for (const auto& b : s)
      if (a.pressure < b.density * a.t + b.entropy - 1e-9 * (1.0 + std::abs(a.t))) {
        fail(inv.legendre_bound, "P(t) < p t + h(p) at t=" + std::to_string(a.t) + ", p=" + std::to_string(b.density));
        break;
      }
  return inv;
}

std::optional<double> EntropyCurve::interpolate(double p) const {
  if (!(p >= 0.0)) return std::nullopt;
  double p0 = 0.0, h0 = 0.0;
  for (const auto& s : samples) {
    if (p <= s.density) {
      if (s.density == p0) return std::max(h0, s.entropy);
      return h0 + (s.entropy - h0) * (p - p0) / (s.density - p0);
    }
    p0 = s.density;
    h0 = s.entropy;
  }
  if (!samples.empty() && p == samples.back().density) return samples.back().entropy;
  return std::nullopt;
}

EndpointEstimate EntropyCurve::endpoints() const {
  EndpointEstimate e;
  if (samples.empty()) return e;
  const auto& lo = samples.front();
  const auto& hi = samples.back();
  // dh/dp = -t along the curve.
  e.p_low = lo.density;
  e.p_high = hi.density;
  e.h0 = lo.entropy + lo.density * lo.t;
  e.h1 = hi.entropy - (1.0 - hi.density) * hi.t;
  return e;
}

void EntropyCurve::write_csv(std::ostream& out) const {
  out << "t,rho,P,p,h\n";
  char line[160];
  for (const auto& s : samples) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t, s.rho, s.pressure, s.density, s.entropy);
    out << line;
  }
}

std::vector<double> default_grid(std::size_t points, double half_width) {
  if (points < 2) throw InvalidArgument("grid needs at least two points");
  constexpr double stretch = 1.5;
  std::vector<double> grid(points);
  for (std::size_t k = 0; k < points; ++k) {
    const double u = -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(points - 1);
    grid[k] = half_width * std::tanh(stretch * u) / std::tanh(stretch);
  }
  if (points % 2 == 1) grid[points / 2] = 0.0;
  return grid;
}

std::vector<double> linear_grid(double a, double b, std::size_t points) {
  if (points < 2 || !(b > a)) throw InvalidArgument("linear grid needs a < b and at least two points");
  std::vector<double> grid(points);
  for (std::size_t k = 0; k < points; ++k)
    grid[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(points - 1);
  grid.back() = b;
  return grid;
}

namespace {

void check_grid(const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw InvalidArgument("empty t grid");
  for (std::size_t k = 1; k < t_grid.size(); ++k)
    if (!(t_grid[k] > t_grid[k - 1])) throw InvalidArgument("t grid must be strictly increasing");
}

}  // namespace

EntropyCurve sweep(const ThermoModel& model, const std::vector<double>& t_grid,
                   std::optional<std::size_t> regularity) {
  check_grid(t_grid);
  EntropyCurve curve;
  curve.name = model.name();
  curve.width = model.width();
  curve.regularity = regularity;
  curve.tolerance = model.tolerance();
  std::vector<ThermoSample> samples(t_grid.size());
  std::vector<std::string> errors(t_grid.size());
  parallel_for(t_grid.size(), [&](std::size_t k) {
    try {
      samples[k] = model.sample(t_grid[k]);
    } catch (const std::exception& e) {
      errors[k] = e.what();
      if (errors[k].empty()) errors[k] = "sample failed";
    }
  });
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    if (!errors[k].empty()) {
      curve.partial = true;
      curve.error = "t=" + std::to_string(t_grid[k]) + ": " + errors[k];
      break;
    }
    curve.samples.push_back(samples[k]);
  }
  return curve;
}

EntropyCurve sweep(const LayeredFamily& family, const std::vector<double>& t_grid, std::size_t width_guard,
                   double tolerance) {
  return sweep(ThermoModel(family, width_guard, tolerance), t_grid, family.regularity());
}

EntropyCurve bethe_curve(int r, const std::vector<double>& t_grid) {
  if (r < 2) throw InvalidArgument("bethe_curve needs r >= 2");
  check_grid(t_grid);
  EntropyCurve curve;
  curve.name = "K(" + std::to_string(r) + ")";
  curve.width = static_cast<std::size_t>(2 * r);
  curve.regularity = static_cast<std::size_t>(r);
  for (double t : t_grid) {
    const HKPoint k = hK(r, t);
    ThermoSample s;
    s.t = t;
    s.pressure = k.pressure;
    s.rho = std::exp(2.0 * r * k.pressure);
    s.density = k.p;
    s.entropy = k.h;
    curve.samples.push_back(s);
  }
  return curve;
}

}  // namespace mdt

namespace mdt {

CurveBracket::CurveBracket(const ThermoModel& model, const std::vector<double>& seed_grid) : model_(model) {
  auto grid = seed_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  samples_.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t k) { samples_[k] = model_.sample(grid[k]); });
}

std::size_t CurveBracket::sample_count() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return samples_.size();
}

void CurveBracket::add(double t) {
  const auto s = model_.sample(t);
  const auto it = std::lower_bound(samples_.begin(), samples_.end(), t,
                                   [](const ThermoSample& a, double v) { return a.t < v; });
  if (it != samples_.end() && it->t == t) return;
  samples_.insert(it, s);
}

// split = index of the first sample with density >= p (may equal size()).
CurveBracket::Bounds CurveBracket::bounds_near(double p, std::size_t& split) {
  const auto it = std::lower_bound(samples_.begin(), samples_.end(), p,
                                   [](const ThermoSample& a, double v) { return a.density < v; });
  split = static_cast<std::size_t>(it - samples_.begin());
  const auto tangent = [p](const ThermoSample& s) { return s.entropy - s.t * (p - s.density); };
  Bounds b;
  if (split < samples_.size() && samples_[split].density == p) {
    b.lower = b.upper = samples_[split].entropy;
    return b;
  }
  if (split == 0) {
    const auto& hi = samples_.front();
    b.lower = hi.density > 0.0 ? hi.entropy * p / hi.density : 0.0;
    b.upper = tangent(hi);
  } else if (split == samples_.size()) {
    const auto& lo = samples_.back();
    // Chord to (1, 0): h is concave and nonnegative.
    b.lower = lo.density < 1.0 ? lo.entropy * (1.0 - p) / (1.0 - lo.density) : lo.entropy;
    b.upper = tangent(lo);
  } else {
    const auto& lo = samples_[split - 1];
    const auto& hi = samples_[split];
    b.lower = lo.entropy + (hi.entropy - lo.entropy) * (p - lo.density) / (hi.density - lo.density);
    b.upper = std::min(tangent(lo), tangent(hi));
  }
  b.upper = std::max(b.upper, b.lower);
  return b;
}

CurveBracket::Bounds CurveBracket::at(double p, double gap) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("density must lie in [0,1]");
  std::lock_guard<std::mutex> lock(mutex_);
  std::size_t split = 0;
  for (int iter = 0; iter < 200; ++iter) {
    const Bounds b = bounds_near(p, split);
    if (b.upper - b.lower <= gap) return b;
    double t;
    if (split == 0) {
      t = samples_.front().t - 4.0;
      if (t < -60.0) return b;
    } else if (split == samples_.size()) {
      t = samples_.back().t + 4.0;
      if (t > 60.0) return b;
    } else {
      t = 0.5 * (samples_[split - 1].t + samples_[split].t);
      if (t == samples_[split - 1].t || t == samples_[split].t) return b;
    }
    add(t);
  }
  return bounds_near(p, split);
}

CurveBracket::Verdict CurveBracket::compare(double p, double h, double slack, double gap) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("density must lie in [0,1]");
  std::lock_guard<std::mutex> lock(mutex_);
  std::size_t split = 0;
  for (int iter = 0; iter < 200; ++iter) {
    const Bounds b = bounds_near(p, split);
    if (h <= b.lower + slack) return Verdict::Below;
    if (h > b.upper + slack) return Verdict::Above;
    if (b.upper - b.lower <= gap) return Verdict::Tied;
    double t;
    if (split == 0) {
      t = samples_.front().t - 4.0;
      if (t < -60.0) return Verdict::Tied;
    } else if (split == samples_.size()) {
      t = samples_.back().t + 4.0;
      if (t > 60.0) return Verdict::Tied;
    } else {
      t = 0.5 * (samples_[split - 1].t + samples_[split].t);
      if (t == samples_[split - 1].t || t == samples_[split].t) return Verdict::Tied;
    }
    add(t);
  }
  return Verdict::Tied;
}

}  // namespace mdt
