#pragma once

#include <iosfwd>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mdt/graphs.hpp"
#include "mdt/transfer.hpp"

namespace mdt {

inline constexpr double kShiftThreshold = 4.0;

struct ThermoSample {
  double t = 0.0;
  double rho = 0.0;
  double pressure = 0.0;
  double density = 0.0;
  double entropy = 0.0;
  bool clamped = false;
};

// P(t) = log rho(B(t)) / #U and its Legendre data for one family.
class ThermoModel {
 public:
  explicit ThermoModel(const LayeredFamily& family, std::size_t width_guard = kDefaultWidthGuard,
                       double tolerance = kDefaultEigenTolerance);
  ThermoModel(TransferMatrix matrix, std::string name, double tolerance = kDefaultEigenTolerance);

  const std::string& name() const noexcept { return name_; }
  std::size_t width() const noexcept { return matrix_.width(); }
  double tolerance() const noexcept { return tolerance_; }
  const TransferMatrix& matrix() const noexcept { return matrix_; }

  double pressure(double t) const;
  // t + log rho(sum_i e^{(i-N)t} B_i) / N
  double pressure_shifted(double t) const;
  double density(double t) const;
  std::pair<double, double> entropy_point(double t) const;
  // Uses the shifted form for t > 4.
  ThermoSample sample(double t) const;

 private:
  ThermoSample sample_with(double t, bool shifted) const;

  TransferMatrix matrix_;
  std::string name_;
  double tolerance_;
};

struct CurveInvariants {
  bool density_monotone = true;
  bool density_in_range = true;
  bool entropy_nonnegative = true;
  bool pressure_monotone = true;
  bool pressure_convex = true;
  bool entropy_concave = true;
  bool legendre_bound = true;
  std::vector<std::string> failures;

  bool all() const noexcept {
    return density_monotone && density_in_range && entropy_nonnegative && pressure_monotone && pressure_convex &&
           entropy_concave && legendre_bound;
  }
};

struct EndpointEstimate {
  double h0 = 0.0;
  double h1 = 0.0;
  double p_low = 0.0;
  double p_high = 0.0;
  bool extrapolated = true;
};

struct EntropyCurve {
  std::string name;
  std::size_t width = 0;
  std::optional<std::size_t> regularity;
  double tolerance = kDefaultEigenTolerance;
  std::vector<ThermoSample> samples;
  // Set when a sample failed; samples then hold the prefix before it.
  bool partial = false;
  std::string error;

  CurveInvariants check_invariants() const;
  // Monotone piecewise-linear h(p) through the samples and (0, 0); nullopt
  // above the largest sampled density.
  std::optional<double> interpolate(double p) const;
  EndpointEstimate endpoints() const;
  void write_csv(std::ostream& out) const;
};

// Two-sided bounds on h(p) for one model. Chords between samples bound h
// from below (concavity), tangent lines h_s - t_s (p - p_s) from above;
// the bracket around p is bisected in t until the bounds decide.
class CurveBracket {
 public:
  struct Bounds {
    double lower = 0.0;
    double upper = 0.0;
    double mid() const noexcept { return 0.5 * (lower + upper); }
  };
  enum class Verdict { Below, Above, Tied };

  CurveBracket(const ThermoModel& model, const std::vector<double>& seed_grid);

  // Refines until upper - lower <= gap.
  Bounds at(double p, double gap = 1e-11);
  // Below: h <= h_model(p) + slack is certain. Above: h > h_model(p) + slack
  // is certain. Tied: refinement could not separate the two.
  Verdict compare(double p, double h, double slack, double gap = 1e-12);
  std::size_t sample_count() const;

 private:
  Bounds bounds_near(double p, std::size_t& split) ;
  void add(double t);

  const ThermoModel& model_;
  std::vector<ThermoSample> samples_;  // sorted by t
  mutable std::mutex mutex_;
};

// 101 points on [-8, 8], denser toward both ends.
std::vector<double> default_grid(std::size_t points = 101, double half_width = 8.0);
std::vector<double> linear_grid(double a, double b, std::size_t points);

EntropyCurve sweep(const ThermoModel& model, const std::vector<double>& t_grid,
                   std::optional<std::size_t> regularity = std::nullopt);
EntropyCurve sweep(const LayeredFamily& family, const std::vector<double>& t_grid,
                   std::size_t width_guard = kDefaultWidthGuard, double tolerance = kDefaultEigenTolerance);

// h_K(r) sampled on the grid from the closed form.
EntropyCurve bethe_curve(int r, const std::vector<double>& t_grid);

}  // namespace mdt
