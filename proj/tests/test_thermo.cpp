#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mdt/bounds.hpp"
#include "mdt/errors.hpp"
#include "mdt/sandwich.hpp"
#include "mdt/thermo.hpp"
#include "oracles.hpp"

using namespace mdt;

namespace {

LayeredFamily single_vertex() { return LayeredFamily(make_empty(1), ConnectionMatrix::identity(1), "vertex"); }

}  // namespace

TEST_CASE("single-vertex family closed forms") {
  const ThermoModel m(single_vertex());
  CHECK(m.pressure(0.0) == doctest::Approx(std::log((1 + std::sqrt(5.0)) / 2)).epsilon(1e-13));
  const auto [p, h] = m.entropy_point(0.0);
  CHECK(p == doctest::Approx(0.5527864045).epsilon(1e-10));
  CHECK(h == doctest::Approx(0.4812118251).epsilon(1e-10));
  CHECK(h == doctest::Approx(oracle::h1(p)).epsilon(1e-12));
  for (double t : {-3.0, -1.0, 0.5, 2.0, 3.9}) {
    CHECK(m.pressure(t) == doctest::Approx(std::log(oracle::golden_rho(t))).epsilon(1e-13));
    CHECK(m.density(t) == doctest::Approx(oracle::golden_density(t)).epsilon(1e-11));
  }
  // Large t: the shifted form stays finite and P(t) - t is bounded.
  const double p20 = m.pressure_shifted(20.0);
  CHECK(std::isfinite(p20));
  CHECK(p20 - 20.0 == doctest::Approx(std::log(oracle::golden_rho(20.0)) - 20.0).epsilon(1e-9));
  CHECK(m.pressure_shifted(0.0) == doctest::Approx(m.pressure(0.0)).epsilon(1e-13));
  CHECK(m.pressure_shifted(2.0) == doctest::Approx(m.pressure(2.0)).epsilon(1e-12));
  CHECK(m.density(30.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(m.sample(-30.0).density == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(m.pressure(-40.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("single-vertex sweep reproduces h1") {
  const auto curve = sweep(single_vertex(), default_grid());
  REQUIRE(curve.samples.size() == 101);
  CHECK_FALSE(curve.partial);
  double worst = 0.0;
  for (const auto& s : curve.samples) worst = std::max(worst, std::abs(s.entropy - oracle::h1(s.density)));
  CHECK(worst <= 1e-6);
  CHECK(curve.check_invariants().all());
  std::ostringstream csv;
  curve.write_csv(csv);
  CHECK(csv.str().rfind("t,rho,P,p,h\n", 0) == 0);
}

TEST_CASE("density matches central differences") {
  const double h = 1e-4;
  const std::vector<std::size_t> swap{1, 0, 3, 2};
  for (const auto& f : {single_vertex(), LayeredFamily(make_cycle(4), ConnectionMatrix::from_permutation(swap), "c4")}) {
    const ThermoModel m(f);
    for (double t : default_grid()) {
      const double fd = (m.sample(t + h).pressure - m.sample(t - h).pressure) / (2 * h);
      CHECK(std::abs(m.sample(t).density - fd) <= 1e-6);
    }
  }
}

TEST_CASE("disjoint K_{r,r} copies follow the closed forms") {
  for (int r : {2, 3, 4}) {
    const ThermoModel m(LayeredFamily::disjoint_copies(make_complete_bipartite(static_cast<std::size_t>(r)), "k"));
    for (double t : {-3.0, -1.0, 0.0, 0.8, 2.0, 6.0}) {
      const auto s = m.sample(t);
      CHECK(s.pressure == doctest::Approx(oracle::krr_pressure(r, t)).epsilon(1e-12));
      CHECK(s.density == doctest::Approx(oracle::krr_density(r, t)).epsilon(1e-10));
      const auto k = hK(r, t);
      CHECK(std::abs(k.p - s.density) <= 1e-10);
      CHECK(std::abs(k.h - s.entropy) <= 1e-10);
    }
  }
}

TEST_CASE("sweep input validation and partial results") {
  const std::vector<double> reversed{1.0, 0.0, -1.0};
  CHECK_THROWS_AS(sweep(single_vertex(), reversed), InvalidArgument);
  const std::vector<double> repeated{0.0, 0.0};
  CHECK_THROWS_AS(sweep(single_vertex(), repeated), InvalidArgument);
  CHECK(linear_grid(-1, 1, 5) == std::vector<double>{-1, -0.5, 0, 0.5, 1});
  const auto g = default_grid();
  CHECK(g.front() == doctest::Approx(-8.0));
  CHECK(g.back() == doctest::Approx(8.0));
  CHECK(g[50] == 0.0);
  CHECK(g[1] - g[0] < g[51] - g[50]);
}

TEST_CASE("curve invariants detect broken curves") {
  EntropyCurve c;
  c.samples = {{-1, 1, 0.1, 0.3, 0.2}, {0, 1, 0.2, 0.2, 0.2}, {1, 1, 0.5, 0.9, 0.1}};
  const auto inv = c.check_invariants();
  CHECK_FALSE(inv.density_monotone);
  CHECK_FALSE(inv.all());
  CHECK_FALSE(inv.failures.empty());
}

TEST_CASE("interpolation and endpoints") {
  const auto curve = sweep(single_vertex(), default_grid());
  CHECK(curve.interpolate(0.0) == std::optional<double>(0.0));
  const auto mid = curve.interpolate(0.5);
  REQUIRE(mid);
  CHECK(*mid == doctest::Approx(oracle::h1(0.5)).epsilon(1e-2));
  CHECK_FALSE(curve.interpolate(1.5).has_value());
  const auto ends = curve.endpoints();
  CHECK(ends.extrapolated);
  CHECK(ends.h0 == doctest::Approx(0.0).epsilon(1e-5));
  CHECK(ends.h1 == doctest::Approx(0.0).epsilon(1e-3));
}

TEST_CASE("certified bracket decides against the closed form") {
  const ThermoModel m(single_vertex());
  CurveBracket bracket(m, default_grid());
  for (double p : {0.05, 0.3, 0.5527864045, 0.8, 0.97}) {
    const auto b = bracket.at(p);
    CHECK(b.lower <= oracle::h1(p) + 1e-12);
    CHECK(b.upper >= oracle::h1(p) - 1e-12);
    CHECK(b.upper - b.lower <= 1e-10);
    CHECK(bracket.compare(p, oracle::h1(p) + 1e-6, 1e-9) == CurveBracket::Verdict::Above);
    CHECK(bracket.compare(p, oracle::h1(p) - 1e-6, 1e-9) == CurveBracket::Verdict::Below);
    CHECK(bracket.compare(p, oracle::h1(p), 1e-9) == CurveBracket::Verdict::Below);
    CHECK(bracket.compare(p, oracle::h1(p) + 2e-9, 1e-9) == CurveBracket::Verdict::Above);
  }
}

TEST_CASE("bethe curve") {
  const auto c = bethe_curve(4, default_grid());
  CHECK(c.check_invariants().all());
  CHECK(c.samples.front().density < 1e-5);
  CHECK(c.samples.front().entropy < 1e-4);
}

TEST_CASE("sandwich on a 4-regular torus family") {
  const auto curve = sweep(LayeredFamily(make_cycle(6), ConnectionMatrix::identity(6), "c6"), default_grid());
  const auto rep = sandwich_report(curve, 4);
  CHECK(rep.pass());
  CHECK(rep.min_lower_margin >= -1e-9);
  CHECK(rep.min_upper_margin >= -1e-9);
  // The cycle family sits on the r = 2 lower bound.
  const auto cycle = sandwich_report(sweep(single_vertex(), default_grid()), 2);
  CHECK(cycle.pass());
  CHECK(std::abs(cycle.min_lower_margin) <= 1e-6);
}

TEST_CASE("degree-6 two-per-row families stay closer to the lower bound than the 4-regular torus") {
  const Graph base = make_cycle(4);
  const auto mean_margin = [](const LayeredFamily& f, int r) {
    const ThermoModel m(f);
    CurveBracket b(m, default_grid());
    double sum = 0.0;
    for (int k = 1; k <= 99; ++k) sum += b.at(k / 100.0).mid() - low_best(r, k / 100.0);
    return sum / 99.0;
  };
  const double torus = mean_margin(LayeredFamily(base, ConnectionMatrix::identity(4), "torus"), 4);
  const auto conns = enumerate_connections(base, ConnectionMode::TwoPerRow);
  REQUIRE_FALSE(conns.empty());
  for (const auto& a : conns) {
    const LayeredFamily f(base, a, "two");
    const auto rep = sandwich_report(sweep(f, default_grid()), 6);
    CHECK(rep.pass());
    CHECK(mean_margin(f, 6) < torus);
  }
}
