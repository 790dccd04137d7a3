#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "mdt/errors.hpp"
#include "mdt/matching.hpp"
#include "mdt/transfer.hpp"
#include "oracles.hpp"

using namespace mdt;

namespace {

LayeredFamily single_vertex() { return LayeredFamily(make_empty(1), ConnectionMatrix::identity(1), "vertex"); }
LayeredFamily c4(const ConnectionMatrix& a) { return LayeredFamily(make_cycle(4), a, "c4"); }
ConnectionMatrix swap4() {
  const std::vector<std::size_t> image{1, 0, 3, 2};
  return ConnectionMatrix::from_permutation(image);
}
ConnectionMatrix even_odd(std::size_t n) {
  ConnectionMatrix a(n);
  for (std::size_t u = 0; u < n; u += 2) a.set(u, u + 1, true);
  return a;
}

// Permanent by expansion over all permutations.
long brute_permanent(const ConnectionMatrix& a, Subset s, Subset t) {
  std::vector<std::size_t> rows, cols;
  for (std::size_t u = 0; u < a.size(); ++u) {
    if (s >> u & 1) rows.push_back(u);
    if (t >> u & 1) cols.push_back(u);
  }
  if (rows.size() != cols.size()) return 0;
  std::vector<std::size_t> perm(cols.size());
  std::iota(perm.begin(), perm.end(), 0);
  long total = 0;
  do {
    long prod = 1;
    for (std::size_t i = 0; i < rows.size(); ++i) prod *= a.at(rows[i], cols[perm[i]]);
    total += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

}  // namespace

TEST_CASE("connection lift") {
  const auto id = lift_connection(ConnectionMatrix::identity(3));
  for (Subset s = 0; s < 8; ++s)
    for (Subset t = 0; t < 8; ++t) CHECK(id.at(s, t) == (s == t ? 1 : 0));
  const auto full = lift_connection(ConnectionMatrix::from_rows({{1, 1}, {1, 1}}));
  CHECK(full.at(3, 3) == 2);
  CHECK(full.at(1, 2) == 1);
  CHECK(full.at(2, 1) == 1);
  CHECK(full.at(0, 0) == 1);
  CHECK(full.at(1, 3) == 0);
  const auto two = ConnectionMatrix::from_rows({{1, 1, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 1}, {1, 0, 0, 1}});
  const auto lift = lift_connection(two);
  for (Subset s = 0; s < 16; ++s)
    for (Subset t = 0; t < 16; ++t) CHECK(lift.at(s, t) == brute_permanent(two, s, t));
  const auto perm = lift_connection(swap4());
  CHECK(perm.is_permutation());
  for (Subset s = 0; s < 16; ++s) CHECK(perm.row(s).size() == 1);
}

TEST_CASE("intra-layer tables") {
  const auto one = build_intra_table(make_empty(1));
  CHECK(one.c(0, 0) == std::vector<std::int64_t>{1});
  CHECK(one.c(0, 1) == std::vector<std::int64_t>{1});
  CHECK(one.c(1, 0) == std::vector<std::int64_t>{1});
  CHECK(one.c(1, 1).empty());
  const Graph cycle = make_cycle(4);
  const auto t4 = build_intra_table(cycle);
  CHECK(t4.c(0, 0) == std::vector<std::int64_t>{1, 4, 2});
  for (Subset s = 0; s < 16; ++s) {
    for (Subset t = 0; t < 16; ++t) {
      const auto c = t4.c(s, t);
      CHECK(c == t4.c(t, s));
      if (s & t) {
        CHECK(c.empty());
        continue;
      }
      REQUIRE_FALSE(c.empty());
      CHECK(c[0] == 1);
      if ((s | t) == 15) CHECK(c == std::vector<std::int64_t>{1});
      // Matching polynomial of the induced subgraph on the remaining vertices.
      const Subset w = 15 & ~(s | t);
      std::vector<Edge> edges;
      for (const auto& e : cycle.edges())
        if ((w >> e.u & 1) && (w >> e.v & 1)) edges.push_back(e);
      const auto brute = oracle::matchings_by_subsets(Graph(4, edges));
      std::vector<std::int64_t> expect;
      for (const auto& b : brute) expect.push_back(static_cast<std::int64_t>(b));
      CHECK(c == expect);
    }
  }
  CHECK_THROWS_AS(build_intra_table(make_cycle(18)), ResourceLimit);
}

TEST_CASE("numeric evaluation") {
  const TransferMatrix tm(single_vertex());
  CHECK(tm.evaluate(0.0).to_dense() == std::vector<std::vector<double>>{{1, 1}, {1, 0}});
  CHECK(tm.derivative(0.0).to_dense() == std::vector<std::vector<double>>{{0, 1}, {1, 0}});
  const auto low = tm.evaluate(-60.0).to_dense();
  CHECK(low[0][0] == 1.0);
  CHECK(low[0][1] < 1e-25);
  CHECK(tm.derivative(-60.0).to_dense()[0][1] < 1e-25);
  CHECK_THROWS_AS(tm.evaluate(800.0), RangeError);
  CHECK_NOTHROW(tm.evaluate_shifted(800.0));

  const TransferMatrix torus(c4(ConnectionMatrix::identity(4)));
  for (double t : {-1.3, 0.0, 0.7}) {
    const auto m = torus.evaluate(t).to_dense();
    for (std::size_t i = 0; i < m.size(); ++i) {
      bool positive = false;
      for (std::size_t j = 0; j < m.size(); ++j) {
        CHECK(m[i][j] == m[j][i]);
        CHECK(m[i][j] >= 0.0);
        if (m[i][j] > 0.0) CHECK((i & j) == 0);
        positive = positive || m[i][j] > 0.0;
      }
      CHECK(positive);
    }
  }
}

TEST_CASE("derivative matches central differences") {
  const double h = 1e-4;
  for (const auto& f : {single_vertex(), c4(swap4()), LayeredFamily(make_cycle(6), even_odd(6), "cubic")}) {
    const TransferMatrix tm(f);
    for (double t : {-2.0, -0.5, 0.0, 0.9, 2.5}) {
      const auto plus = tm.evaluate(t + h).to_dense(), minus = tm.evaluate(t - h).to_dense();
      const auto d = tm.derivative(t).to_dense();
      double worst = 0.0, scale = 1.0;
      for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = 0; j < d.size(); ++j) {
          worst = std::max(worst, std::abs((plus[i][j] - minus[i][j]) / (2 * h) - d[i][j]));
          scale = std::max(scale, std::abs(d[i][j]));
        }
      CHECK(worst <= 10.0 * scale * h * h * 100.0);
    }
  }
}

TEST_CASE("shifted form is a rescaling") {
  const TransferMatrix tm(c4(swap4()));
  const double t = 1.7;
  const auto plain = tm.evaluate(t).to_dense(), shifted = tm.evaluate_shifted(t).to_dense();
  const double factor = std::exp(-4.0 * t);
  for (std::size_t i = 0; i < plain.size(); ++i)
    for (std::size_t j = 0; j < plain.size(); ++j)
      CHECK(shifted[i][j] == doctest::Approx(plain[i][j] * factor).epsilon(1e-13));
}

TEST_CASE("exact traces equal monomer-dimer sums") {
  const TransferMatrix tm(single_vertex());
  CHECK(exact_trace_power(tm, Rational(1), 3) == 4);
  CHECK(exact_trace_power(tm, Rational(1), 3) == Rational(monomer_dimer_cover_count(make_cycle(3))));
  const std::vector<LayeredFamily> families{single_vertex(), c4(ConnectionMatrix::identity(4)), c4(swap4()),
                                            LayeredFamily(make_cycle(6), even_odd(6), "cubic"),
                                            LayeredFamily::disjoint_copies(make_complete_bipartite(2), "k22")};
  for (const auto& f : families) {
    const TransferMatrix m(f);
    for (std::size_t n : {2, 3, 4}) {
      for (const Rational x : {Rational(1), Rational(3, 2), Rational(2, 3)}) {
        const auto psi = matching_polynomial(build_layer_graph(f, n)).evaluate(x * x);
        INFO(f.name() << " n=" << n << " x=" << to_string(x));
        CHECK(exact_trace_power(m, x, n) == psi);
      }
    }
  }
  CHECK_THROWS_AS(exact_trace_power(tm, Rational(1), 1), InvalidArgument);
}

TEST_CASE("power iteration agrees with the exact characteristic root") {
  const TransferMatrix tm(c4(ConnectionMatrix::identity(4)));
  const double exact = largest_real_root(exact_characteristic_polynomial(tm, Rational(1)));
  const auto pr = transfer_perron(tm, 0.0, false);
  CHECK(std::abs(pr.rho - exact) / exact <= 1e-10);
  const TransferMatrix sw(c4(swap4()));
  for (const Rational x : {Rational(3, 2), Rational(2, 3)}) {
    const double root = largest_real_root(exact_characteristic_polynomial(sw, x));
    CHECK(std::abs(transfer_perron(sw, std::log(static_cast<double>(x)), false).rho - root) / root <= 1e-9);
  }
  // Golden ratio as the largest root of z^2 - z - 1.
  CHECK(largest_real_root({Rational(-1), Rational(-1), Rational(1)}) ==
        doctest::Approx((1 + std::sqrt(5.0)) / 2).epsilon(1e-14));
}

TEST_CASE("eigenvector residuals") {
  const TransferMatrix tm(LayeredFamily(make_cycle(6), even_odd(6), "cubic"));
  for (double t : {-1.0, 0.0, 1.0}) {
    const auto m = tm.evaluate(t);
    const auto pr = spectral_radius(m);
    std::vector<double> y;
    m.multiply(pr.right, y);
    double worst = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) worst = std::max(worst, std::abs(y[i] - pr.rho * pr.right[i]));
    CHECK(worst / pr.rho <= 10 * kDefaultEigenTolerance + 1e-15);
  }
}

TEST_CASE("maximal pressure of the identity wiring") {
  const std::vector<double> ts{-1.0, 0.0, 1.0};
  for (const auto& row : max_pressure_check(make_cycle(4), ConnectionMatrix::identity(4), ts)) {
    CHECK(row.holds);
    CHECK(row.margin == doctest::Approx(0.0));
  }
  const std::vector<std::size_t> shift{1, 2, 3, 0};
  const std::vector<double> zero{0.0};
  const auto rows = max_pressure_check(make_cycle(4), ConnectionMatrix::from_permutation(shift), zero);
  CHECK(rows.at(0).holds);
  // Independent: dense Perron roots of M(0) A~ and M(0).
  const TransferMatrix layers(c4(ConnectionMatrix::identity(4)));
  const TransferMatrix wired(c4(ConnectionMatrix::from_permutation(shift)));
  const double p0 = std::log(oracle::dense_perron(layers.evaluate(0.0).to_dense())) / 4;
  const double p1 = std::log(oracle::dense_perron(wired.evaluate(0.0).to_dense())) / 4;
  CHECK(rows[0].pressure_layers == doctest::Approx(p0).epsilon(1e-11));
  CHECK(rows[0].pressure_connected == doctest::Approx(p1).epsilon(1e-11));
  CHECK_THROWS_AS(max_pressure_check(make_cycle(4), ConnectionMatrix::from_rows({{1, 1, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 1}, {1, 0, 0, 1}}), zero),
                  InvalidArgument);
}

TEST_CASE("matrix dump") {
  const TransferMatrix tm(single_vertex());
  std::stringstream ss;
  tm.dump(ss);
  std::string first;
  std::getline(ss, first);
  CHECK(first == "2");
  std::size_t lines = 0;
  for (std::string line; std::getline(ss, line);) ++lines;
  CHECK(lines == 3);
}
