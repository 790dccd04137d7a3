#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mdt/bignum.hpp"
#include "mdt/graphs.hpp"

namespace mdt {

// psi(x, G) = sum_l phi(l, G) x^l with exact coefficients.
class MatchingPolynomial {
 public:
  MatchingPolynomial() = default;
  // Trailing zero coefficients are dropped; coefficients[0] must be 1.
  MatchingPolynomial(std::vector<BigInt> coefficients, std::size_t vertex_count);

  const std::vector<BigInt>& coefficients() const noexcept { return coefficients_; }
  std::size_t vertex_count() const noexcept { return vertex_count_; }
  std::size_t degree() const noexcept { return coefficients_.size() - 1; }
  // phi(l, G); zero beyond the degree.
  BigInt operator[](std::size_t l) const;

  BigInt total() const;
  Rational evaluate(const Rational& x) const;
  double evaluate(double x) const;

  // {"n_vertices": N, "phi": ["1", ...]}
  std::string to_json() const;
  static MatchingPolynomial from_json(const std::string& text);

  friend bool operator==(const MatchingPolynomial&, const MatchingPolynomial&) = default;

 private:
  std::vector<BigInt> coefficients_{BigInt(1)};
  std::size_t vertex_count_ = 0;
};

// Product of two matching polynomials (disjoint union of the graphs).
MatchingPolynomial convolve(const MatchingPolynomial& a, const MatchingPolynomial& b);

inline constexpr std::size_t kDefaultMatchingVertexGuard = 40;

// Deletion/contraction on the lowest remaining vertex, memoized on the
// induced-subgraph bitmask. Multi-edges contribute their multiplicity.
MatchingPolynomial matching_polynomial(const Graph& g, std::size_t max_vertices = kDefaultMatchingVertexGuard);

// C(r,l)^2 l!
BigInt krr_matching_count(std::int64_t r, std::int64_t l);

// Phi(G) = psi(1, G).
BigInt monomer_dimer_cover_count(const Graph& g, std::size_t max_vertices = kDefaultMatchingVertexGuard);

struct NewtonCheck {
  bool holds = true;
  std::optional<std::size_t> first_violation;
};

// phi(l-1)/C(n,l-1) * phi(l+1)/C(n,l+1) <= (phi(l)/C(n,l))^2 for l = 1..n-1,
// n = floor(vertex_count/2), checked exactly.
NewtonCheck newton_check(const MatchingPolynomial& mp);

// phi(l, G) for the bipartite multigraph with biadjacency B, as the sum of
// permanents of all l x l submatrices.
BigInt biadjacency_matchings(const BiadjacencyMatrix& b, std::size_t l);

struct ClassMinimum {
  BigInt count;
  BiadjacencyMatrix witness;
};

// mu(l, 2n, r): minimum of phi(l, .) over G(2n, r), first minimizer in
// enumeration order.
ClassMinimum min_matchings_over_class(std::size_t n, std::size_t r, std::size_t l, ClassGuard guard = {});

// log(max(phi(floor(p #V / 2), G), 1)) / #V
double finite_entropy_point(const Graph& g, double p, std::size_t max_vertices = kDefaultMatchingVertexGuard);

}  // namespace mdt
