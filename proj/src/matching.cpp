#include "mdt/matching.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

#include <json.hpp>

#include "mdt/errors.hpp"

namespace mdt {

MatchingPolynomial::MatchingPolynomial(std::vector<BigInt> coefficients, std::size_t vertex_count)
    : coefficients_(std::move(coefficients)), vertex_count_(vertex_count) {
  while (coefficients_.size() > 1 && coefficients_.back() == 0) coefficients_.pop_back();
  if (coefficients_.empty() || coefficients_[0] != 1)
    throw InvalidArgument("matching polynomial must have phi(0) = 1");
  if (coefficients_.size() > vertex_count_ / 2 + 1)
    throw InvalidArgument("matching polynomial degree exceeds half the vertex count");
  for (const auto& c : coefficients_)
    if (c < 0) throw InvalidArgument("negative matching count");
}

BigInt MatchingPolynomial::operator[](std::size_t l) const {
  return l < coefficients_.size() ? coefficients_[l] : BigInt(0);
}

BigInt MatchingPolynomial::total() const {
  BigInt sum = 0;
  for (const auto& c : coefficients_) sum += c;
  return sum;
}

Rational MatchingPolynomial::evaluate(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * x + Rational(*it);
  return acc;
}

double MatchingPolynomial::evaluate(double x) const {
  double acc = 0.0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it)
    acc = acc * x + it->convert_to<double>();
  return acc;
}

std::string MatchingPolynomial::to_json() const {
  nlohmann::json j;
  j["n_vertices"] = vertex_count_;
  auto phi = nlohmann::json::array();
  for (const auto& c : coefficients_) phi.push_back(to_string(c));
  j["phi"] = phi;
  return j.dump();
}

MatchingPolynomial MatchingPolynomial::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad polynomial json: ") + e.what());
  }
  if (!j.contains("n_vertices") || !j.contains("phi") || !j["phi"].is_array())
    throw InvalidArgument("polynomial json needs n_vertices and phi");
  std::vector<BigInt> coeffs;
  for (const auto& entry : j["phi"]) {
    if (!entry.is_string()) throw InvalidArgument("phi entries must be decimal strings");
    try {
      coeffs.emplace_back(entry.get<std::string>());
    } catch (const std::exception&) {
      throw InvalidArgument("bad integer in phi: " + entry.get<std::string>());
    }
  }
  return MatchingPolynomial(std::move(coeffs), j["n_vertices"].get<std::size_t>());
}

MatchingPolynomial convolve(const MatchingPolynomial& a, const MatchingPolynomial& b) {
  const auto& x = a.coefficients();
  const auto& y = b.coefficients();
  std::vector<BigInt> out(x.size() + y.size() - 1, BigInt(0));
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) out[i + j] += x[i] * y[j];
  return MatchingPolynomial(std::move(out), a.vertex_count() + b.vertex_count());
}

namespace {

using Poly = std::vector<BigInt>;

void add_shifted(Poly& acc, const Poly& p, const BigInt& factor) {
  if (acc.size() < p.size() + 1) acc.resize(p.size() + 1, BigInt(0));
  for (std::size_t i = 0; i < p.size(); ++i) acc[i + 1] += factor * p[i];
}

class MatchingMemo {
 public:
  explicit MatchingMemo(const Graph& g) : neighbors_(g.vertex_count(), 0), mult_(g.vertex_count()) {
    for (const Edge& e : g.edges()) {
      neighbors_[e.u] |= std::uint64_t{1} << e.v;
      neighbors_[e.v] |= std::uint64_t{1} << e.u;
      mult_[e.u].emplace_back(e.v, e.multiplicity);
      mult_[e.v].emplace_back(e.u, e.multiplicity);
    }
  }

  const Poly& solve(std::uint64_t mask) {
    if (auto it = memo_.find(mask); it != memo_.end()) return it->second;
    // Strip isolated low vertices without memoizing the intermediate masks.
    std::uint64_t rest = mask;
    while (rest != 0) {
      const int v = std::countr_zero(rest);
      if ((neighbors_[v] & rest) != 0) break;
      rest &= rest - 1;
    }
    Poly result;
    if (rest == 0) {
      result = Poly{BigInt(1)};
    } else if (rest != mask) {
      result = solve(rest);
    } else {
      const int v = std::countr_zero(rest);
      const std::uint64_t without_v = rest & (rest - 1);
      result = solve(without_v);
      for (const auto& [w, m] : mult_[v]) {
        if (((without_v >> w) & 1U) == 0) continue;
        add_shifted(result, solve(without_v & ~(std::uint64_t{1} << w)), BigInt(m));
      }
    }
    return memo_.emplace(mask, std::move(result)).first->second;
  }

 private:
  std::vector<std::uint64_t> neighbors_;
  std::vector<std::vector<std::pair<Vertex, std::uint32_t>>> mult_;
  std::unordered_map<std::uint64_t, Poly> memo_;
};

}  // namespace

MatchingPolynomial matching_polynomial(const Graph& g, std::size_t max_vertices) {
  const std::size_t n = g.vertex_count();
  if (n > max_vertices || n > 64)
    throw ResourceLimit("matching polynomial: " + std::to_string(n) + " vertices exceeds guard " +
                        std::to_string(std::min<std::size_t>(max_vertices, 64)));
  if (n == 0) return MatchingPolynomial({BigInt(1)}, 0);
  MatchingMemo memo(g);
  const std::uint64_t full = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  return MatchingPolynomial(memo.solve(full), n);
}

BigInt krr_matching_count(std::int64_t r, std::int64_t l) {
  if (r < 0 || l < 0 || l > r) throw InvalidArgument("krr_matching_count needs 0 <= l <= r");
  const BigInt c = binomial(r, l);
  return c * c * factorial(l);
}

BigInt monomer_dimer_cover_count(const Graph& g, std::size_t max_vertices) {
  return matching_polynomial(g, max_vertices).total();
}

NewtonCheck newton_check(const MatchingPolynomial& mp) {
  const auto n = static_cast<std::int64_t>(mp.vertex_count() / 2);
  for (std::int64_t l = 1; l < n; ++l) {
    const BigInt lhs = mp[l - 1] * mp[l + 1] * binomial(n, l) * binomial(n, l);
    const BigInt rhs = mp[l] * mp[l] * binomial(n, l - 1) * binomial(n, l + 1);
    if (lhs > rhs) return {false, static_cast<std::size_t>(l)};
  }
  return {};
}

namespace {

// Coefficient l of the row-by-row matching expansion equals the sum of
// permanents of the l x l submatrices.
std::vector<BigInt> biadjacency_polynomial(const BiadjacencyMatrix& b) {
  const std::size_t n = b.size();
  if (n > 20) throw ResourceLimit("biadjacency matrix too large");
  for (const auto& row : b)
    if (row.size() != n) throw InvalidArgument("biadjacency matrix must be square");
  const std::size_t states = std::size_t{1} << n;
  std::vector<BigInt> ways(states, BigInt(0));
  ways[0] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<BigInt> next = ways;
    for (std::size_t mask = 0; mask < states; ++mask) {
      if (ways[mask] == 0) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (((mask >> j) & 1U) == 0 && b[i][j] != 0) next[mask | (std::size_t{1} << j)] += ways[mask] * b[i][j];
    }
    ways = std::move(next);
  }
  std::vector<BigInt> coeffs(n + 1, BigInt(0));
  for (std::size_t mask = 0; mask < states; ++mask) coeffs[std::popcount(mask)] += ways[mask];
  return coeffs;
}

}  // namespace

BigInt biadjacency_matchings(const BiadjacencyMatrix& b, std::size_t l) {
  if (l > b.size()) return 0;
  return biadjacency_polynomial(b)[l];
}

ClassMinimum min_matchings_over_class(std::size_t n, std::size_t r, std::size_t l, ClassGuard guard) {
  if (l > n) throw InvalidArgument("l must not exceed n");
  std::optional<ClassMinimum> best;
  for_each_regular_bipartite(
      n, r,
      [&](const BiadjacencyMatrix& b) {
        BigInt count = biadjacency_polynomial(b)[l];
        if (!best || count < best->count) best = ClassMinimum{std::move(count), b};
      },
      guard);
  if (!best) throw InvalidArgument("empty regular bipartite class");
  return *best;
}

double finite_entropy_point(const Graph& g, double p, std::size_t max_vertices) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("density must lie in [0,1]");
  if (g.vertex_count() == 0) throw InvalidArgument("graph has no vertices");
  const auto mp = matching_polynomial(g, max_vertices);
  const auto l = static_cast<std::size_t>(std::floor(p * static_cast<double>(g.vertex_count()) / 2.0));
  const BigInt count = mp[l];
  if (count <= 1) return 0.0;
  return log_big(count) / static_cast<double>(g.vertex_count());
}

}  // namespace mdt
