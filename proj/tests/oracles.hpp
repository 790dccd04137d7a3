#pragma once

// Independent reference computations used by the tests. None of these call
// into the library's counting or spectral code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "mdt/bignum.hpp"
#include "mdt/graphs.hpp"

namespace oracle {

// Edge instances with multiplicity expanded.
inline std::vector<std::pair<mdt::Vertex, mdt::Vertex>> edge_instances(const mdt::Graph& g) {
  std::vector<std::pair<mdt::Vertex, mdt::Vertex>> out;
  for (const auto& e : g.edges())
    for (std::uint32_t k = 0; k < e.multiplicity; ++k) out.emplace_back(e.u, e.v);
  return out;
}

// phi(l, G) for all l by depth-first search over edge instances.
inline std::vector<mdt::BigInt> matchings_by_search(const mdt::Graph& g) {
  const auto edges = edge_instances(g);
  std::vector<mdt::BigInt> count(g.vertex_count() / 2 + 1, 0);
  std::vector<char> used(g.vertex_count(), 0);
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t size) {
    if (i == edges.size()) {
      count[size] += 1;
      return;
    }
    go(i + 1, size);
    const auto [u, v] = edges[i];
    if (!used[u] && !used[v]) {
      used[u] = used[v] = 1;
      go(i + 1, size + 1);
      used[u] = used[v] = 0;
    }
  };
  go(0, 0);
  while (count.size() > 1 && count.back() == 0) count.pop_back();
  return count;
}

// phi(l, G) by enumerating every subset of edge instances (<= 20 edges).
inline std::vector<mdt::BigInt> matchings_by_subsets(const mdt::Graph& g) {
  const auto edges = edge_instances(g);
  std::vector<mdt::BigInt> count(g.vertex_count() / 2 + 1, 0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << edges.size()); ++mask) {
    std::vector<char> used(g.vertex_count(), 0);
    bool ok = true;
    std::size_t size = 0;
    for (std::size_t i = 0; i < edges.size() && ok; ++i) {
      if (!(mask >> i & 1)) continue;
      const auto [u, v] = edges[i];
      ok = !used[u] && !used[v];
      used[u] = used[v] = 1;
      ++size;
    }
    if (ok) count[size] += 1;
  }
  while (count.size() > 1 && count.back() == 0) count.pop_back();
  return count;
}

inline std::vector<std::vector<std::uint32_t>> multiplicity_matrix(const mdt::Graph& g) {
  std::vector<std::vector<std::uint32_t>> m(g.vertex_count(), std::vector<std::uint32_t>(g.vertex_count(), 0));
  for (const auto& e : g.edges()) m[e.u][e.v] = m[e.v][e.u] = e.multiplicity;
  return m;
}

// Backtracking isomorphism test on multiplicity matrices.
inline bool isomorphic(const mdt::Graph& a, const mdt::Graph& b) {
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
  auto da = a.degrees(), db = b.degrees();
  auto sa = da, sb = db;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa != sb) return false;
  const auto ma = multiplicity_matrix(a), mb = multiplicity_matrix(b);
  const std::size_t n = a.vertex_count();
  std::vector<int> map(n, -1);
  std::vector<char> taken(n, 0);
  std::function<bool(std::size_t)> go = [&](std::size_t v) {
    if (v == n) return true;
    for (std::size_t w = 0; w < n; ++w) {
      if (taken[w] || da[v] != db[w]) continue;
      bool ok = true;
      for (std::size_t u = 0; u < v && ok; ++u) ok = ma[v][u] == mb[w][static_cast<std::size_t>(map[u])];
      if (!ok) continue;
      map[v] = static_cast<int>(w);
      taken[w] = 1;
      if (go(v + 1)) return true;
      taken[w] = 0;
    }
    map[v] = -1;
    return false;
  };
  return go(0);
}

// BFS 2-coloring written independently of Graph::two_coloring.
inline bool bipartite(const mdt::Graph& g) {
  const auto m = multiplicity_matrix(g);
  std::vector<int> side(g.vertex_count(), -1);
  for (std::size_t s = 0; s < side.size(); ++s) {
    if (side[s] >= 0) continue;
    side[s] = 0;
    std::vector<std::size_t> queue{s};
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const auto u = queue[q];
      for (std::size_t v = 0; v < side.size(); ++v) {
        if (!m[u][v]) continue;
        if (side[v] < 0) {
          side[v] = 1 - side[u];
          queue.push_back(v);
        } else if (side[v] == side[u]) {
          return false;
        }
      }
    }
  }
  return true;
}

// Dense power iteration for an irreducible aperiodic nonnegative matrix.
inline double dense_perron(const std::vector<std::vector<double>>& m, int iterations = 20000) {
  const std::size_t n = m.size();
  std::vector<double> x(n, 1.0), y(n);
  double rho = 0.0;
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = 0.0;
      for (std::size_t j = 0; j < n; ++j) y[i] += m[i][j] * x[j];
    }
    const double norm = *std::max_element(y.begin(), y.end());
    if (std::abs(norm - rho) <= 1e-15 * norm) {
      rho = norm;
      break;
    }
    rho = norm;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / norm;
  }
  return rho;
}

inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// Monomer-dimer entropy of the one-dimensional lattice.
inline double h1(double p) { return xlogx(1.0 - p / 2.0) - xlogx(p / 2.0) - xlogx(1.0 - p); }

inline double gh(int r, double p) {
  return 0.5 * (p * std::log(r) - xlogx(p) - 2.0 * xlogx(1.0 - p) + r * xlogx(1.0 - p / r));
}

// Single-vertex family: rho(t) = (1 + sqrt(1 + 4 e^{2t})) / 2.
inline double golden_rho(double t) { return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * std::exp(2.0 * t))); }

inline double golden_density(double t) {
  const double s = std::sqrt(1.0 + 4.0 * std::exp(2.0 * t));
  return (2.0 * std::exp(2.0 * t) / s) / golden_rho(t);
}

// P_{K(r)}(t) from the matching counts C(r,l)^2 l!, in long double.
inline double krr_pressure(int r, double t) {
  long double sum = 0.0L, c = 1.0L;
  for (int l = 0; l <= r; ++l) {
    if (l > 0) c = c * (r - l + 1) * (r - l + 1) / l;
    sum += c * std::exp(2.0L * l * t);
  }
  return static_cast<double>(std::log(sum) / (2.0L * r));
}

inline double krr_density(int r, double t) {
  long double sum = 0.0L, wsum = 0.0L, c = 1.0L;
  for (int l = 0; l <= r; ++l) {
    if (l > 0) c = c * (r - l + 1) * (r - l + 1) / l;
    const long double w = c * std::exp(2.0L * l * t);
    sum += w;
    wsum += 2.0L * l * w;
  }
  return static_cast<double>(wsum / (2.0L * r * sum));
}

}  // namespace oracle
