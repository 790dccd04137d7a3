#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mdt {

using Vertex = std::uint32_t;

// An undirected edge u < v carried `multiplicity` times.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  std::uint32_t multiplicity = 1;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Finite multigraph without self-loops. Vertices are 0..vertex_count-1. Edges
// are kept merged and sorted, so two graphs with the same labelled edge
// multiset compare equal. The optional bipartition assigns side 0 or 1 to
// every vertex and every edge must cross it.
class Graph {
 public:
  Graph() = default;
  Graph(std::size_t vertex_count, std::vector<Edge> edges,
        std::optional<std::vector<std::uint8_t>> bipartition = std::nullopt);

  std::size_t vertex_count() const noexcept { return vertex_count_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  // Number of edges counted with multiplicity.
  std::size_t edge_count() const noexcept;
  const std::optional<std::vector<std::uint8_t>>& bipartition() const noexcept { return bipartition_; }

  std::uint32_t multiplicity(Vertex a, Vertex b) const;
  std::vector<std::size_t> degrees() const;
  bool is_regular(std::size_t r) const;
  bool is_regular_bipartite(std::size_t r) const { return bipartition_.has_value() && is_regular(r); }

  // Proper 2-coloring found by BFS, or nullopt when an odd cycle exists.
  std::optional<std::vector<std::uint8_t>> two_coloring() const;
  Graph with_bipartition(std::vector<std::uint8_t> sides) const;
  Graph with_detected_bipartition() const;
  Graph without_bipartition() const;

  // Neighbor lists (neighbor, multiplicity) per vertex.
  std::vector<std::vector<std::pair<Vertex, std::uint32_t>>> adjacency() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::size_t vertex_count_ = 0;
  std::vector<Edge> edges_;
  std::optional<std::vector<std::uint8_t>> bipartition_;
};

Graph make_empty(std::size_t vertex_count);
Graph make_cycle(std::size_t length);
// Torus T(m): first coordinate varies fastest in the vertex index.
Graph make_torus(std::span<const std::size_t> dims);
// K_{r,r} with side 0 = vertices 0..r-1.
Graph make_complete_bipartite(std::size_t r);
Graph disjoint_union(const Graph& a, const Graph& b);

// Square 0-1 matrix wiring layer k to layer k+1.
class ConnectionMatrix {
 public:
  ConnectionMatrix() = default;
  explicit ConnectionMatrix(std::size_t size);
  // Rows must be square and 0/1; throws InvalidArgument otherwise.
  static ConnectionMatrix from_rows(const std::vector<std::vector<int>>& rows);
  static ConnectionMatrix identity(std::size_t size);
  static ConnectionMatrix from_permutation(std::span<const std::size_t> image);

  std::size_t size() const noexcept { return size_; }
  bool at(std::size_t row, std::size_t col) const { return bits_[row * size_ + col] != 0; }
  void set(std::size_t row, std::size_t col, bool value);

  std::size_t ones() const noexcept;
  bool is_zero() const noexcept { return ones() == 0; }
  const std::vector<std::size_t>& row_sums() const noexcept { return row_sums_; }
  const std::vector<std::size_t>& col_sums() const noexcept { return col_sums_; }
  bool is_permutation() const noexcept;
  // image[u] = v with a_uv = 1; only meaningful for permutation matrices.
  std::vector<std::size_t> permutation_image() const;
  std::vector<std::vector<int>> rows() const;
  // Row-major 0/1 string, used as a canonical key.
  std::string key() const;

  friend bool operator==(const ConnectionMatrix&, const ConnectionMatrix&) = default;
  friend auto operator<=>(const ConnectionMatrix& a, const ConnectionMatrix& b) { return a.bits_ <=> b.bits_; }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint8_t> bits_;
  std::vector<std::size_t> row_sums_;
  std::vector<std::size_t> col_sums_;
};

// Base graph F=(U,D) plus connection matrix A. Layer vertex (u,k) is k*|U|+u.
class LayeredFamily {
 public:
  LayeredFamily(Graph base, ConnectionMatrix connection, std::string name);
  // G_n is n disjoint copies of `base` (A = 0).
  static LayeredFamily disjoint_copies(Graph base, std::string name);

  const Graph& base() const noexcept { return base_; }
  const ConnectionMatrix& connection() const noexcept { return connection_; }
  const std::string& name() const noexcept { return name_; }
  std::size_t width() const noexcept { return base_.vertex_count(); }
  // Degree p + 2q when the base is p-regular and A has q ones per row and column.
  std::optional<std::size_t> regularity() const;

 private:
  struct AllowZero {};
  LayeredFamily(Graph base, ConnectionMatrix connection, std::string name, AllowZero);

  Graph base_;
  ConnectionMatrix connection_;
  std::string name_;
};

// The two wiring modes that keep G_n bipartite: edges between (U_i,k) and
// (U_i,k+1), or between (U_i,k) and (U_{i+1},k+1).
enum class WiringMode { SameClass, SwapClass };

std::optional<WiringMode> bipartite_wiring(const Graph& base, const ConnectionMatrix& a);

Graph build_layer_graph(const LayeredFamily& family, std::size_t n);

enum class ConnectionMode { PermutationBipartite, EvenOddCubic, TwoPerRow };

ConnectionMode parse_connection_mode(const std::string& name);
std::string to_string(ConnectionMode mode);

// Rotations u -> u+s (mod |U|) that are automorphisms of the base.
std::vector<std::vector<std::size_t>> rotation_automorphisms(const Graph& base);
// Smallest conjugate P A P^T over the given relabelings.
ConnectionMatrix canonical_connection(const ConnectionMatrix& a,
                                      const std::vector<std::vector<std::size_t>>& relabelings);

// Connection matrices for a mode, one representative per rotation class,
// sorted by canonical key. EvenOddCubic maps each class-0 vertex to one
// class-1 vertex of the next layer.
std::vector<ConnectionMatrix> enumerate_connections(const Graph& base, ConnectionMode mode);

// G_n(r): the depth-n ball of the r-regular tree around O, closed up by the
// (r-1)-regular bipartite glue graph H_n(r). Glue side 0 is attached to X_n
// and side 1 to A_{r,n+1}, both in increasing vertex order.
Graph make_bethe_sequence_element(std::size_t r, std::size_t n, const Graph& glue);

// Uniform superposition of `degree` random perfect matchings between two
// sides of `half` vertices; multi-edges are kept.
Graph random_regular_bipartite(std::size_t half, std::size_t degree, std::uint64_t seed);

// n x n nonnegative integer matrix with all row and column sums r.
using BiadjacencyMatrix = std::vector<std::vector<std::uint32_t>>;

struct ClassGuard {
  std::size_t max_n = 5;
  std::size_t max_r = 3;
};

// Visits every n x n biadjacency matrix of the class G(2n, r) once.
void for_each_regular_bipartite(std::size_t n, std::size_t r,
                                const std::function<void(const BiadjacencyMatrix&)>& visit,
                                ClassGuard guard = {});
std::vector<Graph> enumerate_regular_bipartite_class(std::size_t n, std::size_t r, ClassGuard guard = {});
// Rows are vertices 0..n-1 (side 0), columns n..2n-1 (side 1).
Graph graph_from_biadjacency(const BiadjacencyMatrix& matrix);

// Line format: "vertices N", optional "bipartition <bits>", "edge u v mult".
void write_graph(std::ostream& out, const Graph& g);
Graph read_graph(std::istream& in);

}  // namespace mdt
