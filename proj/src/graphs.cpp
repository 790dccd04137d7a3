#include "mdt/graphs.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#include "mdt/errors.hpp"

namespace mdt {

Graph::Graph(std::size_t vertex_count, std::vector<Edge> edges,
             std::optional<std::vector<std::uint8_t>> bipartition)
    : vertex_count_(vertex_count) {
  std::map<std::pair<Vertex, Vertex>, std::uint64_t> merged;
  for (const Edge& e : edges) {
    if (e.u >= vertex_count || e.v >= vertex_count)
      throw InvalidArgument("edge endpoint out of range");
    if (e.u == e.v) throw InvalidArgument("self-loops are not allowed");
    if (e.multiplicity == 0) throw InvalidArgument("edge multiplicity must be positive");
    merged[{std::min(e.u, e.v), std::max(e.u, e.v)}] += e.multiplicity;
  }
  edges_.reserve(merged.size());
  for (const auto& [key, mult] : merged) {
    if (mult > UINT32_MAX) throw InvalidArgument("edge multiplicity overflow");
    edges_.push_back({key.first, key.second, static_cast<std::uint32_t>(mult)});
  }
  if (bipartition) {
    if (bipartition->size() != vertex_count) throw InvalidArgument("bipartition size mismatch");
    for (auto side : *bipartition)
      if (side > 1) throw InvalidArgument("bipartition sides must be 0 or 1");
    for (const Edge& e : edges_)
      if ((*bipartition)[e.u] == (*bipartition)[e.v])
        throw InvalidArgument("edge does not cross the bipartition");
    bipartition_ = std::move(bipartition);
  }
}

std::size_t Graph::edge_count() const noexcept {
  std::size_t total = 0;
  for (const Edge& e : edges_) total += e.multiplicity;
  return total;
}

std::uint32_t Graph::multiplicity(Vertex a, Vertex b) const {
  const Edge probe{std::min(a, b), std::max(a, b), 0};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), probe, [](const Edge& x, const Edge& y) {
    return std::tie(x.u, x.v) < std::tie(y.u, y.v);
  });
  if (it != edges_.end() && it->u == probe.u && it->v == probe.v) return it->multiplicity;
  return 0;
}

std::vector<std::size_t> Graph::degrees() const {
  std::vector<std::size_t> deg(vertex_count_, 0);
  for (const Edge& e : edges_) {
    deg[e.u] += e.multiplicity;
    deg[e.v] += e.multiplicity;
  }
  return deg;
}

bool Graph::is_regular(std::size_t r) const {
  const auto deg = degrees();
  return std::all_of(deg.begin(), deg.end(), [r](std::size_t d) { return d == r; });
}

std::vector<std::vector<std::pair<Vertex, std::uint32_t>>> Graph::adjacency() const {
  std::vector<std::vector<std::pair<Vertex, std::uint32_t>>> adj(vertex_count_);
  for (const Edge& e : edges_) {
    adj[e.u].emplace_back(e.v, e.multiplicity);
    adj[e.v].emplace_back(e.u, e.multiplicity);
  }
  return adj;
}

std::optional<std::vector<std::uint8_t>> Graph::two_coloring() const {
  constexpr std::uint8_t kUnset = 2;
  std::vector<std::uint8_t> color(vertex_count_, kUnset);
  const auto adj = adjacency();
  for (std::size_t start = 0; start < vertex_count_; ++start) {
    if (color[start] != kUnset) continue;
    color[start] = 0;
    std::queue<std::size_t> frontier;
    frontier.push(start);
    while (!frontier.empty()) {
      const auto x = frontier.front();
      frontier.pop();
      for (const auto& [y, mult] : adj[x]) {
        if (color[y] == kUnset) {
          color[y] = color[x] ^ 1;
          frontier.push(y);
        } else if (color[y] == color[x]) {
          return std::nullopt;
        }
      }
    }
  }
  return color;
}

Graph Graph::with_bipartition(std::vector<std::uint8_t> sides) const {
  return Graph(vertex_count_, edges_, std::move(sides));
}

Graph Graph::with_detected_bipartition() const {
  return Graph(vertex_count_, edges_, two_coloring());
}

Graph Graph::without_bipartition() const { return Graph(vertex_count_, edges_); }

Graph make_empty(std::size_t vertex_count) {
  if (vertex_count == 0) throw InvalidArgument("graph needs at least one vertex");
  return Graph(vertex_count, {}, std::vector<std::uint8_t>(vertex_count, 0));
}

Graph make_cycle(std::size_t length) {
  if (length < 3) throw InvalidArgument("cycle length must be at least 3");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < length; ++i)
    edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>((i + 1) % length), 1});
  std::optional<std::vector<std::uint8_t>> sides;
  if (length % 2 == 0) {
    sides.emplace(length);
    for (std::size_t i = 0; i < length; ++i) (*sides)[i] = i % 2;
  }
  return Graph(length, std::move(edges), std::move(sides));
}

Graph make_torus(std::span<const std::size_t> dims) {
  if (dims.empty()) throw InvalidArgument("torus needs at least one dimension");
  std::size_t volume = 1;
  for (auto m : dims) {
    if (m <= 2) throw InvalidArgument("torus dimensions must exceed 2");
    if (volume > (std::size_t{1} << 30) / m) throw ResourceLimit("torus too large");
    volume *= m;
  }
  std::vector<Edge> edges;
  std::vector<std::size_t> coord(dims.size(), 0);
  bool all_even = std::all_of(dims.begin(), dims.end(), [](std::size_t m) { return m % 2 == 0; });
  std::optional<std::vector<std::uint8_t>> sides;
  if (all_even) sides.emplace(volume);
  for (std::size_t index = 0; index < volume; ++index) {
    std::size_t stride = 1;
    std::size_t parity = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      const std::size_t up = coord[k] + 1 == dims[k] ? index - coord[k] * stride : index + stride;
      edges.push_back({static_cast<Vertex>(index), static_cast<Vertex>(up), 1});
      parity += coord[k];
      stride *= dims[k];
    }
    if (sides) (*sides)[index] = parity % 2;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      if (++coord[k] < dims[k]) break;
      coord[k] = 0;
    }
  }
  return Graph(volume, std::move(edges), std::move(sides));
}

Graph make_complete_bipartite(std::size_t r) {
  if (r == 0) throw InvalidArgument("K_{r,r} needs r >= 1");
  std::vector<Edge> edges;
  std::vector<std::uint8_t> sides(2 * r, 0);
  for (std::size_t i = 0; i < r; ++i) {
    sides[r + i] = 1;
    for (std::size_t j = 0; j < r; ++j)
      edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(r + j), 1});
  }
  return Graph(2 * r, std::move(edges), std::move(sides));
}

Graph disjoint_union(const Graph& a, const Graph& b) {
  std::vector<Edge> edges(a.edges().begin(), a.edges().end());
  const auto shift = static_cast<Vertex>(a.vertex_count());
  for (Edge e : b.edges()) edges.push_back({e.u + shift, e.v + shift, e.multiplicity});
  std::optional<std::vector<std::uint8_t>> sides;
  if (a.bipartition() && b.bipartition()) {
    sides = *a.bipartition();
    sides->insert(sides->end(), b.bipartition()->begin(), b.bipartition()->end());
  }
  return Graph(a.vertex_count() + b.vertex_count(), std::move(edges), std::move(sides));
}

// ---------------------------------------------------------------------------

ConnectionMatrix::ConnectionMatrix(std::size_t size)
    : size_(size), bits_(size * size, 0), row_sums_(size, 0), col_sums_(size, 0) {}

ConnectionMatrix ConnectionMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
  ConnectionMatrix out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw InvalidArgument("connection matrix must be square");
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (rows[i][j] != 0 && rows[i][j] != 1) throw InvalidArgument("connection matrix must be 0-1");
      out.set(i, j, rows[i][j] == 1);
    }
  }
  return out;
}

ConnectionMatrix ConnectionMatrix::identity(std::size_t size) {
  ConnectionMatrix out(size);
  for (std::size_t i = 0; i < size; ++i) out.set(i, i, true);
  return out;
}

ConnectionMatrix ConnectionMatrix::from_permutation(std::span<const std::size_t> image) {
  ConnectionMatrix out(image.size());
  for (std::size_t i = 0; i < image.size(); ++i) {
    if (image[i] >= image.size()) throw InvalidArgument("permutation image out of range");
    out.set(i, image[i], true);
  }
  if (!out.is_permutation()) throw InvalidArgument("not a permutation");
  return out;
}

void ConnectionMatrix::set(std::size_t row, std::size_t col, bool value) {
  auto& cell = bits_[row * size_ + col];
  if ((cell != 0) == value) return;
  cell = value ? 1 : 0;
  const std::ptrdiff_t delta = value ? 1 : -1;
  row_sums_[row] += delta;
  col_sums_[col] += delta;
}

std::size_t ConnectionMatrix::ones() const noexcept {
  return std::accumulate(row_sums_.begin(), row_sums_.end(), std::size_t{0});
}

bool ConnectionMatrix::is_permutation() const noexcept {
  if (size_ == 0) return false;
  return std::all_of(row_sums_.begin(), row_sums_.end(), [](auto s) { return s == 1; }) &&
         std::all_of(col_sums_.begin(), col_sums_.end(), [](auto s) { return s == 1; });
}

std::vector<std::size_t> ConnectionMatrix::permutation_image() const {
  if (!is_permutation()) throw InvalidArgument("connection matrix is not a permutation");
  std::vector<std::size_t> image(size_);
  for (std::size_t i = 0; i < size_; ++i)
    for (std::size_t j = 0; j < size_; ++j)
      if (at(i, j)) image[i] = j;
  return image;
}

std::vector<std::vector<int>> ConnectionMatrix::rows() const {
  std::vector<std::vector<int>> out(size_, std::vector<int>(size_, 0));
  for (std::size_t i = 0; i < size_; ++i)
    for (std::size_t j = 0; j < size_; ++j) out[i][j] = at(i, j) ? 1 : 0;
  return out;
}

std::string ConnectionMatrix::key() const {
  std::string out;
  out.reserve(bits_.size());
  for (auto b : bits_) out.push_back(b ? '1' : '0');
  return out;
}

// ---------------------------------------------------------------------------

LayeredFamily::LayeredFamily(Graph base, ConnectionMatrix connection, std::string name, AllowZero)
    : base_(std::move(base)), connection_(std::move(connection)), name_(std::move(name)) {
  if (base_.vertex_count() == 0) throw InvalidArgument("base graph must have vertices");
  if (connection_.size() != base_.vertex_count())
    throw InvalidArgument("connection matrix size must equal the base vertex count");
}

LayeredFamily::LayeredFamily(Graph base, ConnectionMatrix connection, std::string name)
    : LayeredFamily(std::move(base), std::move(connection), std::move(name), AllowZero{}) {
  if (connection_.is_zero())
    throw InvalidArgument("connection matrix is all zero; use LayeredFamily::disjoint_copies");
}

LayeredFamily LayeredFamily::disjoint_copies(Graph base, std::string name) {
  const auto width = base.vertex_count();
  return LayeredFamily(std::move(base), ConnectionMatrix(width), std::move(name), AllowZero{});
}

std::optional<std::size_t> LayeredFamily::regularity() const {
  const auto deg = base_.degrees();
  std::optional<std::size_t> common;
  for (std::size_t u = 0; u < deg.size(); ++u) {
    const auto d = deg[u] + connection_.row_sums()[u] + connection_.col_sums()[u];
    if (common && *common != d) return std::nullopt;
    common = d;
  }
  return common;
}

std::optional<WiringMode> bipartite_wiring(const Graph& base, const ConnectionMatrix& a) {
  const auto& sides = base.bipartition();
  if (!sides || a.size() != base.vertex_count()) return std::nullopt;
  bool same = true;
  bool swap = true;
  for (std::size_t u = 0; u < a.size(); ++u)
    for (std::size_t v = 0; v < a.size(); ++v) {
      if (!a.at(u, v)) continue;
      if ((*sides)[u] == (*sides)[v]) swap = false;
      else same = false;
    }
  if (same) return WiringMode::SameClass;
  if (swap) return WiringMode::SwapClass;
  return std::nullopt;
}

Graph build_layer_graph(const LayeredFamily& family, std::size_t n) {
  if (n < 2) throw InvalidArgument("layer graph needs n >= 2");
  const auto width = family.width();
  const auto& a = family.connection();
  std::vector<Edge> edges;
  for (std::size_t k = 0; k < n; ++k) {
    const auto here = static_cast<Vertex>(k * width);
    const auto next = static_cast<Vertex>(((k + 1) % n) * width);
    for (const Edge& e : family.base().edges()) edges.push_back({e.u + here, e.v + here, e.multiplicity});
    for (std::size_t u = 0; u < width; ++u)
      for (std::size_t v = 0; v < width; ++v)
        if (a.at(u, v)) edges.push_back({static_cast<Vertex>(here + u), static_cast<Vertex>(next + v), 1});
  }
  return Graph(width * n, std::move(edges)).with_detected_bipartition();
}

ConnectionMode parse_connection_mode(const std::string& name) {
  if (name == "permutation-bipartite") return ConnectionMode::PermutationBipartite;
  if (name == "even-odd-cubic") return ConnectionMode::EvenOddCubic;
  if (name == "two-per-row") return ConnectionMode::TwoPerRow;
  throw InvalidArgument("unknown connection mode: " + name);
}

std::string to_string(ConnectionMode mode) {
  switch (mode) {
    case ConnectionMode::PermutationBipartite: return "permutation-bipartite";
    case ConnectionMode::EvenOddCubic: return "even-odd-cubic";
    case ConnectionMode::TwoPerRow: return "two-per-row";
  }
  return "?";
}

std::vector<std::vector<std::size_t>> rotation_automorphisms(const Graph& base) {
  const auto n = base.vertex_count();
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> map(n);
    for (std::size_t u = 0; u < n; ++u) map[u] = (u + s) % n;
    bool ok = true;
    for (const Edge& e : base.edges()) {
      if (base.multiplicity(static_cast<Vertex>(map[e.u]), static_cast<Vertex>(map[e.v])) != e.multiplicity) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(std::move(map));
  }
  return out;
}

ConnectionMatrix canonical_connection(const ConnectionMatrix& a,
                                      const std::vector<std::vector<std::size_t>>& relabelings) {
  ConnectionMatrix best = a;
  for (const auto& map : relabelings) {
    ConnectionMatrix image(a.size());
    for (std::size_t u = 0; u < a.size(); ++u)
      for (std::size_t v = 0; v < a.size(); ++v)
        if (a.at(u, v)) image.set(map[u], map[v], true);
    if (image < best) best = std::move(image);
  }
  return best;
}

namespace {

constexpr std::size_t kMaxEnumerated = 2'000'000;

// Backtracking over 0-1 matrices with prescribed row/column sums and a
// per-row mask of allowed columns.
class ZeroOneEnumerator {
 public:
  ZeroOneEnumerator(std::size_t n, std::vector<std::uint64_t> allowed, std::vector<std::size_t> row_sums,
                    std::vector<std::size_t> col_sums, const std::function<void(const ConnectionMatrix&)>& visit)
      : n_(n), allowed_(std::move(allowed)), row_sums_(std::move(row_sums)), col_left_(std::move(col_sums)),
        visit_(visit), current_(n) {}

  void run() { fill_row(0); }

 private:
  void fill_row(std::size_t row) {
    if (row == n_) {
      if (std::all_of(col_left_.begin(), col_left_.end(), [](auto c) { return c == 0; })) {
        if (++visited_ > kMaxEnumerated) throw ResourceLimit("connection enumeration exceeds guard");
        visit_(current_);
      }
      return;
    }
    choose(row, 0, row_sums_[row]);
  }

  void choose(std::size_t row, std::size_t col, std::size_t need) {
    if (need == 0) {
      fill_row(row + 1);
      return;
    }
    for (std::size_t c = col; c < n_; ++c) {
      if (((allowed_[row] >> c) & 1U) == 0 || col_left_[c] == 0) continue;
      --col_left_[c];
      current_.set(row, c, true);
      choose(row, c + 1, need - 1);
      current_.set(row, c, false);
      ++col_left_[c];
    }
  }

  std::size_t n_;
  std::vector<std::uint64_t> allowed_;
  std::vector<std::size_t> row_sums_;
  std::vector<std::size_t> col_left_;
  const std::function<void(const ConnectionMatrix&)>& visit_;
  ConnectionMatrix current_;
  std::size_t visited_ = 0;
};

}  // namespace

std::vector<ConnectionMatrix> enumerate_connections(const Graph& base, ConnectionMode mode) {
  const auto n = base.vertex_count();
  if (n > 64) throw ResourceLimit("connection enumeration supports at most 64 base vertices");
  const auto& sides = base.bipartition();
  const bool needs_bipartition = mode != ConnectionMode::TwoPerRow;
  if (needs_bipartition && !sides)
    throw InvalidArgument(to_string(mode) + " requires a bipartite base graph");

  std::uint64_t class_mask[2] = {0, 0};
  if (sides)
    for (std::size_t u = 0; u < n; ++u) class_mask[(*sides)[u]] |= std::uint64_t{1} << u;
  const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  const auto class_size = [&](int c) { return static_cast<std::size_t>(std::popcount(class_mask[c])); };

  std::set<ConnectionMatrix> found;
  const auto relabelings = rotation_automorphisms(base);
  const std::function<void(const ConnectionMatrix&)> collect = [&](const ConnectionMatrix& a) {
    found.insert(canonical_connection(a, relabelings));
  };

  const auto run_wired = [&](std::size_t per_row) {
    if (!sides) {
      ZeroOneEnumerator(n, std::vector<std::uint64_t>(n, all), std::vector<std::size_t>(n, per_row),
                        std::vector<std::size_t>(n, per_row), collect)
          .run();
      return;
    }
    for (bool swap : {false, true}) {
      if (swap && class_size(0) != class_size(1)) continue;
      std::vector<std::uint64_t> allowed(n);
      for (std::size_t u = 0; u < n; ++u) allowed[u] = class_mask[(*sides)[u] ^ (swap ? 1 : 0)];
      ZeroOneEnumerator(n, std::move(allowed), std::vector<std::size_t>(n, per_row),
                        std::vector<std::size_t>(n, per_row), collect)
          .run();
    }
  };

  switch (mode) {
    case ConnectionMode::PermutationBipartite:
      run_wired(1);
      break;
    case ConnectionMode::TwoPerRow:
      run_wired(2);
      break;
    case ConnectionMode::EvenOddCubic: {
      if (class_size(0) != class_size(1))
        throw InvalidArgument("even-odd-cubic needs two classes of equal size");
      std::vector<std::uint64_t> allowed(n, 0);
      std::vector<std::size_t> row_sums(n, 0);
      std::vector<std::size_t> col_sums(n, 0);
      for (std::size_t u = 0; u < n; ++u) {
        if ((*sides)[u] == 0) {
          allowed[u] = class_mask[1];
          row_sums[u] = 1;
        } else {
          col_sums[u] = 1;
        }
      }
      ZeroOneEnumerator(n, std::move(allowed), std::move(row_sums), std::move(col_sums), collect).run();
      break;
    }
  }
  return {found.begin(), found.end()};
}

// ---------------------------------------------------------------------------

Graph make_bethe_sequence_element(std::size_t r, std::size_t n, const Graph& glue) {
  if (r < 2) throw InvalidArgument("Bethe element needs r >= 2");
  if (n < 1) throw InvalidArgument("Bethe element needs n >= 1");
  std::size_t boundary = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (boundary > (std::size_t{1} << 22) / (r - 1 == 0 ? 1 : r - 1)) throw ResourceLimit("Bethe element too large");
    boundary *= r - 1;
  }
  if (glue.vertex_count() != 2 * boundary)
    throw InvalidArgument("glue graph must have 2(r-1)^n vertices");
  if (!glue.bipartition() || !glue.is_regular(r - 1))
    throw InvalidArgument("glue graph must be (r-1)-regular bipartite");
  std::vector<Vertex> glue_side[2];
  for (std::size_t v = 0; v < glue.vertex_count(); ++v)
    glue_side[(*glue.bipartition())[v]].push_back(static_cast<Vertex>(v));
  if (glue_side[0].size() != boundary) throw InvalidArgument("glue graph sides must both have (r-1)^n vertices");

  // Breadth-first growth of the tree: O, then levels 1..n, then level n+1 of branch r only.
  std::vector<Edge> edges;
  std::vector<std::uint8_t> parity{0};
  std::vector<Vertex> x_boundary;
  std::vector<Vertex> last_level;
  struct Node {
    Vertex id;
    std::size_t branch;
  };
  std::vector<Node> level;
  Vertex next_id = 1;
  for (std::size_t i = 0; i < r; ++i) {
    edges.push_back({0, next_id, 1});
    parity.push_back(1);
    level.push_back({next_id++, i});
  }
  for (std::size_t depth = 1; depth <= n; ++depth) {
    std::vector<Node> next_level;
    for (const Node& node : level) {
      const bool grows = depth < n || node.branch == r - 1;
      if (!grows) {
        x_boundary.push_back(node.id);
        continue;
      }
      for (std::size_t c = 0; c + 1 < r; ++c) {
        edges.push_back({node.id, next_id, 1});
        parity.push_back(static_cast<std::uint8_t>((depth + 1) % 2));
        next_level.push_back({next_id++, node.branch});
      }
    }
    if (depth == n) {
      for (const Node& node : next_level) last_level.push_back(node.id);
    } else {
      level = std::move(next_level);
    }
  }
  std::vector<Vertex> image(glue.vertex_count());
  for (std::size_t i = 0; i < boundary; ++i) {
    image[glue_side[0][i]] = x_boundary[i];
    image[glue_side[1][i]] = last_level[i];
  }
  for (const Edge& e : glue.edges()) edges.push_back({image[e.u], image[e.v], e.multiplicity});
  return Graph(next_id, std::move(edges), std::move(parity));
}

Graph random_regular_bipartite(std::size_t half, std::size_t degree, std::uint64_t seed) {
  if (half == 0) throw InvalidArgument("random bipartite graph needs at least one vertex per side");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> perm(half);
  std::vector<Edge> edges;
  for (std::size_t d = 0; d < degree; ++d) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < half; ++i)
      edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(half + perm[i]), 1});
  }
  std::vector<std::uint8_t> sides(2 * half, 0);
  std::fill(sides.begin() + static_cast<std::ptrdiff_t>(half), sides.end(), 1);
  return Graph(2 * half, std::move(edges), std::move(sides));
}

void for_each_regular_bipartite(std::size_t n, std::size_t r,
                                const std::function<void(const BiadjacencyMatrix&)>& visit, ClassGuard guard) {
  if (n == 0) throw InvalidArgument("class G(2n,r) needs n >= 1");
  if (n > guard.max_n || r > guard.max_r) throw ResourceLimit("regular bipartite class exceeds enumeration guard");
  BiadjacencyMatrix m(n, std::vector<std::uint32_t>(n, 0));
  std::vector<std::size_t> col_left(n, r);
  std::function<void(std::size_t, std::size_t, std::size_t)> fill = [&](std::size_t i, std::size_t j,
                                                                      std::size_t row_left) {
    if (i == n) {
      visit(m);
      return;
    }
    if (j + 1 == n) {
      if (row_left > col_left[j]) return;
      m[i][j] = static_cast<std::uint32_t>(row_left);
      col_left[j] -= row_left;
      fill(i + 1, 0, r);
      col_left[j] += row_left;
      m[i][j] = 0;
      return;
    }
    for (std::size_t x = 0; x <= std::min(row_left, col_left[j]); ++x) {
      m[i][j] = static_cast<std::uint32_t>(x);
      col_left[j] -= x;
      fill(i, j + 1, row_left - x);
      col_left[j] += x;
    }
    m[i][j] = 0;
  };
  fill(0, 0, r);
}

Graph graph_from_biadjacency(const BiadjacencyMatrix& matrix) {
  const auto n = matrix.size();
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i].size() != n) throw InvalidArgument("biadjacency matrix must be square");
    for (std::size_t j = 0; j < n; ++j)
      if (matrix[i][j] > 0) edges.push_back({static_cast<Vertex>(i), static_cast<Vertex>(n + j), matrix[i][j]});
  }
  std::vector<std::uint8_t> sides(2 * n, 0);
  std::fill(sides.begin() + static_cast<std::ptrdiff_t>(n), sides.end(), 1);
  return Graph(2 * n, std::move(edges), std::move(sides));
}

std::vector<Graph> enumerate_regular_bipartite_class(std::size_t n, std::size_t r, ClassGuard guard) {
  std::vector<Graph> out;
  for_each_regular_bipartite(n, r, [&](const BiadjacencyMatrix& m) { out.push_back(graph_from_biadjacency(m)); },
                             guard);
  return out;
}

// ---------------------------------------------------------------------------

void write_graph(std::ostream& out, const Graph& g) {
  out << "vertices " << g.vertex_count() << '\n';
  if (g.bipartition()) {
    out << "bipartition ";
    for (auto s : *g.bipartition()) out << static_cast<char>('0' + s);
    out << '\n';
  }
  for (const Edge& e : g.edges()) out << "edge " << e.u << ' ' << e.v << ' ' << e.multiplicity << '\n';
}

Graph read_graph(std::istream& in) {
  std::string line;
  std::optional<std::size_t> vertices;
  std::optional<std::vector<std::uint8_t>> sides;
  std::vector<Edge> edges;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string tag;
    if (!(fields >> tag) || tag.front() == '#') continue;
    const auto fail = [&](const std::string& why) {
      throw InvalidArgument("graph line " + std::to_string(line_no) + ": " + why);
    };
    if (tag == "vertices") {
      std::size_t count = 0;
      if (vertices || !(fields >> count) || count == 0) fail("bad vertices header");
      vertices = count;
    } else if (tag == "bipartition") {
      std::string bits;
      if (!vertices || !(fields >> bits) || bits.size() != *vertices) fail("bad bipartition");
      sides.emplace();
      for (char c : bits) {
        if (c != '0' && c != '1') fail("bipartition must be a 0/1 string");
        sides->push_back(static_cast<std::uint8_t>(c - '0'));
      }
    } else if (tag == "edge") {
      long long u = -1, v = -1, mult = -1;
      if (!vertices || !(fields >> u >> v >> mult) || u < 0 || v < 0 || mult <= 0) fail("bad edge");
      edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), static_cast<std::uint32_t>(mult)});
    } else {
      fail("unknown record '" + tag + "'");
    }
  }
  if (!vertices) throw InvalidArgument("graph is missing the vertices header");
  return Graph(*vertices, std::move(edges), std::move(sides));
}

}  // namespace mdt
