#include "mdt/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mdt/bignum.hpp"
#include "mdt/errors.hpp"
#include "mdt/thermo.hpp"

namespace mdt {

using nlohmann::json;

json RunConfig::to_json() const {
  json f;
  f["base"] = family.base;
  f["dims"] = family.dims;
  f["path"] = family.path;
  if (family.matrix)
    f["connection"] = *family.matrix;
  else
    f["connection"] = family.connection;
  f["mode"] = family.mode ? json(*family.mode) : json(nullptr);
  f["name"] = family.name;
  json j;
  j["family"] = f;
  j["grid"] = grid;
  j["tolerance"] = tolerance;
  j["slack"] = slack;
  j["out"] = out;
  j["exact"] = exact ? json(*exact) : json(nullptr);
  j["seed"] = seed;
  j["width_guard"] = width_guard;
  j["n"] = n_values;
  j["t_list"] = t_list;
  j["r"] = r;
  j["bounds"] = bounds;
  j["p_points"] = p_points;
  j["enumerate"] = enumerate;
  return j;
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  try {
    if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      static const char* known[] = {"family", "grid",  "tolerance", "slack", "out",    "exact",    "seed", "width_guard",
                                    "n",      "t_list", "r",        "bounds", "p_points", "enumerate"};
      bool ok = false;
      for (const char* k : known) ok = ok || key == k;
      if (!ok) throw InvalidArgument("unknown config key: " + key);
    }
    if (j.contains("family")) {
      const json& f = j["family"];
      if (f.contains("base")) c.family.base = f["base"].get<std::string>();
      if (f.contains("dims")) c.family.dims = f["dims"].get<std::vector<std::size_t>>();
      if (f.contains("path")) c.family.path = f["path"].get<std::string>();
      if (f.contains("connection")) {
        if (f["connection"].is_array())
          c.family.matrix = f["connection"].get<std::vector<std::vector<int>>>();
        else
          c.family.connection = f["connection"].get<std::string>();
      }
      if (f.contains("mode") && !f["mode"].is_null()) c.family.mode = f["mode"].get<std::string>();
      if (f.contains("name")) c.family.name = f["name"].get<std::string>();
    }
    if (j.contains("grid")) c.grid = j["grid"].get<std::string>();
    if (j.contains("tolerance")) c.tolerance = j["tolerance"].get<double>();
    if (j.contains("slack")) c.slack = j["slack"].get<double>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("exact") && !j["exact"].is_null()) c.exact = j["exact"].get<std::string>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("width_guard")) c.width_guard = j["width_guard"].get<std::size_t>();
    if (j.contains("n")) c.n_values = j["n"].get<std::vector<std::size_t>>();
    if (j.contains("t_list")) c.t_list = j["t_list"].get<std::vector<double>>();
    if (j.contains("r")) c.r = j["r"].get<int>();
    if (j.contains("bounds")) c.bounds = j["bounds"].get<std::vector<std::string>>();
    if (j.contains("p_points")) c.p_points = j["p_points"].get<std::size_t>();
    if (j.contains("enumerate")) c.enumerate = j["enumerate"].get<bool>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad config: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidArgument("config " + path + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

std::string RunConfig::digest() const {
  const std::string text = to_json().dump();
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

void RunConfig::validate() const {
  if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (!(slack > 0.0)) throw InvalidArgument("slack must be positive");
  if (width_guard == 0 || width_guard > 20) throw InvalidArgument("width guard must lie in 1..20");
  if (p_points < 2) throw InvalidArgument("p_points must be at least 2");
  if (r < 0) throw InvalidArgument("r must be nonnegative");
  for (auto n : n_values)
    if (n < 2) throw InvalidArgument("layer counts must be at least 2");
  parse_grid(grid);
  if (exact) {
    const Rational x = parse_rational(*exact);
    if (x <= 0) throw InvalidArgument("exact e^t must be positive");
  }
  if (family.mode) parse_connection_mode(*family.mode);
}

std::vector<double> parse_grid(const std::string& text) {
  if (text == "default") return default_grid();
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw InvalidArgument("grid must be \"default\" or \"a:b:n\", got " + text);
  try {
    std::size_t used = 0;
    const double a = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument(parts[0]);
    const double b = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument(parts[1]);
    const long n = std::stol(parts[2], &used);
    if (used != parts[2].size() || n < 2) throw std::invalid_argument(parts[2]);
    return linear_grid(a, b, static_cast<std::size_t>(n));
  } catch (const InvalidArgument&) {
    throw;
  } catch (const std::exception&) {
    throw InvalidArgument("bad grid spec " + text);
  }
}

Graph build_base(const FamilySpec& spec, std::uint64_t seed) {
  const auto need = [&spec](std::size_t count) {
    if (spec.dims.size() != count)
      throw InvalidArgument("base " + spec.base + " needs " + std::to_string(count) + " size parameter(s)");
  };
  if (spec.base == "vertex") return make_empty(1);
  if (spec.base == "cycle") {
    need(1);
    return make_cycle(spec.dims[0]);
  }
  if (spec.base == "torus") return make_torus(spec.dims);
  if (spec.base == "complete-bipartite") {
    need(1);
    return make_complete_bipartite(spec.dims[0]);
  }
  if (spec.base == "random-regular") {
    need(2);
    return random_regular_bipartite(spec.dims[0], spec.dims[1], seed);
  }
  if (spec.base == "file") {
    std::ifstream in(spec.path);
    if (!in) throw InvalidArgument("cannot open graph file " + spec.path);
    return read_graph(in);
  }
  throw InvalidArgument("unknown base kind " + spec.base);
}

namespace {

std::vector<std::size_t> parse_index_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    std::size_t used = 0;
    long v = -1;
    try {
      v = std::stol(item, &used);
    } catch (const std::exception&) {
    }
    if (v < 0 || used != item.size()) throw InvalidArgument("bad index list " + text);
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

}  // namespace

ConnectionMatrix build_connection(const FamilySpec& spec, const Graph& base) {
  const std::size_t n = base.vertex_count();
  if (spec.matrix) return ConnectionMatrix::from_rows(*spec.matrix);
  const std::string& c = spec.connection;
  if (c == "identity") return ConnectionMatrix::identity(n);
  if (c == "zero") return ConnectionMatrix(n);
  if (c == "even-odd") {
    if (n % 2 != 0) throw InvalidArgument("even-odd connection needs an even width");
    ConnectionMatrix a(n);
    for (std::size_t u = 0; u < n; u += 2) a.set(u, u + 1, true);
    return a;
  }
  if (c.rfind("shift:", 0) == 0) {
    const auto k = parse_index_list(c.substr(6));
    if (k.size() != 1) throw InvalidArgument("shift needs one offset");
    std::vector<std::size_t> image(n);
    for (std::size_t u = 0; u < n; ++u) image[u] = (u + k[0]) % n;
    return ConnectionMatrix::from_permutation(image);
  }
  if (c.rfind("perm:", 0) == 0) return ConnectionMatrix::from_permutation(parse_index_list(c.substr(5)));
  if (c.rfind("rows:", 0) == 0) {
    std::vector<std::vector<int>> rows;
    std::stringstream ss(c.substr(5));
    for (std::string row; std::getline(ss, row, ';');) {
      std::vector<int> r;
      for (char ch : row) {
        if (ch != '0' && ch != '1') throw InvalidArgument("connection rows must be 0/1 strings");
        r.push_back(ch - '0');
      }
      rows.push_back(std::move(r));
    }
    return ConnectionMatrix::from_rows(rows);
  }
  throw InvalidArgument("unknown connection " + c);
}

std::string family_label(const FamilySpec& spec) {
  if (!spec.name.empty()) return spec.name;
  std::string label = spec.base;
  for (auto d : spec.dims) label += "-" + std::to_string(d);
  std::string conn = spec.matrix ? "matrix" : spec.connection;
  for (char& ch : conn)
    if (ch == ':' || ch == ',' || ch == ';') ch = '_';
  return label + "_" + conn;
}

LayeredFamily build_family(const FamilySpec& spec, std::uint64_t seed) {
  Graph base = build_base(spec, seed);
  if (base.vertex_count() == 0) throw InvalidArgument("base graph has no vertices");
  ConnectionMatrix a = build_connection(spec, base);
  if (a.size() != base.vertex_count()) throw InvalidArgument("connection matrix size differs from base width");
  if (a.is_zero()) return LayeredFamily::disjoint_copies(std::move(base), family_label(spec));
  return LayeredFamily(std::move(base), std::move(a), family_label(spec));
}

}  // namespace mdt
