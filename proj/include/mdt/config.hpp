#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mdt/graphs.hpp"

namespace mdt {

// Base graph kind plus parameters and the connection matrix (literal,
// shorthand, or an enumeration mode).
struct FamilySpec {
  // vertex | cycle | torus | complete-bipartite | random-regular | file
  std::string base = "cycle";
  // cycle: {length}; torus: dims; complete-bipartite: {r}; random-regular: {half, degree}
  std::vector<std::size_t> dims{4};
  std::string path;
  // identity | zero | shift:k | even-odd | perm:i,j,... | rows:0110;1001
  std::string connection = "identity";
  std::optional<std::vector<std::vector<int>>> matrix;
  std::optional<std::string> mode;
  std::string name;
};

struct RunConfig {
  FamilySpec family;
  std::string grid = "default";
  double tolerance = 1e-13;
  double slack = 1e-9;
  std::string out = "out";
  std::optional<std::string> exact;
  std::uint64_t seed = 1;
  std::size_t width_guard = 16;
  std::vector<std::size_t> n_values{2, 3, 4};
  std::vector<double> t_list{-1.0, 0.0, 1.0};
  int r = 0;
  std::vector<std::string> bounds{"ghl", "low1", "gh"};
  std::size_t p_points = 201;
  bool enumerate = false;

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const std::string& path);
  // FNV-1a 64-bit of the canonical JSON, as 16 hex digits.
  std::string digest() const;
  // Throws InvalidArgument on out-of-range values.
  void validate() const;
};

Graph build_base(const FamilySpec& spec, std::uint64_t seed);
ConnectionMatrix build_connection(const FamilySpec& spec, const Graph& base);
LayeredFamily build_family(const FamilySpec& spec, std::uint64_t seed);
std::string family_label(const FamilySpec& spec);

// "default" or "a:b:n".
std::vector<double> parse_grid(const std::string& text);

}  // namespace mdt
