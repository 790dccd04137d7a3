#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "mdt/commands.hpp"
#include "mdt/config.hpp"
#include "mdt/errors.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::string> out, grid, exact, base, connection, mode, name, path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> width_guard, p_points;
  std::optional<double> tol, slack;
  std::optional<int> r;
  std::optional<std::vector<std::size_t>> dims, n_values;
  std::optional<std::vector<double>> t_list;
  std::optional<std::vector<std::string>> bounds;
  bool quiet = false;
};

void add_flags(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config_path, "JSON run configuration");
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--grid", o.grid, "t grid: \"default\" or \"a:b:n\"");
  sub->add_option("--exact", o.exact, "rational e^t as NUM/DEN");
  sub->add_option("--seed", o.seed, "random seed");
  sub->add_option("--width-guard", o.width_guard, "largest allowed base width");
  sub->add_option("--tol", o.tol, "eigensolver tolerance");
  sub->add_option("--slack", o.slack, "margin slack for findings");
  sub->add_option("--base", o.base, "vertex | cycle | torus | complete-bipartite | random-regular | file");
  sub->add_option("--size", o.dims, "base size parameters")->delimiter(',');
  sub->add_option("--graph-file", o.path, "graph file for --base file");
  sub->add_option("--connection", o.connection, "identity | zero | shift:k | even-odd | perm:i,j,.. | rows:01;10");
  sub->add_option("--mode", o.mode, "enumerate connections: permutation-bipartite | even-odd-cubic | two-per-row");
  sub->add_option("--name", o.name, "family label used in output names");
  sub->add_option("--r", o.r, "degree for bound curves");
  sub->add_option("--n", o.n_values, "layer counts for the oracle")->delimiter(',');
  sub->add_option("--t-list", o.t_list, "t values for maxpres")->delimiter(',');
  sub->add_option("--names", o.bounds, "bound curve names")->delimiter(',');
  sub->add_option("--p-points", o.p_points, "density grid size for bounds");
  sub->add_flag("--quiet", o.quiet, "suppress progress output");
}

mdt::RunConfig resolve(const Overrides& o) {
  mdt::RunConfig c = o.config_path.empty() ? mdt::RunConfig{} : mdt::RunConfig::load(o.config_path);
  if (o.out) c.out = *o.out;
  if (o.grid) c.grid = *o.grid;
  if (o.exact) c.exact = *o.exact;
  if (o.seed) c.seed = *o.seed;
  if (o.width_guard) c.width_guard = *o.width_guard;
  if (o.tol) c.tolerance = *o.tol;
  if (o.slack) c.slack = *o.slack;
  if (o.base) c.family.base = *o.base;
  if (o.dims) c.family.dims = *o.dims;
  if (o.path) c.family.path = *o.path;
  if (o.connection) {
    c.family.connection = *o.connection;
    c.family.matrix.reset();
  }
  if (o.mode) c.family.mode = *o.mode;
  if (o.name) c.family.name = *o.name;
  if (o.r) c.r = *o.r;
  if (o.n_values) c.n_values = *o.n_values;
  if (o.t_list) c.t_list = *o.t_list;
  if (o.bounds) c.bounds = *o.bounds;
  if (o.p_points) c.p_points = *o.p_points;
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monomer-dimer entropy of layered graph families by the transfer matrix method"};
  app.require_subcommand(1);
  Overrides o;
  const std::pair<const char*, const char*> commands[] = {
      {"sweep", "pressure, density and entropy over a t grid"},
      {"check", "compare family entropy curves against the bound curves"},
      {"oracle", "exact transfer trace against the matching polynomial"},
      {"maxpres", "identity versus every permutation connection"},
      {"bounds", "tabulate bound curves for degree r"}};
  for (const auto& [name, about] : commands) add_flags(app.add_subcommand(name, about), o);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? mdt::kExitOk : mdt::kExitUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  mdt::RunConfig config;
  try {
    config = resolve(o);
  } catch (const mdt::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mdt::kExitUsage;
  }
  std::ostream null_stream(nullptr);
  std::ostream& log = o.quiet ? null_stream : std::cerr;
  const mdt::CommandResult result = mdt::run_command(command, config, log);
  std::cout << result.report().dump(2) << "\n";
  return result.exit_code;
}
