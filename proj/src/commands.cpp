#include "mdt/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "mdt/bignum.hpp"
#include "mdt/bounds.hpp"
#include "mdt/errors.hpp"
#include "mdt/matching.hpp"
#include "mdt/parallel.hpp"
#include "mdt/sandwich.hpp"
#include "mdt/thermo.hpp"
#include "mdt/transfer.hpp"

namespace mdt {

using nlohmann::json;

json CommandResult::report() const {
  json j;
  j["command"] = command;
  j["config_digest"] = config_digest;
  json list = json::array();
  for (const auto& f : findings) list.push_back({{"kind", f.kind}, {"location", f.location}, {"margin", f.margin}});
  j["findings"] = list;
  j["pass"] = pass;
  for (const auto& [key, value] : details.items()) j[key] = value;
  return j;
}

namespace {

constexpr double kDifferenceStep = 1e-4;
constexpr double kDifferenceTolerance = 1e-6;
constexpr std::size_t kProbeLayers = 4;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CommandResult start(const std::string& name, const RunConfig& config) {
  config.validate();
  CommandResult res;
  res.command = name;
  res.config_digest = config.digest();
  std::filesystem::create_directories(config.out);
  return res;
}

std::string output_path(const RunConfig& config, const std::string& file) {
  return (std::filesystem::path(config.out) / file).string();
}

std::ofstream open_output(CommandResult& res, const RunConfig& config, const std::string& file) {
  const std::string path = output_path(config, file);
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  res.outputs.push_back(path);
  return out;
}

void finish(CommandResult& res, const RunConfig& config) {
  const std::string path = output_path(config, res.command + "_report.json");
  res.outputs.push_back(path);
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << res.report().dump(2) << "\n";
}

std::string histogram_text(const Graph& g) {
  std::map<std::size_t, std::size_t> hist;
  for (auto d : g.degrees()) ++hist[d];
  std::string text;
  for (const auto& [degree, count] : hist)
    text += (text.empty() ? "" : ", ") + std::string("degree ") + std::to_string(degree) + ": " +
            std::to_string(count);
  return text;
}

// r for an r-regular bipartite family, checked on G_4.
int require_regular_bipartite(const LayeredFamily& family) {
  const Graph g = build_layer_graph(family, kProbeLayers);
  const auto degrees = g.degrees();
  const bool regular = std::all_of(degrees.begin(), degrees.end(), [&](auto d) { return d == degrees.front(); });
  if (!regular || !g.two_coloring())
    throw InvalidArgument(std::string("family ") + family.name() + " is not " + (regular ? "bipartite" : "regular") +
                          " on G_4 (" + histogram_text(g) + ")");
  return static_cast<int>(degrees.front());
}

std::string connection_label(const ConnectionMatrix& a) {
  if (a.is_permutation()) {
    std::string s = "perm:";
    const auto img = a.permutation_image();
    for (std::size_t i = 0; i < img.size(); ++i) s += (i ? "," : "") + std::to_string(img[i]);
    return s;
  }
  return "rows:" + a.key();
}

std::vector<ConnectionMatrix> connections_for(const RunConfig& config, const Graph& base) {
  if (config.family.mode) return enumerate_connections(base, parse_connection_mode(*config.family.mode));
  return {build_connection(config.family, base)};
}

LayeredFamily family_with(const RunConfig& config, const Graph& base, const ConnectionMatrix& a) {
  const std::string name = family_label(config.family) + "[" + connection_label(a) + "]";
  if (a.is_zero()) return LayeredFamily::disjoint_copies(base, name);
  return LayeredFamily(base, a, name);
}

void write_margins(std::ostream& out, const std::string& label, const SandwichReport& rep, bool header) {
  if (header) out << "connection,t,p,h,lower,upper,hK,lower_margin,upper_margin,conjectural_margin\n";
  for (const auto& row : rep.rows)
    out << label << ',' << fmt(row.t) << ',' << fmt(row.p) << ',' << fmt(row.h) << ',' << fmt(row.lower) << ','
        << fmt(row.upper) << ',' << fmt(row.upper_conjectural) << ',' << fmt(row.lower_margin) << ','
        << fmt(row.upper_margin) << ',' << fmt(row.conjectural_margin) << '\n';
}

Rational exact_point(const RunConfig& config) { return config.exact ? parse_rational(*config.exact) : Rational(1); }

}  // namespace

CommandResult cmd_sweep(const RunConfig& config, std::ostream& log) {
  CommandResult res = start("sweep", config);
  const LayeredFamily family = build_family(config.family, config.seed);
  const ThermoModel model(family, config.width_guard, config.tolerance);
  const auto grid = parse_grid(config.grid);
  log << "sweep " << family.name() << ": width " << model.width() << ", " << grid.size() << " samples\n";
  const EntropyCurve curve = sweep(model, grid, family.regularity());
  {
    auto out = open_output(res, config, family_label(config.family) + ".csv");
    curve.write_csv(out);
  }
  if (curve.partial) {
    res.findings.push_back({"numeric-failure", curve.error, 0.0});
    res.pass = false;
    res.exit_code = kExitNumeric;
    res.details["partial"] = true;
    log << "numeric failure: " << curve.error << "\n";
    finish(res, config);
    return res;
  }

  const CurveInvariants inv = curve.check_invariants();
  // Density against the central difference of the pressure.
  std::vector<double> diff(grid.size());
  parallel_for(grid.size(), [&](std::size_t k) {
    const double t = grid[k];
    const double dp = (model.sample(t + kDifferenceStep).pressure - model.sample(t - kDifferenceStep).pressure) /
                      (2.0 * kDifferenceStep);
    diff[k] = std::abs(curve.samples[k].density - dp);
  });
  const double worst_diff = *std::max_element(diff.begin(), diff.end());
  const bool derivative_ok = worst_diff <= kDifferenceTolerance;

  json checks = {{"density_monotone", inv.density_monotone},   {"density_in_range", inv.density_in_range},
                 {"entropy_nonnegative", inv.entropy_nonnegative}, {"pressure_monotone", inv.pressure_monotone},
                 {"pressure_convex", inv.pressure_convex},     {"entropy_concave", inv.entropy_concave},
                 {"legendre_bound", inv.legendre_bound},       {"density_matches_difference", derivative_ok}};
  for (const auto& f : inv.failures) res.findings.push_back({"invariant", f, 0.0});
  if (!derivative_ok)
    res.findings.push_back({"invariant", "density differs from pressure difference", kDifferenceTolerance - worst_diff});

  if (config.exact) {
    const Rational x = exact_point(config);
    if (model.matrix().dim() <= 16) {
      const double exact_rho = largest_real_root(exact_characteristic_polynomial(model.matrix(), x));
      const double t = log_rational(x);
      const double rho = transfer_perron(model.matrix(), t, false, config.tolerance).rho;
      const double rel = std::abs(rho - exact_rho) / exact_rho;
      checks["exact_root"] = rel <= 1e-10;
      res.details["exact_root"] = {{"x", to_string(x)}, {"rho", rho}, {"exact", exact_rho}};
      if (rel > 1e-10) res.findings.push_back({"exact-root", "x=" + to_string(x), -rel});
    } else {
      log << "exact root check skipped: dimension " << model.matrix().dim() << " exceeds 16\n";
    }
  }
  const EndpointEstimate ends = curve.endpoints();
  res.details["checks"] = checks;
  res.details["endpoints"] = {{"h0", ends.h0}, {"h1", ends.h1}, {"extrapolated", ends.extrapolated}};
  res.details["pressure_at_zero"] = model.sample(0.0).pressure;
  res.pass = res.findings.empty();
  res.exit_code = res.pass ? kExitOk : kExitFinding;
  finish(res, config);
  return res;
}

CommandResult cmd_check(const RunConfig& config, std::ostream& log) {
  CommandResult res = start("check", config);
  const Graph base = build_base(config.family, config.seed);
  const auto grid = parse_grid(config.grid);
  const auto connections = connections_for(config, base);
  std::vector<LayeredFamily> families;
  int r = 0;
  for (const auto& a : connections) {
    families.push_back(family_with(config, base, a));
    const int degree = require_regular_bipartite(families.back());
    if (r != 0 && degree != r) throw InvalidArgument("enumerated connections give different degrees");
    r = degree;
  }
  if (config.r != 0 && config.r != r)
    throw InvalidArgument("config r=" + std::to_string(config.r) + " but the family is " + std::to_string(r) +
                          "-regular");
  if (r < 2) throw InvalidArgument("sandwich bounds need degree at least 2");
  log << "check " << family_label(config.family) << ": " << families.size() << " connection(s), r=" << r << "\n";

  auto out = open_output(res, config, "margins_" + family_label(config.family) + ".csv");
  std::vector<EntropyCurve> curves;
  json per_a = json::array();
  for (std::size_t k = 0; k < families.size(); ++k) {
    const ThermoModel model(families[k], config.width_guard, config.tolerance);
    EntropyCurve curve = sweep(model, grid, static_cast<std::size_t>(r));
    if (curve.partial) {
      res.findings.push_back({"numeric-failure", families[k].name() + ": " + curve.error, 0.0});
      res.exit_code = kExitNumeric;
    }
    const SandwichReport rep = sandwich_report(curve, r, config.slack);
    write_margins(out, connection_label(connections[k]), rep, k == 0);
    res.findings.insert(res.findings.end(), rep.findings.begin(), rep.findings.end());
    per_a.push_back({{"connection", connection_label(connections[k])},
                     {"min_lower_margin", rep.min_lower_margin},
                     {"min_upper_margin", rep.min_upper_margin},
                     {"min_conjectural_margin", rep.min_conjectural_margin}});
    log << "  " << connection_label(connections[k]) << ": min lower margin " << rep.min_lower_margin
        << ", min upper margin " << rep.min_upper_margin << "\n";
    curves.push_back(std::move(curve));
  }

  // With several permutation wirings, the identity wiring should give the highest curve.
  const auto identity = std::find(connections.begin(), connections.end(), ConnectionMatrix::identity(base.vertex_count()));
  if (connections.size() > 1 && identity != connections.end()) {
    const std::size_t id = static_cast<std::size_t>(identity - connections.begin());
    const ThermoModel top(families[id], config.width_guard, config.tolerance);
    std::vector<double> seeds = grid;
    CurveBracket bracket(top, seeds);
    for (std::size_t k = 0; k < curves.size(); ++k) {
      if (k == id) continue;
      for (const auto& s : curves[k].samples) {
        if (s.density <= 0.0 || s.density >= 1.0) continue;
        if (bracket.compare(s.density, s.entropy, config.slack) == CurveBracket::Verdict::Above) {
          const auto b = bracket.at(s.density);
          res.findings.push_back({"above-identity",
                                  connection_label(connections[k]) + " p=" + std::to_string(s.density),
                                  b.upper - s.entropy});
        }
      }
    }
  }
  res.details["r"] = r;
  res.details["connections"] = per_a;
  res.pass = res.findings.empty();
  if (res.exit_code == kExitOk) res.exit_code = res.pass ? kExitOk : kExitFinding;
  finish(res, config);
  return res;
}

CommandResult cmd_oracle(const RunConfig& config, std::ostream& log) {
  CommandResult res = start("oracle", config);
  const LayeredFamily family = build_family(config.family, config.seed);
  const TransferMatrix tm(family, config.width_guard);
  const Rational x = exact_point(config);
  const Rational x2 = x * x;
  json rows = json::array();
  for (const auto n : config.n_values) {
    const Rational trace = exact_trace_power(tm, x, n);
    const Rational psi = matching_polynomial(build_layer_graph(family, n)).evaluate(x2);
    const bool equal = to_string(trace) == to_string(psi);
    log << "n=" << n << " x=" << to_string(x) << ": trace " << to_string(trace) << ", psi " << to_string(psi)
        << (equal ? "" : "  MISMATCH") << "\n";
    rows.push_back({{"n", n}, {"trace", to_string(trace)}, {"psi", to_string(psi)}, {"equal", equal}});
    if (!equal)
      res.findings.push_back({"oracle-mismatch", "n=" + std::to_string(n) + " x=" + to_string(x),
                              static_cast<double>(trace - psi)});
  }
  res.details["family"] = family.name();
  res.details["x"] = to_string(x);
  res.details["rows"] = rows;
  res.pass = res.findings.empty();
  res.exit_code = res.pass ? kExitOk : kExitFinding;
  finish(res, config);
  return res;
}

CommandResult cmd_maxpres(const RunConfig& config, std::ostream& log) {
  CommandResult res = start("maxpres", config);
  if (config.family.mode && parse_connection_mode(*config.family.mode) != ConnectionMode::PermutationBipartite)
    throw InvalidArgument("maxpres enumerates permutation connections only");
  const Graph base = build_base(config.family, config.seed);
  const auto connections = connections_for(config, base);
  for (const auto& a : connections)
    if (!a.is_permutation()) throw InvalidArgument("maxpres needs a permutation connection");

  auto table = open_output(res, config, "maxpres.csv");
  table << "connection,t,pressure_connected,pressure_layers,margin,holds\n";
  for (const auto& a : connections) {
    const auto rows = max_pressure_check(base, a, config.t_list, 1e-10, config.tolerance);
    for (const auto& row : rows) {
      table << connection_label(a) << ',' << fmt(row.t) << ',' << fmt(row.pressure_connected) << ','
            << fmt(row.pressure_layers) << ',' << fmt(row.margin) << ',' << (row.holds ? 1 : 0) << '\n';
      if (!row.holds)
        res.findings.push_back({"pressure-dominance", connection_label(a) + " t=" + fmt(row.t), row.margin});
    }
  }
  const bool pressure_ok = res.findings.empty();

  // Entropy comparison against the identity wiring; reported, never failing.
  const auto grid = parse_grid(config.grid);
  const LayeredFamily top(base, ConnectionMatrix::identity(base.vertex_count()), family_label(config.family) + "[I]");
  const ThermoModel top_model(top, config.width_guard, config.tolerance);
  CurveBracket bracket(top_model, grid);
  auto entropy = open_output(res, config, "entropy_dominance.csv");
  entropy << "connection,t,p,h,h_identity_lower,h_identity_upper,verdict\n";
  std::size_t above = 0;
  for (const auto& a : connections) {
    if (a == ConnectionMatrix::identity(base.vertex_count())) continue;
    const ThermoModel model(family_with(config, base, a), config.width_guard, config.tolerance);
    const EntropyCurve curve = sweep(model, grid);
    for (const auto& s : curve.samples) {
      if (s.density <= 0.0 || s.density >= 1.0) continue;
      const auto verdict = bracket.compare(s.density, s.entropy, config.slack);
      const auto b = bracket.at(s.density, 1e-9);
      const char* word = verdict == CurveBracket::Verdict::Above ? "above"
                         : verdict == CurveBracket::Verdict::Tied ? "tied"
                                                                  : "below";
      entropy << connection_label(a) << ',' << fmt(s.t) << ',' << fmt(s.density) << ',' << fmt(s.entropy) << ','
              << fmt(b.lower) << ',' << fmt(b.upper) << ',' << word << '\n';
      if (verdict == CurveBracket::Verdict::Above) {
        ++above;
        res.findings.push_back({"entropy-dominance", connection_label(a) + " p=" + fmt(s.density),
                                b.upper - s.entropy});
      }
    }
  }
  log << "maxpres: " << connections.size() << " connection(s), pressure " << (pressure_ok ? "holds" : "VIOLATED")
      << ", " << above << " entropy sample(s) above the identity curve\n";
  res.details["entropy_above_identity"] = above;
  res.pass = pressure_ok;
  res.exit_code = res.pass ? kExitOk : kExitFinding;
  finish(res, config);
  return res;
}

CommandResult cmd_bounds(const RunConfig& config, std::ostream& log) {
  CommandResult res = start("bounds", config);
  const int r = config.r;
  if (r < 2) throw InvalidArgument("bounds needs r >= 2");
  if (config.bounds.empty()) throw InvalidArgument("bounds needs at least one curve name");
  for (const auto& name : config.bounds)
    if (!is_bound_name(name)) throw InvalidArgument("unknown bound curve " + name);
  const auto grid = uniform_density_grid(config.p_points);
  std::vector<BoundCurve> curves(config.bounds.size());
  parallel_for(curves.size(), [&](std::size_t k) { curves[k] = make_bound_curve(config.bounds[k], r, grid); });

  const std::string stem = "bounds_r" + std::to_string(r);
  {
    auto csv = open_output(res, config, stem + ".csv");
    csv << 'p';
    for (const auto& name : config.bounds) csv << ',' << name;
    csv << '\n';
    for (std::size_t i = 0; i < grid.size(); ++i) {
      csv << fmt(grid[i]);
      for (const auto& c : curves) csv << ',' << fmt(c.samples[i].second);
      csv << '\n';
    }
  }
  {
    auto gp = open_output(res, config, stem + ".gp");
    gp << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set xlabel 'p'\n"
       << "set title 'r = " << r << "'\n"
       << "set terminal pngcairo size 900,600\n"
       << "set output '" << stem << ".png'\n"
       << "plot ";
    for (std::size_t k = 0; k < config.bounds.size(); ++k)
      gp << (k ? ", \\\n     " : "") << "'" << stem << ".csv' using 1:" << k + 2 << " with lines";
    gp << '\n';
  }
  log << "bounds r=" << r << ": " << curves.size() << " curve(s) on " << grid.size() << " points\n";
  finish(res, config);
  return res;
}

CommandResult run_command(const std::string& name, const RunConfig& config, std::ostream& log) {
  CommandResult failed;
  failed.command = name;
  failed.pass = false;
  try {
    failed.config_digest = config.digest();
    if (name == "sweep") return cmd_sweep(config, log);
    if (name == "check") return cmd_check(config, log);
    if (name == "oracle") return cmd_oracle(config, log);
    if (name == "maxpres") return cmd_maxpres(config, log);
    if (name == "bounds") return cmd_bounds(config, log);
    throw InvalidArgument("unknown command " + name);
  } catch (const InvalidArgument& e) {
    log << "error: " << e.what() << "\n";
    failed.exit_code = kExitUsage;
    failed.findings.push_back({"usage", e.what(), 0.0});
  } catch (const ResourceLimit& e) {
    log << "error: " << e.what() << "\n";
    failed.exit_code = kExitUsage;
    failed.findings.push_back({"resource-limit", e.what(), 0.0});
  } catch (const NumericFailure& e) {
    log << "numeric failure: " << e.what() << " (residual " << e.residual() << ")\n";
    failed.exit_code = kExitNumeric;
    failed.findings.push_back({"numeric-failure", e.what(), -e.residual()});
  } catch (const RangeError& e) {
    log << "numeric failure: " << e.what() << "\n";
    failed.exit_code = kExitNumeric;
    failed.findings.push_back({"numeric-failure", e.what(), 0.0});
  }
  return failed;
}

}  // namespace mdt
