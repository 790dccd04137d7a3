#pragma once

#include <vector>

#include "mdt/report.hpp"
#include "mdt/thermo.hpp"

namespace mdt {

struct SandwichRow {
  double t = 0.0;
  double p = 0.0;
  double h = 0.0;
  double lower = 0.0;               // max(low1, low2)
  double upper = 0.0;               // min(upp1, upp2)
  double upper_conjectural = 0.0;   // h_K(r) at p
  double lower_margin = 0.0;        // h - lower
  double upper_margin = 0.0;        // upper - h
  double conjectural_margin = 0.0;  // upper_conjectural - h
};

struct SandwichReport {
  int r = 0;
  std::vector<SandwichRow> rows;
  std::vector<Finding> findings;
  double min_lower_margin = 0.0;
  double min_upper_margin = 0.0;
  double min_conjectural_margin = 0.0;

  bool pass() const noexcept { return findings.empty(); }
};

// Lower and upper margins of an r-regular bipartite family curve at every
// sample; margins below -slack become findings.
SandwichReport sandwich_report(const EntropyCurve& curve, int r, double slack = 1e-9);

}  // namespace mdt
