#include "mdt/sandwich.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "mdt/bounds.hpp"

namespace mdt {

SandwichReport sandwich_report(const EntropyCurve& curve, int r, double slack) {
  SandwichReport report;
  report.r = r;
  report.min_lower_margin = report.min_upper_margin = report.min_conjectural_margin =
      std::numeric_limits<double>::infinity();
  for (const auto& s : curve.samples) {
    SandwichRow row;
    row.t = s.t;
    row.p = s.density;
    row.h = s.entropy;
    row.lower = low_best(r, s.density);
    row.upper = std::min(upp1(r, s.density), upp2(r, s.density));
    row.upper_conjectural = hK_at_density(r, s.density);
    row.lower_margin = row.h - row.lower;
    row.upper_margin = row.upper - row.h;
    row.conjectural_margin = row.upper_conjectural - row.h;
    report.min_lower_margin = std::min(report.min_lower_margin, row.lower_margin);
    report.min_upper_margin = std::min(report.min_upper_margin, row.upper_margin);
    report.min_conjectural_margin = std::min(report.min_conjectural_margin, row.conjectural_margin);
    const std::string where = curve.name + " t=" + std::to_string(s.t) + " p=" + std::to_string(s.density);
    if (row.lower_margin < -slack) report.findings.push_back({"lower-bound", where, row.lower_margin});
    if (row.upper_margin < -slack) report.findings.push_back({"upper-bound", where, row.upper_margin});
    if (row.conjectural_margin < -slack)
      report.findings.push_back({"upper-conjectural", where, row.conjectural_margin});
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace mdt
