#pragma once

#include <string>
#include <vector>

namespace mdt {

// One reported deviation: what kind, where, and by how much (negative
// margins are violations).
struct Finding {
  std::string kind;
  std::string location;
  double margin = 0.0;
};

}  // namespace mdt
