#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fairdiv {

// A realized item-utility matrix: n agents, m items, one value in [0, 1]
// per agent-item pair.
struct Instance {
  int n = 0;
  int m = 0;
  std::vector<double> utilities;  // row-major: utilities[i * m + item]
  std::string profile_name;       // provenance (may be empty)
  std::uint64_t seed = 0;         // provenance

  double util(int agent, int item) const {
    return utilities[static_cast<std::size_t>(agent) * m + item];
  }
  double& util(int agent, int item) {
    return utilities[static_cast<std::size_t>(agent) * m + item];
  }

  // Throws std::invalid_argument when dimensions or value ranges are off.
  void validate() const;

  // One comment line with the dimensions and provenance, then one CSV row
  // of item values per agent.
  void to_csv(std::ostream& out) const;
  static Instance from_csv(std::istream& in);
};

}  // namespace fairdiv
