#include "fairdiv/instance.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fairdiv {

void Instance::validate() const {
  if (n <= 0 || m < 0)
    throw std::invalid_argument("instance: need at least one agent");
  if (utilities.size() != static_cast<std::size_t>(n) * m)
    throw std::invalid_argument("instance: utility matrix size mismatch");
  for (double u : utilities)
    if (!std::isfinite(u) || u < 0.0 || u > 1.0)
      throw std::invalid_argument("instance: utilities must lie in [0, 1]");
}

void Instance::to_csv(std::ostream& out) const {
  out << "# agents=" << n << " items=" << m << " profile=" << profile_name
      << " seed=" << seed << "\n";
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < m; ++a) {
      if (a) out << ',';
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", util(i, a));
      out << buf;
    }
    out << "\n";
  }
}

Instance Instance::from_csv(std::istream& in) {
  Instance inst;
  std::string line;
  if (!std::getline(in, line) || line.empty() || line[0] != '#')
    throw std::invalid_argument("instance csv: missing header line");
  {
    std::istringstream hs(line.substr(1));
    std::string tok;
    while (hs >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      const std::string k = tok.substr(0, eq), v = tok.substr(eq + 1);
      if (k == "agents") inst.n = std::stoi(v);
      else if (k == "items") inst.m = std::stoi(v);
      else if (k == "profile") inst.profile_name = v;
      else if (k == "seed") inst.seed = std::stoull(v);
    }
  }
  if (inst.n <= 0 || inst.m < 0)
    throw std::invalid_argument("instance csv: bad dimensions in header");
  inst.utilities.reserve(static_cast<std::size_t>(inst.n) * inst.m);
  for (int i = 0; i < inst.n; ++i) {
    if (!std::getline(in, line))
      throw std::invalid_argument("instance csv: missing agent row");
    std::istringstream ls(line);
    std::string cell;
    int count = 0;
    while (std::getline(ls, cell, ',')) {
      inst.utilities.push_back(std::stod(cell));
      ++count;
    }
    if (count != inst.m)
      throw std::invalid_argument("instance csv: wrong number of columns");
  }
  inst.validate();
  return inst;
}

}  // namespace fairdiv
