#include "fairdiv/profile.hpp"

#include <fstream>
#include <limits>
#include <stdexcept>

namespace fairdiv {

std::optional<DensityBounds> AgentProfile::density_bounds() const {
  if (agents.empty()) return std::nullopt;
  DensityBounds out{std::numeric_limits<double>::infinity(), 0.0};
  for (const auto& d : agents) {
    const auto b = d.density_bounds();
    if (!b) return std::nullopt;
    out.lower = std::min(out.lower, b->lower);
    out.upper = std::max(out.upper, b->upper);
  }
  return out;
}

bool AgentProfile::interval_support() const {
  for (const auto& d : agents)
    if (!d.interval_support()) return false;
  return true;
}

nlohmann::json AgentProfile::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& d : agents) arr.push_back(d.to_json());
  return arr;
}

AgentProfile AgentProfile::from_json(const nlohmann::json& j,
                                     std::string name) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument(
        "profile: expected a nonempty JSON array of distributions");
  AgentProfile p;
  p.name = std::move(name);
  for (const auto& e : j) p.agents.push_back(UtilityDistribution::from_json(e));
  return p;
}

namespace {

AgentProfile make(std::string name, std::vector<UtilityDistribution> agents) {
  AgentProfile p;
  p.name = std::move(name);
  p.agents = std::move(agents);
  return p;
}

}  // namespace

std::vector<std::string> builtin_profile_names() {
  return {"peak10",
          "iid-peak10",
          "beta5",
          "identical-uniform-3",
          "percentile-counterexample",
          "gap-counterexample",
          "normalize-counterexample",
          "rr-po-counterexample"};
}

AgentProfile builtin_profile(const std::string& name) {
  using D = UtilityDistribution;
  if (name == "peak10") {
    // Ten agents whose peaks sweep across the unit interval.
    std::vector<D> agents;
    for (int i = 1; i <= 10; ++i) agents.push_back(D::peak(i / 11.0));
    return make(name, std::move(agents));
  }
  if (name == "iid-peak10") {
    // Ten identical copies of a single mid-range peak.
    std::vector<D> agents(10, D::peak(5.0 / 11.0));
    return make(name, std::move(agents));
  }
  if (name == "beta5") {
    return make(name, {D::beta(0.5, 0.5), D::beta(1.0, 3.0), D::beta(2.0, 5.0),
                       D::beta(2.0, 2.0), D::beta(5.0, 1.0)});
  }
  if (name == "identical-uniform-3") {
    return make(name, {D::uniform(0.0, 1.0), D::uniform(0.0, 1.0),
                       D::uniform(0.0, 1.0)});
  }
  if (name == "percentile-counterexample") {
    // Two agents with half their mass on a short low interval and half on
    // the rest; the split point differs, which defeats percentile matching.
    return make(name,
                {D::piecewise_uniform({{0.0, 0.25, 0.5}, {0.25, 1.0, 0.5}}),
                 D::piecewise_uniform({{0.0, 0.75, 0.5}, {0.75, 1.0, 0.5}})});
  }
  if (name == "gap-counterexample") {
    // Agent B's support has a hole exactly where agent A's mass lives, so
    // conditioning on who wins reveals nothing about A's value.
    return make(name,
                {D::uniform(0.25, 0.75),
                 D::piecewise_uniform({{0.0, 0.25, 0.5}, {0.75, 1.0, 0.5}})});
  }
  if (name == "normalize-counterexample") {
    // One wide-range agent among many narrow ones; normalizing by the
    // realized utility sum hands the wide agent far too many items.
    std::vector<D> agents;
    agents.push_back(D::uniform(0.0, 1.0));
    for (int i = 1; i < 15; ++i)
      agents.push_back(D::uniform(1.0 / 3.0, 2.0 / 3.0));
    return make(name, std::move(agents));
  }
  if (name == "rr-po-counterexample") {
    return make(name, {D::uniform(0.6, 1.0), D::uniform(0.0, 1.0)});
  }
  throw std::invalid_argument("unknown builtin profile: " + name);
}

AgentProfile load_profile(const std::string& name_or_path) {
  for (const auto& b : builtin_profile_names())
    if (b == name_or_path) return builtin_profile(name_or_path);
  std::ifstream in(name_or_path);
  if (!in)
    throw std::invalid_argument("profile not found (neither a builtin nor a "
                                "readable file): " +
                                name_or_path);
  nlohmann::json j;
  in >> j;
  std::string stem = name_or_path;
  if (auto slash = stem.find_last_of('/'); slash != std::string::npos)
    stem = stem.substr(slash + 1);
  if (auto dot = stem.find_last_of('.'); dot != std::string::npos)
    stem = stem.substr(0, dot);
  return AgentProfile::from_json(j, stem);
}

}  // namespace fairdiv
