#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fairdiv/distribution.hpp"

namespace fairdiv {

// An ordered list of agent utility distributions. Agent i draws its value
// for every item independently from agents_[i].
struct AgentProfile {
  std::string name;
  std::vector<UtilityDistribution> agents;

  int size() const { return static_cast<int>(agents.size()); }

  // Profile-wide density bounds (lowest p, highest q over agents), present
  // only when every agent has interval support and finite bounds.
  std::optional<DensityBounds> density_bounds() const;

  bool interval_support() const;

  nlohmann::json to_json() const;  // array of distribution objects
  static AgentProfile from_json(const nlohmann::json& j, std::string name);
};

std::vector<std::string> builtin_profile_names();

// Throws std::invalid_argument for unknown names.
AgentProfile builtin_profile(const std::string& name);

// Resolves a builtin name first, then falls back to reading a JSON file
// containing an array of distribution objects.
AgentProfile load_profile(const std::string& name_or_path);

}  // namespace fairdiv
