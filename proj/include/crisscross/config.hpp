#pragma once

#include "crisscross/params.hpp"
#include "crisscross/policy.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace crisscross {

// Run configuration read from a JSON object with keys lambda, mu, h, gamma
// (required) and b, ell0, c, r_list, seed, replications, horizon, policy
// (optional). Any other key is an error.
struct Config {
  NetworkLimits limits;
  double ell0 = 1.2;
  double c = 3.0;
  std::vector<double> r_list{5.0, 10.0, 20.0, 40.0};
  std::uint64_t seed = 1;
  std::size_t replications = 200;
  double horizon = 15.0;  // scaled time
  std::vector<PolicyKind> policies{PolicyKind::threshold};
};

// Throws InvalidConfig listing every problem found.
Config parse_config(const std::string& json_text);
Config load_config(const std::string& path);

}  // namespace crisscross
