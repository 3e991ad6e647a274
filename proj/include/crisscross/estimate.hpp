#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace crisscross {

// Monte Carlo estimate of a discounted-cost functional.
struct CostEstimate {
  double mean = 0.0;
  std::optional<double> std_error;  // absent for a single replication
  std::size_t n_paths = 0;
  double horizon = 0.0;
  double truncation_bound = 0.0;
  double dt = 0.0;  // 0 for event-driven estimates
};

// Mean and sample-sd/sqrt(n) of per-replication values.
CostEstimate summarize(std::span<const double> values, double horizon, double truncation_bound = 0.0);

// sqrt(a^2 + b^2) over the present standard errors.
double combined_error(const CostEstimate& a, const CostEstimate& b);

}  // namespace crisscross
