#include "crisscross/estimate.hpp"

#include "crisscross/parallel.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace crisscross {

CostEstimate summarize(std::span<const double> values, double horizon, double truncation_bound) {
  if (values.empty()) throw std::invalid_argument("no replications to summarize");
  CostEstimate est;
  est.n_paths = values.size();
  est.horizon = horizon;
  est.truncation_bound = truncation_bound;
  const double n = static_cast<double>(values.size());
  est.mean = pairwise_sum(values) / n;
  if (values.size() >= 2) {
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double d = values[i] - est.mean;
      sq[i] = d * d;
    }
    est.std_error = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
  }
  return est;
}

double combined_error(const CostEstimate& a, const CostEstimate& b) {
  const double sa = a.std_error.value_or(0.0);
  const double sb = b.std_error.value_or(0.0);
  return std::sqrt(sa * sa + sb * sb);
}

}  // namespace crisscross
