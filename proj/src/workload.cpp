#include "crisscross/workload.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace crisscross {

namespace {

void require_nonnegative(double w1, double w2) {
  if (!(w1 >= 0.0) || !(w2 >= 0.0)) throw std::domain_error("workload must be nonnegative");
}

void validate_path(const Path& x) {
  if (x.times.size() != x.values.size()) throw std::invalid_argument("path times/values size mismatch");
  if (x.times.empty()) throw std::domain_error("path is empty");
  if (x.times.front() != 0.0) throw std::domain_error("path must start at time 0");
  if (x.values.front() != 0.0) throw std::domain_error("Skorohod map requires x(0) = 0");
  for (std::size_t k = 1; k < x.times.size(); ++k) {
    if (!(x.times[k] > x.times[k - 1])) throw std::domain_error("path times must be strictly increasing");
  }
}

}  // namespace

LpSolution effective_cost(const NetworkLimits& limits, double w1, double w2) {
  require_nonnegative(w1, w2);
  const auto& mu = limits.mu;
  LpSolution s;
  if (mu[2] * w2 >= mu[1] * w1) {
    s.region = LpRegion::buffer3_heavy;
    s.z = Vector3(0.0, mu[1] * w1, mu[2] * w2 - mu[1] * w1);
  } else {
    s.region = LpRegion::buffer1_heavy;
    s.z = Vector3(mu[0] / mu[1] * (mu[1] * w1 - mu[2] * w2), mu[2] * w2, 0.0);
  }
  s.value = effective_cost_value(mu, limits.h, w1, w2);
  return s;
}

LpSolution lp_oracle(const NetworkLimits& limits, double w1, double w2) {
  require_nonnegative(w1, w2);
  const auto& mu = limits.mu;
  constexpr double tol = 1e-12;
  const double scale = std::max({1.0, std::abs(mu[0] * w1), std::abs(mu[1] * w1), std::abs(mu[2] * w2)});

  // Each basis picks two of the three columns; the remaining variable is zero.
  std::array<Vector3, 3> vertices{
      Vector3(mu[0] * (w1 - mu[2] * w2 / mu[1]), mu[2] * w2, 0.0),  // basis {z1, z2}
      Vector3(mu[0] * w1, 0.0, mu[2] * w2),                         // basis {z1, z3}
      Vector3(0.0, mu[1] * w1, mu[2] * w2 - mu[1] * w1),            // basis {z2, z3}
  };

  LpSolution best;
  best.value = std::numeric_limits<double>::infinity();
  for (const auto& v : vertices) {
    if (v.minCoeff() < -tol * scale) continue;
    const Vector3 z = v.cwiseMax(0.0);
    const double cost = limits.h.dot(z);
    if (cost < best.value) {
      best.value = cost;
      best.z = z;
    }
  }
  if (!std::isfinite(best.value)) throw std::logic_error("LP has no feasible vertex");
  best.region = best.z[0] > 0.0 ? LpRegion::buffer1_heavy : LpRegion::buffer3_heavy;
  return best;
}

Path skorohod_reflect(const Path& x) {
  validate_path(x);
  Path out{x.times, std::vector<double>(x.size())};
  double running_min = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    running_min = std::min(running_min, x.values[k]);
    out.values[k] = x.values[k] - running_min;
  }
  return out;
}

Path skorohod_regulator(const Path& x) {
  validate_path(x);
  Path out{x.times, std::vector<double>(x.size())};
  double running_min = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    running_min = std::min(running_min, x.values[k]);
    out.values[k] = 0.0 - running_min;
  }
  return out;
}

}  // namespace crisscross
