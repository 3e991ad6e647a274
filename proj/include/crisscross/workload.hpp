#pragma once

#include "crisscross/params.hpp"

#include <Eigen/Dense>

#include <vector>

namespace crisscross {

using WorkloadMatrix = Eigen::Matrix<double, 2, 3>;

// Time-per-job coefficients mapping queue lengths to server workloads:
// rows (1/mu1, 1/mu2, 0) and (0, 1/mu3, 1/mu3).
template <class Derived>
WorkloadMatrix workload_matrix(const Eigen::MatrixBase<Derived>& mu) {
  WorkloadMatrix m;
  m << 1.0 / mu[0], 1.0 / mu[1], 0.0,
       0.0, 1.0 / mu[2], 1.0 / mu[2];
  return m;
}

enum class LpRegion {
  buffer3_heavy,  // mu3*w2 >= mu2*w1: buffer 1 is kept empty
  buffer1_heavy,  // mu3*w2 <  mu2*w1: buffer 3 is kept empty
};

struct LpSolution {
  Vector3 z = Vector3::Zero();
  double value = 0.0;
  LpRegion region = LpRegion::buffer3_heavy;
};

// Closed-form minimizer and value of the effective-cost LP
//   min h.z  s.t.  z1/mu1 + z2/mu2 = w1,  (z2 + z3)/mu3 = w2,  z >= 0.
// Valid under Case IIA; throws std::domain_error for negative workload.
LpSolution effective_cost(const NetworkLimits& limits, double w1, double w2);

// Value-only form of effective_cost for hot loops; no argument checks.
inline double effective_cost_value(const Vector3& mu, const Vector3& h, double w1, double w2) {
  if (mu[2] * w2 >= mu[1] * w1) {
    return (h[1] * mu[1] - h[2] * mu[1]) * w1 + h[2] * mu[2] * w2;
  }
  return h[0] * mu[0] * w1 + mu[2] / mu[1] * (h[1] * mu[1] - h[0] * mu[0]) * w2;
}

// Independent check of effective_cost: enumerates the basic feasible
// solutions of the LP and keeps the cheapest. Does not assume Case IIA.
LpSolution lp_oracle(const NetworkLimits& limits, double w1, double w2);

// Piecewise-constant, right-continuous sample path on a strictly increasing grid.
struct Path {
  std::vector<double> times;
  std::vector<double> values;

  std::size_t size() const { return times.size(); }
};

// Gamma(x)(t) = x(t) - inf_{s<=t} x(s). Requires times[0] == 0 and x(0) == 0.
Path skorohod_reflect(const Path& x);

// t -> -inf_{s<=t} x(s), the minimal nondecreasing pushing process.
Path skorohod_regulator(const Path& x);

}  // namespace crisscross
