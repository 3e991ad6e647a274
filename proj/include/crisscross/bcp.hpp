#pragma once

#include "crisscross/estimate.hpp"
#include "crisscross/params.hpp"
#include "crisscross/rng.hpp"
#include "crisscross/sim.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>

namespace crisscross {

// Limit netput Brownian motion: three-dimensional, started at the origin.
struct LimitBm {
  Vector3 drift;
  Eigen::Matrix3d cov;
  Eigen::Matrix3d chol;  // lower triangular, chol * chol^T = cov
};

LimitBm make_limit_bm(const NetworkLimits& limits);

// How the running infimum of a projected workload path is taken.
enum class ReflectionScheme {
  grid,    // minimum over grid points only
  bridge,  // adds an exact Brownian-bridge minimum sampled inside each step
};

struct RbmPath {
  double dt = 0.0;
  std::size_t n = 0;    // step count; rows are t_k = k * dt, k = 0..n
  Matrix3Col x_tilde;   // free netput path
  Matrix2Col w_star;    // reflected workload
  Matrix2Col v_star;    // regulators
};

// Source of standard normals and uniforms on (0, 1).
class GaussianSource {
 public:
  virtual ~GaussianSource() = default;
  virtual double normal() = 0;
  virtual double uniform() = 0;
};

class SeededGaussianSource final : public GaussianSource {
 public:
  explicit SeededGaussianSource(std::uint64_t seed)
      : normals_(make_engine(seed, 0, Stream::gaussian)), uniforms_(make_engine(seed, 0, Stream::uniform)) {}
  double normal() override { return normal_(normals_); }
  double uniform() override;

 private:
  Engine normals_;
  Engine uniforms_;
  std::normal_distribution<double> normal_;
};

RbmPath simulate_rbm(const NetworkLimits& limits, double dt, double horizon, GaussianSource& source,
                     ReflectionScheme scheme = ReflectionScheme::bridge);
RbmPath simulate_rbm(const NetworkLimits& limits, double dt, double horizon, std::uint64_t seed,
                     ReflectionScheme scheme = ReflectionScheme::bridge);

// Queue lengths that realize the effective cost of the reflected workload at every step.
Matrix3Col optimal_queue_path(const RbmPath& path, const NetworkLimits& limits);

struct AdmissibilityReport {
  bool ok = true;
  std::string message;
  double max_negative_queue = 0.0;  // most negative queue entry seen (0 when none)
  double max_idle_mismatch = 0.0;   // |Y1 + Y2 - V1| and |Y3 - V2|
};

// Rebuilds the control Y* from the free path and regulators, and checks it is
// admissible and reproduces optimal_queue_path.
AdmissibilityReport audit_admissibility(const RbmPath& path, const NetworkLimits& limits, double tol = 1e-9);

// Largest W*(t_k) at which a regulator increments on step k -> k+1 under the
// grid scheme; zero up to rounding when the discrete complementarity holds.
double regulator_complementarity_gap(const RbmPath& path);

struct BcpOptions {
  double dt = 1e-3;
  double horizon = 0.0;  // 0 selects 15 / gamma
  std::size_t n_paths = 100000;
  ReflectionScheme scheme = ReflectionScheme::bridge;
};

// Discounted effective cost and the two discounted workload marginals from the same paths.
struct BcpEstimates {
  CostEstimate j_star;
  CostEstimate w1;
  CostEstimate w2;
};

BcpEstimates estimate_bcp(const NetworkLimits& limits, const BcpOptions& opts, std::uint64_t seed);

CostEstimate estimate_j_star(const NetworkLimits& limits, double dt, double horizon, std::size_t n_paths,
                             std::uint64_t seed);

// Upper bound on the discounted tail beyond `horizon` of a*W1 + b*W2 using
// E W_i(t) <= sigma_i sqrt(2t/pi) + |drift_i| t.
double workload_tail_bound(const NetworkLimits& limits, double horizon, double a, double b);

}  // namespace crisscross
