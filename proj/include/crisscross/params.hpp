#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace crisscross {

using Vector2 = Eigen::Vector2d;
using Vector3 = Eigen::Vector3d;

// Limiting parameters of the crisscross network. Index 0 of each vector is
// buffer/class 1.
struct NetworkLimits {
  Vector2 lambda{1.0, 1.0};
  Vector3 mu{2.0, 2.0, 1.0};
  Vector3 h{1.0, 1.0, 1.0};
  double gamma = 1.0;
  Vector3 b = Vector3::Zero();
};

// Thrown when a configuration fails validation. Each entry of `violations`
// names one failed condition and the amount by which it failed.
class InvalidConfig : public std::invalid_argument {
 public:
  explicit InvalidConfig(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

inline constexpr double kHeavyTrafficTol = 1e-12;

// Returns every violated positivity, heavy-traffic or Case IIA condition.
// Empty means the limits are usable.
std::vector<std::string> check_limits(const NetworkLimits& limits);

// Returns `limits` unchanged when valid, throws InvalidConfig otherwise.
const NetworkLimits& validate_limits(const NetworkLimits& limits);

// How the drift offsets b^r of the r-th network approach b.
enum class DriftPolicy {
  constant,  // b^r = b for every r
  harmonic,  // b^r = b * r / (r + 1)
};

struct RNetwork {
  NetworkLimits limits;
  double r = 1.0;
  Vector2 lambda_r;
  Vector3 mu_r;
  long L_r = 0;
  long C_r = 0;
  double ell0 = 0.0;
  double c = 0.0;
  // Set for the ell0 = 0, constant-C variant; no optimality result covers it.
  bool conjectured = false;

  // Threshold (mu1^r / mu2^r)(C^r - L^r + 2) on Q1 used by the threshold policy.
  double buffer1_cutoff() const { return mu_r[0] / mu_r[1] * static_cast<double>(C_r - L_r + 2); }
};

// Builds the r-th network. Throws std::domain_error on bad (r, ell0, c) and
// InvalidConfig if the resulting thresholds fall below the usability floor.
RNetwork make_r_network(const NetworkLimits& limits, double r, double ell0, double c,
                        DriftPolicy drift = DriftPolicy::constant);

// Variant with L^r = 0 and a fixed upper threshold C, labelled conjectured.
RNetwork make_conjectured_network(const NetworkLimits& limits, double r, long C,
                                  DriftPolicy drift = DriftPolicy::constant);

// b^r recovered from the rates of `net` against the limits.
Vector3 realized_drift(const NetworkLimits& limits, const RNetwork& net);

// Cramer rate function of a Poisson process with rate `lambda` at rate `x`.
double poisson_rate_function(double lambda, double x);

// Exponential decay rate of P(|N(t)/t - rho| >= eps) for a Poisson process of rate rho.
double varsigma2(double rho, double eps);

struct ThresholdConstants {
  double theta3 = 0.0;
  double rho2 = 0.0;
  double c = 0.0;
  double K = 0.0;
  double d = 0.0;
  double theta = 0.0;
  double gamma4 = 0.0;
  double ell_bar = 0.0;
  double kappa = 0.0;
};

ThresholdConstants compute_threshold_constants(const NetworkLimits& limits);

}  // namespace crisscross
