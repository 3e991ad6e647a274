#include "crisscross/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace crisscross {

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

template <class T>
std::string describe(const char* what, T value) {
  std::ostringstream os;
  os.precision(12);
  os << what << " (got " << value << ")";
  return os.str();
}

Vector3 drift_at(const Vector3& b, double r, DriftPolicy drift) {
  switch (drift) {
    case DriftPolicy::constant:
      return b;
    case DriftPolicy::harmonic:
      return b * (r / (r + 1.0));
  }
  return b;
}

RNetwork rates_for(const NetworkLimits& limits, double r, DriftPolicy drift) {
  if (!(r >= 1.0)) throw std::domain_error(describe("r must be >= 1", r));
  const Vector3 br = drift_at(limits.b, r, drift);
  RNetwork net;
  net.limits = limits;
  net.r = r;
  net.mu_r = limits.mu;
  // Perturb arrivals so that r(lambda_i^r/mu_i^r - lambda_i/mu_i) = b_i^r.
  for (int i = 0; i < 2; ++i) {
    net.lambda_r[i] = limits.mu[i] * (limits.lambda[i] / limits.mu[i] + br[i] / r);
  }
  // Buffer 3 has no arrival stream of its own, so b_3^r is realized through mu_3^r.
  net.mu_r[2] = net.lambda_r[1] / (1.0 + br[2] / r);
  std::vector<std::string> bad;
  if (!(net.lambda_r.minCoeff() > 0.0)) bad.push_back("drift makes an arrival rate non-positive");
  if (!(net.mu_r[2] > 0.0) || !std::isfinite(net.mu_r[2])) bad.push_back("drift makes mu3^r non-positive");
  if (!bad.empty()) throw InvalidConfig(bad);
  return net;
}

void check_usability(const RNetwork& net) {
  std::vector<std::string> bad;
  if (net.C_r - net.L_r - 1 < 1) {
    std::ostringstream os;
    os << "usability floor: C^r - L^r - 1 = " << (net.C_r - net.L_r - 1) << " < 1 (L^r=" << net.L_r
       << ", C^r=" << net.C_r << ", r=" << net.r << ")";
    bad.push_back(os.str());
  }
  if (net.buffer1_cutoff() < 1.0) {
    bad.push_back(describe("usability floor: (mu1^r/mu2^r)(C^r - L^r + 2) < 1", net.buffer1_cutoff()));
  }
  if (!bad.empty()) throw InvalidConfig(bad);
}

}  // namespace

InvalidConfig::InvalidConfig(std::vector<std::string> violations)
    : std::invalid_argument("invalid configuration: " + join(violations)),
      violations_(std::move(violations)) {}

std::vector<std::string> check_limits(const NetworkLimits& limits) {
  std::vector<std::string> bad;
  const auto& lam = limits.lambda;
  const auto& mu = limits.mu;
  const auto& h = limits.h;
  for (int i = 0; i < 2; ++i) {
    if (!(lam[i] > 0.0)) bad.push_back(describe(i == 0 ? "lambda1 must be > 0" : "lambda2 must be > 0", lam[i]));
  }
  static const char* mu_names[] = {"mu1 must be > 0", "mu2 must be > 0", "mu3 must be > 0"};
  static const char* h_names[] = {"h1 must be > 0", "h2 must be > 0", "h3 must be > 0"};
  for (int j = 0; j < 3; ++j) {
    if (!(mu[j] > 0.0)) bad.push_back(describe(mu_names[j], mu[j]));
    if (!(h[j] > 0.0)) bad.push_back(describe(h_names[j], h[j]));
  }
  if (!(limits.gamma > 0.0)) bad.push_back(describe("gamma must be > 0", limits.gamma));
  if (!limits.b.allFinite()) bad.push_back("b must be finite");
  if (!bad.empty()) return bad;

  // Heavy traffic.
  const double load1 = lam[0] / mu[0] + lam[1] / mu[1];
  if (std::abs(load1 - 1.0) > kHeavyTrafficTol) {
    bad.push_back(describe("heavy traffic: lambda1/mu1 + lambda2/mu2 != 1, deviation", load1 - 1.0));
  }
  const double load2 = lam[1] / mu[2];
  if (std::abs(load2 - 1.0) > kHeavyTrafficTol) {
    bad.push_back(describe("heavy traffic: lambda2/mu3 != 1, deviation", load2 - 1.0));
  }

  // Case IIA.
  const double a = h[0] * mu[0] - h[1] * mu[1] + h[2] * mu[1];
  if (!(a > 0.0)) bad.push_back(describe("Case IIA: h1*mu1 - h2*mu2 + h3*mu2 must be > 0", a));
  const double b23 = h[1] * mu[1] - h[2] * mu[1];
  if (b23 < 0.0) bad.push_back(describe("Case IIA: h2*mu2 - h3*mu2 must be >= 0", b23));
  const double b21 = h[1] * mu[1] - h[0] * mu[0];
  if (b21 < 0.0) bad.push_back(describe("Case IIA: h2*mu2 - h1*mu1 must be >= 0", b21));
  return bad;
}

const NetworkLimits& validate_limits(const NetworkLimits& limits) {
  auto bad = check_limits(limits);
  if (!bad.empty()) throw InvalidConfig(std::move(bad));
  return limits;
}

RNetwork make_r_network(const NetworkLimits& limits, double r, double ell0, double c, DriftPolicy drift) {
  if (!(ell0 > 1.0)) throw std::domain_error(describe("ell0 must be > 1", ell0));
  if (!(c > 1.0)) throw std::domain_error(describe("c must be > 1", c));
  RNetwork net = rates_for(limits, r, drift);
  net.ell0 = ell0;
  net.c = c;
  const double log_r = std::log(r);
  net.L_r = static_cast<long>(std::floor(ell0 * log_r));
  net.C_r = static_cast<long>(std::floor(c * ell0 * log_r));
  check_usability(net);
  return net;
}

RNetwork make_conjectured_network(const NetworkLimits& limits, double r, long C, DriftPolicy drift) {
  RNetwork net = rates_for(limits, r, drift);
  net.ell0 = 0.0;
  net.c = 0.0;
  net.L_r = 0;
  net.C_r = C;
  net.conjectured = true;
  check_usability(net);
  return net;
}

Vector3 realized_drift(const NetworkLimits& limits, const RNetwork& net) {
  Vector3 br;
  for (int i = 0; i < 2; ++i) {
    br[i] = net.r * (net.lambda_r[i] / net.mu_r[i] - limits.lambda[i] / limits.mu[i]);
  }
  br[2] = net.r * (net.lambda_r[1] / net.mu_r[2] - 1.0);
  return br;
}

double poisson_rate_function(double lambda, double x) {
  if (!(lambda > 0.0) || !(x >= 0.0)) {
    throw std::domain_error("poisson_rate_function requires lambda > 0 and x >= 0");
  }
  if (x == 0.0) return lambda;  // 0 log 0 = 0
  return x * std::log(x / lambda) - x + lambda;
}

double varsigma2(double rho, double eps) {
  if (!(eps > 0.0)) throw std::domain_error("varsigma2 requires eps > 0");
  if (!(rho - eps > 0.0)) throw std::domain_error("varsigma2 requires eps < rate");
  return std::min(poisson_rate_function(rho, rho + eps), poisson_rate_function(rho, rho - eps));
}

ThresholdConstants compute_threshold_constants(const NetworkLimits& limits) {
  validate_limits(limits);
  const auto& lam = limits.lambda;
  const auto& mu = limits.mu;
  if (!(mu[1] > mu[2])) throw std::domain_error(describe("threshold constants require mu2 > mu3", mu[1] - mu[2]));

  ThresholdConstants k;
  const double eta1 = varsigma2(lam[0], 0.5);
  const double eta2 = varsigma2(mu[0], 0.5);
  const double eta3 = varsigma2(mu[2], std::min(mu[2] / 2.0, 1.0));
  const double eta4 = varsigma2(mu[1], std::min(mu[1] / 2.0, 1.0));
  k.theta3 = mu[0] / (mu[1] * lam[0]) * std::min(eta1, eta2);
  k.rho2 = std::min(eta3, eta4);
  k.c = 1.0 + 4.0 / k.theta3 + 4.0 * (mu[1] - mu[2]) / varsigma2(lam[1], lam[1] / 2.0);
  k.K = 2.0 * std::max({4.0, 16.0 * lam[1], 32.0 * mu[1], 16.0 * mu[2]});
  k.d = k.c * k.K / ((mu[1] - mu[2]) / 2.0);
  k.theta = 0.5 * std::min(0.25, 1.0 / (32.0 * k.d));
  k.gamma4 = (2.0 * k.d / k.K) * k.theta * k.rho2;
  k.ell_bar = std::max(4.0 / k.gamma4, 4.0 / (k.theta3 * (k.c - 1.0))) + 1.0;
  const double kappa_floor = std::max({2.0 * mu[0] / mu[1], 4.0, k.c / (k.c - 1.0),
                                       2.0 * mu[1] * k.c / (mu[0] * (k.c - 1.0)), k.theta3});
  k.kappa = 1.01 * kappa_floor;
  return k;
}

}  // namespace crisscross
