#pragma once

#include "crisscross/bcp.hpp"
#include "crisscross/estimate.hpp"
#include "crisscross/params.hpp"
#include "crisscross/policy.hpp"
#include "crisscross/sim.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace crisscross {

struct PathCost {
  double cost = 0.0;  // integral up to the last epoch
  double tail = 0.0;  // e^{-gamma T} h.Q(T) / gamma, reported, not added
};

// Exact discounted integral of h.Q over the piecewise-constant scaled path.
PathCost discounted_cost(const ScaledTrajectory& traj, const Vector3& h, double gamma);

struct DiscountedCostRun {
  double r = 0.0;
  PolicyKind policy = PolicyKind::threshold;
  CostEstimate estimate;
  long L_r = 0;
  long C_r = 0;
  double ell0 = 0.0;
  double c = 0.0;
  double mean_tail = 0.0;
};

// Replication seeds are derive_seed(seed, rep), shared across policies so
// that comparisons use common random numbers.
DiscountedCostRun estimate_cost(const RNetwork& net, PolicyKind policy, double horizon_scaled, std::size_t n_reps,
                                std::uint64_t seed);

struct SweepConfig {
  std::vector<double> r_list;
  std::vector<PolicyKind> policies{PolicyKind::threshold};
  double ell0 = 1.2;
  double c = 3.0;
  double horizon_scaled = 15.0;
  std::size_t n_reps = 200;
  BcpOptions bcp;
  bool common_random_numbers = true;
};

struct SweepRow {
  DiscountedCostRun run;
  double gap = 0.0;  // (Jhat - J*) / J*
};

struct SweepTable {
  CostEstimate j_star;
  std::vector<SweepRow> rows;
};

SweepTable convergence_sweep(const NetworkLimits& limits, const SweepConfig& cfg, std::uint64_t seed);

// CSV: r,policy,Jhat,stderr,Jstar,gap
void write_sweep_csv(std::ostream& os, const SweepTable& table);

struct DiagnosticsReport {
  double collapse_sup1 = 0.0;
  double collapse_sup3 = 0.0;
  bool event_E_hit = false;
  double idle_mass_Y = 0.0;
  double product_sup = 0.0;
  double idle2_total = 0.0;  // I2-hat(t_end), an upper bound for idle_mass_Y
};

DiagnosticsReport run_diagnostics(const ScaledTrajectory& traj, const RNetwork& net,
                                  const ThresholdConstants& constants, double d, double t_end);

// sup_{t <= t_end} |T_bar(t) - T_bar*(t)| with T_bar*(t) = (lambda1/mu1 t, lambda2/mu2 t, t).
double fluid_deviation(const ScaledTrajectory& fluid, const NetworkLimits& limits, double t_end);

struct CollapseBound {
  double value = 0.0;
  bool informative = false;
};

// Explicit part (1 + r^4 t^2) r^{-theta3 (c - 1) ell0} of the bound on P(E(r, t)),
// with the unspecified leading constant set to 1 and the e^{-theta2 r^2 t} term dropped.
CollapseBound collapse_event_bound(const ThresholdConstants& constants, const RNetwork& net, double t);

struct LdRow {
  double t = 0.0;
  double empirical = 0.0;
  double bound = 0.0;
  std::size_t samples = 0;
};

// Frequency of {N(t) >= (rate+eps) t or N(t) <= (rate-eps) t} against 2 exp(-varsigma2 t).
std::vector<LdRow> ld_check(double rate, double eps, const std::vector<double>& t_grid, std::size_t n_samples,
                            std::uint64_t seed);

void write_ld_csv(std::ostream& os, const std::vector<LdRow>& rows);

}  // namespace crisscross
