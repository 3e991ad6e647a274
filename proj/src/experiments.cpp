#include "crisscross/experiments.hpp"

#include "crisscross/parallel.hpp"
#include "crisscross/rng.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <stdexcept>

namespace crisscross {

PathCost discounted_cost(const ScaledTrajectory& traj, const Vector3& h, double gamma) {
  if (!(gamma > 0.0)) throw std::domain_error("gamma must be positive");
  PathCost out;
  const Eigen::Index n = traj.size();
  if (n == 0) return out;
  std::vector<double> pieces(static_cast<std::size_t>(n > 1 ? n - 1 : 0));
  double left = std::exp(-gamma * traj.times[0]);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const double right = std::exp(-gamma * traj.times[k + 1]);
    pieces[static_cast<std::size_t>(k)] = traj.Q.row(k).dot(h) * (left - right) / gamma;
    left = right;
  }
  out.cost = pairwise_sum(pieces);
  out.tail = left * traj.Q.row(n - 1).dot(h) / gamma;
  return out;
}

DiscountedCostRun estimate_cost(const RNetwork& net, PolicyKind policy, double horizon_scaled, std::size_t n_reps,
                                std::uint64_t seed) {
  if (!(horizon_scaled > 0.0)) throw std::domain_error("horizon must be positive");
  if (n_reps == 0) throw std::invalid_argument("need at least one replication");
  const NetworkLimits& limits = net.limits;
  const Policy decide = make_policy(policy, net);
  const double horizon = net.r * net.r * horizon_scaled;

  std::vector<double> costs(n_reps), tails(n_reps);
  parallel_for(n_reps, [&](std::size_t rep) {
    const Trajectory traj = simulate(net, decide, horizon, derive_seed(seed, rep));
    const PathCost pc = discounted_cost(diffusion_scale(traj, net), limits.h, limits.gamma);
    costs[rep] = pc.cost;
    tails[rep] = pc.tail;
  });

  DiscountedCostRun run;
  run.r = net.r;
  run.policy = policy;
  run.L_r = net.L_r;
  run.C_r = net.C_r;
  run.ell0 = net.ell0;
  run.c = net.c;
  run.mean_tail = pairwise_sum(tails) / static_cast<double>(n_reps);
  run.estimate = summarize(costs, horizon_scaled, run.mean_tail);
  return run;
}

SweepTable convergence_sweep(const NetworkLimits& limits, const SweepConfig& cfg, std::uint64_t seed) {
  validate_limits(limits);
  if (cfg.r_list.size() < 2) throw std::invalid_argument("convergence sweep needs at least two values of r");
  for (std::size_t i = 1; i < cfg.r_list.size(); ++i) {
    if (!(cfg.r_list[i] > cfg.r_list[i - 1])) throw std::invalid_argument("r_list must be increasing");
  }
  if (cfg.policies.empty()) throw std::invalid_argument("no policies to sweep");

  SweepTable table;
  BcpOptions bcp = cfg.bcp;
  if (bcp.horizon <= 0.0) bcp.horizon = cfg.horizon_scaled;
  table.j_star = estimate_bcp(limits, bcp, derive_seed(seed, 0, 99)).j_star;

  for (double r : cfg.r_list) {
    const RNetwork net = make_r_network(limits, r, cfg.ell0, cfg.c);
    for (std::size_t p = 0; p < cfg.policies.size(); ++p) {
      const std::uint64_t run_seed = cfg.common_random_numbers ? seed : derive_seed(seed, p + 1, 77);
      SweepRow row;
      row.run = estimate_cost(net, cfg.policies[p], cfg.horizon_scaled, cfg.n_reps, run_seed);
      row.gap = (row.run.estimate.mean - table.j_star.mean) / table.j_star.mean;
      table.rows.push_back(row);
    }
  }
  return table;
}

void write_sweep_csv(std::ostream& os, const SweepTable& table) {
  os << "r,policy,Jhat,stderr,Jstar,gap\n";
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << std::setprecision(10);
  for (const auto& row : table.rows) {
    os << row.run.r << ',' << to_string(row.run.policy) << ',' << row.run.estimate.mean << ',';
    if (row.run.estimate.std_error) os << *row.run.estimate.std_error;
    os << ',' << table.j_star.mean << ',' << row.gap << '\n';
  }
  os.flags(flags);
  os.precision(prec);
}

DiagnosticsReport run_diagnostics(const ScaledTrajectory& traj, const RNetwork& net,
                                  const ThresholdConstants& constants, double d, double t_end) {
  if (traj.scaling != Scaling::diffusion) throw std::invalid_argument("diagnostics need the diffusion scaling");
  DiagnosticsReport rep;
  const double r = net.r;
  const double ratio = net.mu_r[1] / net.mu_r[0];
  const double curve_level = static_cast<double>(net.L_r) / r;
  const double idle_level = d * net.ell0 * std::log(r) / r;

  for (Eigen::Index k = 0; k < traj.size() && traj.times[k] <= t_end; ++k) {
    const double q1 = traj.Q(k, 0);
    const double q2 = traj.Q(k, 1);
    const double q3 = traj.Q(k, 2);
    if (q3 - ratio * q1 >= curve_level) {
      rep.collapse_sup1 = std::max(rep.collapse_sup1, q1);
    } else {
      rep.collapse_sup3 = std::max(rep.collapse_sup3, q3);
    }
    rep.product_sup = std::max(rep.product_sup, q1 * q3);

    if (k + 1 < traj.size()) {
      // Idle time grows linearly between epochs; clip the last interval at t_end.
      const double t0 = traj.times[k];
      const double t1 = traj.times[k + 1];
      const double frac = t1 <= t_end ? 1.0 : (t_end - t0) / (t1 - t0);
      const double dI2 = (traj.I(k + 1, 1) - traj.I(k, 1)) * frac;
      rep.idle2_total += dI2;
      if (q2 >= idle_level) rep.idle_mass_Y += dI2;
    }
  }
  const double cutoff = constants.kappa * static_cast<double>(net.C_r - net.L_r + 1) / r;
  rep.event_E_hit = rep.collapse_sup1 > cutoff || rep.collapse_sup3 > cutoff;
  return rep;
}

double fluid_deviation(const ScaledTrajectory& fluid, const NetworkLimits& limits, double t_end) {
  if (fluid.scaling != Scaling::fluid) throw std::invalid_argument("fluid deviation needs the fluid scaling");
  const Vector3 slope(limits.lambda[0] / limits.mu[0], limits.lambda[1] / limits.mu[1], 1.0);
  double dev = 0.0;
  for (Eigen::Index k = 0; k < fluid.size(); ++k) {
    const double t = fluid.times[k];
    Vector3 tb = fluid.T_bar.row(k).transpose();
    double at = t;
    if (t > t_end) {
      if (k == 0) break;
      // Allocations are linear between epochs.
      const double t0 = fluid.times[k - 1];
      const Vector3 tb0 = fluid.T_bar.row(k - 1).transpose();
      tb = tb0 + (tb - tb0) * ((t_end - t0) / (t - t0));
      at = t_end;
    }
    dev = std::max(dev, (tb - slope * at).cwiseAbs().maxCoeff());
    if (t >= t_end) break;
  }
  return dev;
}

CollapseBound collapse_event_bound(const ThresholdConstants& constants, const RNetwork& net, double t) {
  const double r = net.r;
  const double exponent = constants.theta3 * (net.c - 1.0) * net.ell0;
  CollapseBound b;
  b.value = (1.0 + std::pow(r, 4) * t * t) * std::pow(r, -exponent);
  b.informative = b.value < 1.0;
  return b;
}

std::vector<LdRow> ld_check(double rate, double eps, const std::vector<double>& t_grid, std::size_t n_samples,
                            std::uint64_t seed) {
  if (!(eps > 0.0) || !(eps < rate)) throw std::domain_error("ld_check requires 0 < eps < rate");
  if (n_samples == 0) throw std::invalid_argument("ld_check needs samples");
  const double exponent = varsigma2(rate, eps);
  std::vector<LdRow> rows(t_grid.size());
  parallel_for(t_grid.size(), [&](std::size_t i) {
    const double t = t_grid[i];
    if (!(t >= 0.0)) throw std::domain_error("ld_check times must be nonnegative");
    LdRow row;
    row.t = t;
    row.samples = n_samples;
    row.bound = 2.0 * std::exp(-exponent * t);
    const double upper = (rate + eps) * t;
    const double lower = (rate - eps) * t;
    std::size_t hits = 0;
    if (t == 0.0) {
      hits = n_samples;  // N(0) = 0 >= 0
    } else {
      Engine engine(derive_seed(seed, i, 5));
      std::poisson_distribution<long long> poisson(rate * t);
      for (std::size_t s = 0; s < n_samples; ++s) {
        const auto n = static_cast<double>(poisson(engine));
        if (n >= upper || n <= lower) ++hits;
      }
    }
    row.empirical = static_cast<double>(hits) / static_cast<double>(n_samples);
    rows[i] = row;
  });
  return rows;
}

void write_ld_csv(std::ostream& os, const std::vector<LdRow>& rows) {
  os << "t,empirical,bound,samples\n";
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << std::setprecision(10);
  for (const auto& row : rows) os << row.t << ',' << row.empirical << ',' << row.bound << ',' << row.samples << '\n';
  os.flags(flags);
  os.precision(prec);
}

}  // namespace crisscross
