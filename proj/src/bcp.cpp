#include "crisscross/bcp.hpp"

#include "crisscross/parallel.hpp"
#include "crisscross/workload.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace crisscross {

namespace {

std::size_t step_count(double dt, double horizon) {
  if (!(dt > 0.0)) throw std::domain_error("dt must be positive");
  if (!(horizon >= dt)) throw std::domain_error("horizon must be at least dt");
  return static_cast<std::size_t>(std::floor(horizon / dt + 1e-9));
}

// Minimum of a Brownian bridge from a to b whose increment over the step has variance var.
double bridge_minimum(double a, double b, double var, double u) {
  const double gap = b - a;
  return 0.5 * (a + b - std::sqrt(gap * gap - 2.0 * var * std::log(u)));
}

// New running minimum after a bridge step from a to b. The bridge dips below
// m with probability exp(-2 (a - m)(b - m) / var); past e^{-40} no draw is made.
double bridge_running_min(double a, double b, double var, double m, GaussianSource& source) {
  if (2.0 * (a - m) * (b - m) > 40.0 * var) return m;
  return std::min(m, bridge_minimum(a, b, var, source.uniform()));
}

// Effective-cost bound coefficients: h_hat(w) <= c1 w1 + c2 w2 for w >= 0.
Vector2 effective_cost_envelope(const NetworkLimits& limits) {
  const auto& mu = limits.mu;
  const auto& h = limits.h;
  return {std::max(h[1] * mu[1] - h[2] * mu[1], h[0] * mu[0]),
          std::max(h[2] * mu[2], mu[2] / mu[1] * (h[1] * mu[1] - h[0] * mu[0]))};
}

}  // namespace

double SeededGaussianSource::uniform() {
  // (0, 1): log(u) must stay finite.
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  double u = 0.0;
  while (u == 0.0) u = dist(uniforms_);
  return u;
}

LimitBm make_limit_bm(const NetworkLimits& limits) {
  const auto& lam = limits.lambda;
  const auto& mu = limits.mu;
  const auto& b = limits.b;
  LimitBm bm;
  bm.drift = Vector3(mu[0] * b[0], mu[1] * b[1], mu[2] * b[2] - mu[1] * b[1]);
  bm.cov << 2.0 * lam[0], 0.0, 0.0,
            0.0, 2.0 * lam[1], -lam[1],
            0.0, -lam[1], 2.0 * lam[1];
  Eigen::LLT<Eigen::Matrix3d> llt(bm.cov);
  if (llt.info() != Eigen::Success) throw std::domain_error("netput covariance is not positive definite");
  bm.chol = llt.matrixL();
  return bm;
}

RbmPath simulate_rbm(const NetworkLimits& limits, double dt, double horizon, GaussianSource& source,
                     ReflectionScheme scheme) {
  const std::size_t n = step_count(dt, horizon);
  const LimitBm bm = make_limit_bm(limits);
  const WorkloadMatrix M = workload_matrix(limits.mu);
  const Eigen::Matrix2d wcov = M * bm.cov * M.transpose();
  const double sqrt_dt = std::sqrt(dt);

  RbmPath path;
  path.dt = dt;
  path.n = n;
  const auto rows = static_cast<Eigen::Index>(n + 1);
  path.x_tilde.setZero(rows, 3);
  path.w_star.setZero(rows, 2);
  path.v_star.setZero(rows, 2);

  Vector3 x = Vector3::Zero();
  for (Eigen::Index k = 1; k < rows; ++k) {
    const Vector3 xi(source.normal(), source.normal(), source.normal());
    x += bm.drift * dt + bm.chol * xi * sqrt_dt;
    path.x_tilde.row(k) = x.transpose();
  }
  const Matrix2Col projected = path.x_tilde * M.transpose();

  for (int i = 0; i < 2; ++i) {
    if (scheme == ReflectionScheme::grid) {
      Path p;
      p.times.resize(n + 1);
      p.values.resize(n + 1);
      for (std::size_t k = 0; k <= n; ++k) {
        p.times[k] = static_cast<double>(k) * dt;
        p.values[k] = projected(static_cast<Eigen::Index>(k), i);
      }
      const Path w = skorohod_reflect(p);
      const Path v = skorohod_regulator(p);
      for (std::size_t k = 0; k <= n; ++k) {
        path.w_star(static_cast<Eigen::Index>(k), i) = w.values[k];
        path.v_star(static_cast<Eigen::Index>(k), i) = v.values[k];
      }
    } else {
      const double var = wcov(i, i) * dt;
      double running_min = 0.0;
      for (Eigen::Index k = 1; k < rows; ++k) {
        running_min = bridge_running_min(projected(k - 1, i), projected(k, i), var, running_min, source);
        path.v_star(k, i) = 0.0 - running_min;
        path.w_star(k, i) = projected(k, i) - running_min;
      }
    }
  }
  return path;
}

RbmPath simulate_rbm(const NetworkLimits& limits, double dt, double horizon, std::uint64_t seed,
                     ReflectionScheme scheme) {
  SeededGaussianSource source(seed);
  return simulate_rbm(limits, dt, horizon, source, scheme);
}

Matrix3Col optimal_queue_path(const RbmPath& path, const NetworkLimits& limits) {
  const auto& mu = limits.mu;
  Matrix3Col q(path.w_star.rows(), 3);
  for (Eigen::Index k = 0; k < q.rows(); ++k) {
    const double w1 = path.w_star(k, 0);
    const double w2 = path.w_star(k, 1);
    if (mu[2] * w2 >= mu[1] * w1) {
      q.row(k) << 0.0, mu[1] * w1, mu[2] * w2 - mu[1] * w1;
    } else {
      q.row(k) << mu[0] / mu[1] * (mu[1] * w1 - mu[2] * w2), mu[2] * w2, 0.0;
    }
  }
  return q;
}

AdmissibilityReport audit_admissibility(const RbmPath& path, const NetworkLimits& limits, double tol) {
  const auto& mu = limits.mu;
  const Matrix3Col q_star = optimal_queue_path(path, limits);
  AdmissibilityReport rep;
  auto fail = [&](Eigen::Index k, const char* what) {
    if (!rep.ok) return;
    std::ostringstream os;
    os << "step " << k << ": " << what;
    rep.ok = false;
    rep.message = os.str();
  };
  for (Eigen::Index k = 0; k < path.x_tilde.rows(); ++k) {
    const Vector3 x = path.x_tilde.row(k).transpose();
    const double v1 = path.v_star(k, 0);
    const double v2 = path.v_star(k, 1);
    const bool buffer3_heavy = mu[2] * path.w_star(k, 1) >= mu[1] * path.w_star(k, 0);
    Vector3 y;
    if (buffer3_heavy) {
      y[0] = -x[0] / mu[0];
      y[1] = x[0] / mu[0] + v1;
    } else {
      y[0] = -x[2] / mu[1] + v1 - mu[2] / mu[1] * v2;
      y[1] = x[2] / mu[1] + mu[2] / mu[1] * v2;
    }
    y[2] = v2;
    const Vector3 q(x[0] + mu[0] * y[0], x[1] + mu[1] * y[1], x[2] + mu[2] * y[2] - mu[1] * y[1]);
    const double scale = std::max(1.0, x.cwiseAbs().maxCoeff() + v1 + v2);

    rep.max_negative_queue = std::min(rep.max_negative_queue, q.minCoeff());
    if (q.minCoeff() < -tol * scale) fail(k, "queue length negative");
    if ((q - q_star.row(k).transpose()).cwiseAbs().maxCoeff() > tol * scale) fail(k, "Y* does not reproduce Q*");
    const double idle_gap = std::max(std::abs(y[0] + y[1] - v1), std::abs(y[2] - v2));
    rep.max_idle_mismatch = std::max(rep.max_idle_mismatch, idle_gap);
    if (idle_gap > tol * scale) fail(k, "idle processes differ from regulators");
    if (path.w_star.row(k).minCoeff() < -tol * scale) fail(k, "reflected workload negative");
    if (k == 0) {
      if (v1 != 0.0 || v2 != 0.0) fail(k, "regulators must start at 0");
    } else if (v1 < path.v_star(k - 1, 0) || v2 < path.v_star(k - 1, 1)) {
      fail(k, "regulator decreased");
    }
  }
  return rep;
}

double regulator_complementarity_gap(const RbmPath& path) {
  double gap = 0.0;
  for (Eigen::Index k = 1; k < path.v_star.rows(); ++k) {
    for (int i = 0; i < 2; ++i) {
      if (path.v_star(k, i) > path.v_star(k - 1, i)) gap = std::max(gap, std::abs(path.w_star(k, i)));
    }
  }
  return gap;
}

double workload_tail_bound(const NetworkLimits& limits, double horizon, double a, double b) {
  const double gamma = limits.gamma;
  const LimitBm bm = make_limit_bm(limits);
  const WorkloadMatrix M = workload_matrix(limits.mu);
  const Eigen::Matrix2d wcov = M * bm.cov * M.transpose();
  const Vector2 wdrift = M * bm.drift;
  const double decay = std::exp(-gamma * horizon);
  // sqrt(t) <= sqrt(H) + (t - H) / (2 sqrt(H)) for t >= H.
  const double sqrt_tail = horizon > 0.0
                               ? decay * (std::sqrt(horizon) / gamma + 1.0 / (2.0 * std::sqrt(horizon) * gamma * gamma))
                               : std::sqrt(std::numbers::pi) / (2.0 * std::pow(gamma, 1.5));
  const double linear_tail = decay * (horizon / gamma + 1.0 / (gamma * gamma));
  const double coeff[2] = {a, b};
  double bound = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double sigma = std::sqrt(wcov(i, i));
    bound += std::abs(coeff[i]) *
             (sigma * std::sqrt(2.0 / std::numbers::pi) * sqrt_tail + std::abs(wdrift[i]) * linear_tail);
  }
  return bound;
}

BcpEstimates estimate_bcp(const NetworkLimits& limits, const BcpOptions& opts, std::uint64_t seed) {
  validate_limits(limits);
  if (opts.n_paths == 0) throw std::invalid_argument("n_paths must be positive");
  const double gamma = limits.gamma;
  const double horizon = opts.horizon > 0.0 ? opts.horizon : 15.0 / gamma;
  const double dt = opts.dt;
  const std::size_t n = step_count(dt, horizon);

  // Only the workload projection enters the cost, so paths are generated in
  // two dimensions with the projected drift and covariance.
  const LimitBm bm = make_limit_bm(limits);
  const WorkloadMatrix M = workload_matrix(limits.mu);
  const Eigen::Matrix2d wcov = M * bm.cov * M.transpose();
  const Eigen::Matrix2d wchol = Eigen::LLT<Eigen::Matrix2d>(wcov).matrixL();
  const Vector2 step_drift = M * bm.drift * dt;
  const Eigen::Matrix2d step_chol = wchol * std::sqrt(dt);
  const Vector2 step_var = wcov.diagonal() * dt;
  const double step_decay = std::exp(-gamma * dt);
  const double first_weight = (1.0 - step_decay) / gamma;
  const Vector3& mu = limits.mu;
  const Vector3& h = limits.h;
  const bool bridge = opts.scheme == ReflectionScheme::bridge;

  std::vector<double> cost(opts.n_paths), w1(opts.n_paths), w2(opts.n_paths);
  parallel_for(opts.n_paths, [&](std::size_t p) {
    SeededGaussianSource source(derive_seed(seed, p));
    Vector2 x = Vector2::Zero();
    Vector2 running_min = Vector2::Zero();
    Vector2 w = Vector2::Zero();
    double weight = first_weight;
    double acc_cost = 0.0, acc_w1 = 0.0, acc_w2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      // Cost of step k uses the workload at its left end.
      acc_cost += weight * effective_cost_value(mu, h, w[0], w[1]);
      acc_w1 += weight * w[0];
      acc_w2 += weight * w[1];
      weight *= step_decay;

      const Vector2 xi(source.normal(), source.normal());
      const Vector2 x_next = x + step_drift + step_chol * xi;
      for (int i = 0; i < 2; ++i) {
        running_min[i] = bridge ? bridge_running_min(x[i], x_next[i], step_var[i], running_min[i], source)
                                : std::min(running_min[i], x_next[i]);
      }
      x = x_next;
      w = x - running_min;
    }
    cost[p] = acc_cost;
    w1[p] = acc_w1;
    w2[p] = acc_w2;
  });

  const double actual_horizon = static_cast<double>(n) * dt;
  const Vector2 env = effective_cost_envelope(limits);
  BcpEstimates out;
  out.j_star = summarize(cost, actual_horizon, workload_tail_bound(limits, actual_horizon, env[0], env[1]));
  out.w1 = summarize(w1, actual_horizon, workload_tail_bound(limits, actual_horizon, 1.0, 0.0));
  out.w2 = summarize(w2, actual_horizon, workload_tail_bound(limits, actual_horizon, 0.0, 1.0));
  out.j_star.dt = out.w1.dt = out.w2.dt = dt;
  return out;
}

CostEstimate estimate_j_star(const NetworkLimits& limits, double dt, double horizon, std::size_t n_paths,
                             std::uint64_t seed) {
  BcpOptions opts;
  opts.dt = dt;
  opts.horizon = horizon;
  opts.n_paths = n_paths;
  return estimate_bcp(limits, opts, seed).j_star;
}

}  // namespace crisscross
