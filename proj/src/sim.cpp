#include "crisscross/sim.hpp"

#include "crisscross/rng.hpp"
#include "crisscross/workload.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace crisscross {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class ExpClock {
 public:
  ExpClock(std::uint64_t seed, Stream stream, double rate)
      : engine_(make_engine(seed, 0, stream)), dist_(rate) {}
  double draw() { return dist_(engine_); }

 private:
  Engine engine_;
  std::exponential_distribution<double> dist_;
};

void check_action(const Action& a, const QueueVector& q) {
  if ((a.server1 == Server1Activity::serve1 && q[0] == 0) || (a.server1 == Server1Activity::serve2 && q[1] == 0) ||
      (a.server2 == Server2Activity::serve3 && q[2] == 0)) {
    throw std::logic_error("policy assigned a server to an empty buffer");
  }
}

std::string at_epoch(std::size_t k, double t, const std::string& what) {
  std::ostringstream os;
  os.precision(15);
  os << "epoch " << k << " (t=" << t << "): " << what;
  return os.str();
}

double tol_for(double magnitude) { return 1e-9 * std::max(1.0, std::abs(magnitude)); }

}  // namespace

void Trajectory::push(const SimState& s) {
  epochs.push_back(s.t);
  queues.push_back(s.q);
  allocations.push_back(s.T);
  idles.push_back(s.idle);
  counts.push_back(s.counts);
  actions.push_back(s.action);
}

Trajectory simulate(const RNetwork& net, const Policy& policy, double horizon, std::uint64_t seed) {
  if (!(horizon >= 0.0)) throw std::domain_error("horizon must be nonnegative");
  Trajectory traj;
  traj.r = net.r;
  traj.horizon = horizon;

  SimState s;
  s.action = policy(s.q);
  check_action(s.action, s.q);
  traj.push(s);
  if (horizon == 0.0) return traj;

  ExpClock arrival1(seed, Stream::arrival1, net.lambda_r[0]);
  ExpClock arrival2(seed, Stream::arrival2, net.lambda_r[1]);
  std::array<ExpClock, 3> service{ExpClock(seed, Stream::service1, net.mu_r[0]),
                                  ExpClock(seed, Stream::service2, net.mu_r[1]),
                                  ExpClock(seed, Stream::service3, net.mu_r[2])};

  double next_arrival[2] = {arrival1.draw(), arrival2.draw()};
  // Cumulative service requirement at which the next completion of activity j happens.
  double next_mark[3] = {service[0].draw(), service[1].draw(), service[2].draw()};

  for (;;) {
    const Action act = s.action;
    const bool busy[3] = {act.server1 == Server1Activity::serve1, act.server1 == Server1Activity::serve2,
                          act.server2 == Server2Activity::serve3};

    double t_next = kInf;
    int event = -1;  // 0,1 arrivals; 2,3,4 completions of activity 1,2,3
    for (int k = 0; k < 2; ++k) {
      if (next_arrival[k] < t_next) {
        t_next = next_arrival[k];
        event = k;
      }
    }
    for (int j = 0; j < 3; ++j) {
      if (!busy[j]) continue;
      const double done = s.t + (next_mark[j] - s.T[j]);
      if (done < t_next) {
        t_next = done;
        event = 2 + j;
      }
    }

    const double t_end = std::min(t_next, horizon);
    const double dt = t_end - s.t;
    for (int j = 0; j < 3; ++j) {
      if (busy[j]) s.T[j] += dt;
    }
    if (act.server1 == Server1Activity::idle) s.idle[0] += dt;
    if (act.server2 == Server2Activity::idle) s.idle[1] += dt;
    s.t = t_end;

    if (t_next > horizon) {
      if (traj.epochs.back() < horizon) traj.push(s);
      break;
    }

    switch (event) {
      case 0:
        ++s.counts[0];
        ++s.q[0];
        next_arrival[0] += arrival1.draw();
        break;
      case 1:
        ++s.counts[1];
        ++s.q[1];
        next_arrival[1] += arrival2.draw();
        break;
      default: {
        const int j = event - 2;
        s.T[j] = next_mark[j];
        next_mark[j] += service[j].draw();
        ++s.counts[2 + j];
        --s.q[j];
        if (j == 1) ++s.q[2];
        break;
      }
    }
    if (s.q[0] != s.counts[0] - s.counts[2] || s.q[1] != s.counts[1] - s.counts[3] ||
        s.q[2] != s.counts[3] - s.counts[4] || s.q[0] < 0 || s.q[1] < 0 || s.q[2] < 0) {
      throw std::logic_error(at_epoch(traj.size(), s.t, "conservation violated during simulation"));
    }
    s.action = policy(s.q);
    check_action(s.action, s.q);
    traj.push(s);
  }
  return traj;
}

ConservationReport check_conservation(const Trajectory& traj) {
  ConservationReport rep;
  auto fail = [&](std::size_t k, const std::string& what) {
    rep.clean = false;
    rep.epoch = k;
    rep.message = at_epoch(k, traj.epochs[k], what);
    return rep;
  };
  const std::size_t n = traj.size();
  if (n == 0) {
    rep.clean = false;
    rep.message = "empty trajectory";
    return rep;
  }
  if (traj.queues.size() != n || traj.allocations.size() != n || traj.idles.size() != n ||
      traj.counts.size() != n || traj.actions.size() != n) {
    rep.clean = false;
    rep.message = "trajectory columns have different lengths";
    return rep;
  }
  if (traj.epochs[0] != 0.0 || traj.queues[0] != QueueVector{0, 0, 0}) return fail(0, "must start empty at t=0");

  for (std::size_t k = 0; k < n; ++k) {
    const auto& q = traj.queues[k];
    const auto& c = traj.counts[k];
    const auto& T = traj.allocations[k];
    const auto& I = traj.idles[k];
    const double t = traj.epochs[k];
    if (q[0] != c[0] - c[2]) return fail(k, "Q1 != A1 - S1(T1)");
    if (q[1] != c[1] - c[3]) return fail(k, "Q2 != A2 - S2(T2)");
    if (q[2] != c[3] - c[4]) return fail(k, "Q3 != S2(T2) - S3(T3)");
    if (q[0] < 0 || q[1] < 0 || q[2] < 0) return fail(k, "negative queue length");
    if (I[0] < -tol_for(t) || I[1] < -tol_for(t)) return fail(k, "negative idle time");
    if (std::abs(t - T[0] - T[1] - I[0]) > tol_for(t)) return fail(k, "I1 != t - T1 - T2");
    if (std::abs(t - T[2] - I[1]) > tol_for(t)) return fail(k, "I2 != t - T3");

    const Action& a = traj.actions[k];
    if ((a.server2 == Server2Activity::idle) != (q[2] == 0)) return fail(k, "server 2 idles with buffer 3 nonempty");
    if ((a.server1 == Server1Activity::serve1 && q[0] == 0) || (a.server1 == Server1Activity::serve2 && q[1] == 0)) {
      return fail(k, "server 1 assigned to an empty buffer");
    }

    if (k == 0) continue;
    const double span = t - traj.epochs[k - 1];
    if (!(span > 0.0)) return fail(k, "epochs not strictly increasing");
    const Vector3 dT = T - traj.allocations[k - 1];
    const Vector2 dI = I - traj.idles[k - 1];
    const double tol = tol_for(t);
    for (int j = 0; j < 3; ++j) {
      if (dT[j] < -tol) return fail(k, "allocation decreased");
      if (dT[j] > span + tol) return fail(k, "allocation not 1-Lipschitz");
    }
    if (dI[0] < -tol || dI[1] < -tol) return fail(k, "idle time decreased");
    if (std::abs(dT[0] + dT[1] + dI[0] - span) > tol) return fail(k, "server 1 time accounting broken");
    if (std::abs(dT[2] + dI[1] - span) > tol) return fail(k, "server 2 time accounting broken");

    const Action& prev = traj.actions[k - 1];
    const double expect[3] = {prev.server1 == Server1Activity::serve1 ? span : 0.0,
                              prev.server1 == Server1Activity::serve2 ? span : 0.0,
                              prev.server2 == Server2Activity::serve3 ? span : 0.0};
    for (int j = 0; j < 3; ++j) {
      if (std::abs(dT[j] - expect[j]) > tol) return fail(k, "allocation increment disagrees with recorded action");
    }
  }
  return rep;
}

ConservationReport check_non_idling(const Trajectory& traj) {
  ConservationReport rep;
  for (std::size_t k = 1; k < traj.size(); ++k) {
    const Vector2 dI = traj.idles[k] - traj.idles[k - 1];
    const auto& q = traj.queues[k - 1];
    const double tol = tol_for(traj.epochs[k]);
    std::string what;
    if (dI[0] > tol && !(q[0] == 0 && q[1] == 0)) what = "server 1 idled with work in buffers 1 or 2";
    if (dI[1] > tol && q[2] != 0) what = "server 2 idled with work in buffer 3";
    if (!what.empty()) {
      rep.clean = false;
      rep.epoch = k - 1;
      rep.message = at_epoch(k - 1, traj.epochs[k - 1], what);
      return rep;
    }
  }
  return rep;
}

namespace {

ScaledTrajectory scale_common(const Trajectory& traj, const RNetwork& net, Scaling scaling) {
  const auto n = static_cast<Eigen::Index>(traj.size());
  const double r = net.r;
  const double r2 = r * r;
  const double amp = scaling == Scaling::fluid ? 1.0 / r2 : 1.0 / r;
  const WorkloadMatrix M = workload_matrix(net.mu_r);

  ScaledTrajectory out;
  out.scaling = scaling;
  out.r = r;
  out.times.resize(n);
  out.Q.resize(n, 3);
  out.T.resize(n, 3);
  out.T_bar.resize(n, 3);
  out.I.resize(n, 2);
  out.W.resize(n, 2);
  out.A.resize(n, 2);
  out.S.resize(n, 3);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    const double ts = traj.epochs[uk] / r2;
    out.times[k] = ts;
    const auto& q = traj.queues[uk];
    const Vector3 qv(static_cast<double>(q[0]), static_cast<double>(q[1]), static_cast<double>(q[2]));
    out.Q.row(k) = (qv * amp).transpose();
    out.W.row(k) = (M * qv * amp).transpose();
    out.T.row(k) = (traj.allocations[uk] * amp).transpose();
    out.T_bar.row(k) = (traj.allocations[uk] / r2).transpose();
    const Vector3& Tk = traj.allocations[uk];
    out.I.row(k) = Vector2(traj.epochs[uk] - Tk[0] - Tk[1], traj.epochs[uk] - Tk[2]).transpose() * amp;
    const auto& c = traj.counts[uk];
    for (int i = 0; i < 2; ++i) {
      const double centre = scaling == Scaling::diffusion ? net.lambda_r[i] * traj.epochs[uk] : 0.0;
      out.A(k, i) = (static_cast<double>(c[i]) - centre) * amp;
    }
    for (int j = 0; j < 3; ++j) {
      const double centre = scaling == Scaling::diffusion ? net.mu_r[j] * traj.allocations[uk][j] : 0.0;
      out.S(k, j) = (static_cast<double>(c[2 + j]) - centre) * amp;
    }
  }
  return out;
}

}  // namespace

ScaledTrajectory fluid_scale(const Trajectory& traj, const RNetwork& net) {
  return scale_common(traj, net, Scaling::fluid);
}

ScaledTrajectory diffusion_scale(const Trajectory& traj, const RNetwork& net) {
  ScaledTrajectory out = scale_common(traj, net, Scaling::diffusion);
  const auto& lim = net.limits;
  const double r = net.r;
  const Vector2 load(lim.lambda[0] / lim.mu[0], lim.lambda[1] / lim.mu[1]);
  out.X.resize(out.size(), 3);
  for (Eigen::Index k = 0; k < out.size(); ++k) {
    const double t = out.times[k];
    for (int i = 0; i < 2; ++i) {
      out.X(k, i) = out.A(k, i) - out.S(k, i) + r * (net.lambda_r[i] * t - net.mu_r[i] * load[i] * t);
    }
    out.X(k, 2) = out.S(k, 1) - out.S(k, 2) + r * (net.mu_r[1] * load[1] * t - net.mu_r[2] * t);
  }
  return out;
}

IdentityResiduals scaled_identity_residuals(const ScaledTrajectory& d, const RNetwork& net) {
  if (d.scaling != Scaling::diffusion) throw std::invalid_argument("identities need the diffusion scaling");
  const auto& lim = net.limits;
  const auto& mu = net.mu_r;
  const double r = net.r;
  const WorkloadMatrix M = workload_matrix(mu);
  const Vector2 load(lim.lambda[0] / lim.mu[0], lim.lambda[1] / lim.mu[1]);
  IdentityResiduals res;
  for (Eigen::Index k = 0; k < d.size(); ++k) {
    const double t = d.times[k];
    const Vector3 q = d.Q.row(k).transpose();
    const Vector3 x = d.X.row(k).transpose();
    const Vector3 tb = d.T_bar.row(k).transpose();
    const Vector2 w = d.W.row(k).transpose();
    const Vector2 idle = d.I.row(k).transpose();
    res.workload = std::max(res.workload, (w - M * q).cwiseAbs().maxCoeff());

    Vector3 q_rebuilt;
    for (int i = 0; i < 2; ++i) q_rebuilt[i] = x[i] + r * mu[i] * (load[i] * t - tb[i]);
    q_rebuilt[2] = x[2] + r * mu[2] * (t - tb[2]) - r * mu[1] * (load[1] * t - tb[1]);
    res.queue_from_netput = std::max(res.queue_from_netput, (q - q_rebuilt).cwiseAbs().maxCoeff());

    res.workload_from_netput = std::max(res.workload_from_netput, (w - (M * x + idle)).cwiseAbs().maxCoeff());
  }
  return res;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "epoch,Q1,Q2,Q3,T1,T2,T3,I1,I2,server1_activity,server2_activity\n";
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << std::setprecision(17);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& q = traj.queues[k];
    const auto& T = traj.allocations[k];
    const auto& I = traj.idles[k];
    os << traj.epochs[k] << ',' << q[0] << ',' << q[1] << ',' << q[2] << ',' << T[0] << ',' << T[1] << ',' << T[2]
       << ',' << I[0] << ',' << I[1] << ',' << to_string(traj.actions[k].server1) << ','
       << to_string(traj.actions[k].server2) << '\n';
  }
  os.flags(flags);
  os.precision(prec);
}

}  // namespace crisscross
