#pragma once

#include "crisscross/params.hpp"
#include "crisscross/policy.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace crisscross {

// Event counters (A1, A2, S1(T1), S2(T2), S3(T3)).
using CountVector = std::array<std::int64_t, 5>;

struct SimState {
  QueueVector q{0, 0, 0};
  double t = 0.0;
  Vector3 T = Vector3::Zero();
  Vector2 idle = Vector2::Zero();
  CountVector counts{0, 0, 0, 0, 0};
  Action action;
};

// Exact piecewise-constant sample path. Entry k holds the state right after
// the k-th event; actions[k] is in force on [epochs[k], epochs[k+1]). The last
// epoch is the horizon whenever the horizon is positive.
struct Trajectory {
  double r = 1.0;
  double horizon = 0.0;
  std::vector<double> epochs;
  std::vector<QueueVector> queues;
  std::vector<Vector3> allocations;
  std::vector<Vector2> idles;
  std::vector<CountVector> counts;
  std::vector<Action> actions;

  std::size_t size() const { return epochs.size(); }
  void push(const SimState& s);
};

// Continuous-time Markov chain simulation of the r-th network starting empty.
// Arrival and service primitives come from separate seeded substreams; a
// service in progress keeps its residual requirement across preemptions.
Trajectory simulate(const RNetwork& net, const Policy& policy, double horizon, std::uint64_t seed);

struct ConservationReport {
  bool clean = true;
  std::size_t epoch = 0;
  std::string message;
};

// Audits flow conservation, nonnegativity, allocation/idle accounting,
// 1-Lipschitz allocations and server-2 non-idling at every epoch.
ConservationReport check_conservation(const Trajectory& traj);

// Server 1 accumulates idle time only while Q1 = Q2 = 0, server 2 only while Q3 = 0.
ConservationReport check_non_idling(const Trajectory& traj);

using Matrix3Col = Eigen::Matrix<double, Eigen::Dynamic, 3>;
using Matrix2Col = Eigen::Matrix<double, Eigen::Dynamic, 2>;

enum class Scaling { fluid, diffusion };

// A Trajectory viewed on the r^2-compressed time axis. For the fluid scaling
// every amplitude is divided by r^2; for the diffusion scaling by r, with the
// counting processes centered. T_bar always holds the fluid-scaled allocations.
struct ScaledTrajectory {
  Scaling scaling = Scaling::fluid;
  double r = 1.0;
  Eigen::VectorXd times;
  Matrix3Col Q;
  Matrix3Col T;
  Matrix3Col T_bar;
  Matrix2Col I;
  Matrix2Col W;
  Matrix2Col A;  // arrivals (centered for diffusion)
  Matrix3Col S;  // S_j evaluated at the allocation clock (centered for diffusion)
  Matrix3Col X;  // diffusion only

  Eigen::Index size() const { return times.size(); }
};

ScaledTrajectory fluid_scale(const Trajectory& traj, const RNetwork& net);
ScaledTrajectory diffusion_scale(const Trajectory& traj, const RNetwork& net);

struct IdentityResiduals {
  double workload = 0.0;          // |W - M^r Q|
  double queue_from_netput = 0.0; // |Q - (X + allocation terms)|
  double workload_from_netput = 0.0;  // |W - (M^r X + I)|
};

// Largest residuals over all epochs of the diffusion-scaled identities.
IdentityResiduals scaled_identity_residuals(const ScaledTrajectory& d, const RNetwork& net);

// CSV: epoch,Q1,Q2,Q3,T1,T2,T3,I1,I2,server1_activity,server2_activity
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace crisscross
