#pragma once

#include <cstdint>
#include <limits>

#include "avstress/baseline.hpp"
#include "avstress/gae.hpp"
#include "avstress/rollout.hpp"
#include "avstress/trpo.hpp"

namespace avstress {

// Flat on-policy batch; samples are columns, `lengths` partitions them into
// trajectories in collection order.
struct Batch {
  Eigen::MatrixXd states;
  Eigen::MatrixXd actions;
  Eigen::VectorXd rewards;
  std::vector<int> lengths;
  std::vector<double> returns;    // per-trajectory undiscounted totals
  std::vector<Outcome> outcomes;  // per-trajectory outcome

  int steps() const { return static_cast<int>(rewards.size()); }
  int trajectories() const { return static_cast<int>(lengths.size()); }
};

struct DrlParams {
  int batch_size = 4000;         // minimum timesteps per batch
  int iterations = 100;
  std::vector<int> hidden = {32, 32};
  std::uint64_t seed = 0;
  std::uint64_t budget = 0;      // stop before an iteration once this many step calls (0 = off)
  // Stop early once a collision trajectory reaches this total reward
  // (NaN disables the check).
  double target_collision_reward = std::numeric_limits<double>::quiet_NaN();
  GaeParams gae;
  TrpoParams trpo;
  RewardParams reward;
};

struct IterationRecord {
  int iteration = 0;
  double mean_return = 0.0;  // mean per-trajectory total reward in the batch
  double best_collision_reward = std::numeric_limits<double>::quiet_NaN();  // best so far
  std::uint64_t cumulative_steps = 0;
  bool accepted = false;
  double kl = 0.0;
  double surrogate_improvement = 0.0;
};

struct TrainResult {
  GaussianPolicy policy;
  Trajectory best;  // best collision trajectory; best overall when none collided
  bool found_collision = false;
  double best_collision_reward = -std::numeric_limits<double>::infinity();
  std::vector<IterationRecord> curve;
};

// Run whole episodes from initialize() with policy-sampled actions until the
// batch holds at least `batch_size` timesteps. `on_trajectory`, when set, sees
// every completed trajectory.
Batch collect_batch(Simulator& sim, const GaussianPolicy& policy, int batch_size,
                    const RewardParams& rp, StepMeter& meter, std::mt19937_64& gen,
                    const std::function<void(const Trajectory&)>& on_trajectory = nullptr);

// Policy-gradient search: per iteration, collect a batch, estimate advantages
// with GAE against the value baseline, refit the baseline on discounted
// returns, and take one trust-region policy step.
TrainResult train(Simulator& sim, const DrlParams& params, StepMeter& meter);

}  // namespace avstress
