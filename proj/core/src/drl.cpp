#include "avstress/drl.hpp"

#include <random>

namespace avstress {

Batch collect_batch(Simulator& sim, const GaussianPolicy& policy, int batch_size,
                    const RewardParams& rp, StepMeter& meter, std::mt19937_64& gen,
                    const std::function<void(const Trajectory&)>& on_trajectory) {
  std::vector<Trajectory> trajs;
  int total = 0;
  const ActionSource source = [&](const Simulator& s) {
    return EnvAction(policy.sample(s.observe(), gen));
  };
  while (total < batch_size) {
    sim.initialize();
    Trajectory traj = rollout(sim, source, rp, meter);
    total += traj.length();
    if (on_trajectory) on_trajectory(traj);
    trajs.push_back(std::move(traj));
  }

  Batch batch;
  batch.states.resize(sim.state_dimension(), total);
  batch.actions.resize(sim.action_dimension(), total);
  batch.rewards.resize(total);
  int col = 0;
  for (const Trajectory& traj : trajs) {
    for (int t = 0; t < traj.length(); ++t, ++col) {
      batch.states.col(col) = traj.states[t];
      batch.actions.col(col) = traj.actions[t].vector();
      batch.rewards[col] = traj.rewards[t];
    }
    batch.lengths.push_back(traj.length());
    batch.returns.push_back(traj.total_reward);
    batch.outcomes.push_back(traj.outcome);
  }
  return batch;
}

TrainResult train(Simulator& sim, const DrlParams& params, StepMeter& meter) {
  GaussianPolicy policy(sim.state_dimension(), sim.action_dimension(), params.hidden,
                        params.seed ^ 0x9e3779b97f4a7c15ull);
  std::mt19937_64 gen(params.seed);
  LinearBaseline baseline;

  TrainResult result{policy, {}, false, -std::numeric_limits<double>::infinity(), {}};
  Trajectory best_any;
  double best_any_reward = -std::numeric_limits<double>::infinity();

  const auto track = [&](const Trajectory& traj) {
    if (traj.outcome == Outcome::kCollision) {
      result.found_collision = true;
      if (traj.total_reward > result.best_collision_reward) {
        result.best_collision_reward = traj.total_reward;
        result.best = traj;
      }
    } else if (!result.found_collision && traj.total_reward > best_any_reward) {
      best_any_reward = traj.total_reward;
      best_any = traj;
    }
  };

  for (int it = 1; it <= params.iterations; ++it) {
    if (params.budget > 0 && meter.count >= params.budget) break;

    Batch batch =
        collect_batch(sim, policy, params.batch_size, params.reward, meter, gen, track);

    const Eigen::VectorXd values = baseline.predict(batch.states, batch.lengths);
    const Eigen::VectorXd returns =
        discounted_returns(batch.rewards, batch.lengths, params.gae.gamma);
    const Eigen::VectorXd advantages =
        gae_advantages(batch.rewards, values, batch.lengths, params.gae);
    baseline.fit(batch.states, batch.lengths, returns);

    const TrpoStats stats =
        trpo_update(policy, batch.states, batch.actions, advantages, params.trpo);

    IterationRecord rec;
    rec.iteration = it;
    double sum = 0.0;
    for (double r : batch.returns) sum += r;
    rec.mean_return = sum / batch.trajectories();
    rec.best_collision_reward = result.found_collision
                                    ? result.best_collision_reward
                                    : std::numeric_limits<double>::quiet_NaN();
    rec.cumulative_steps = meter.count;
    rec.accepted = stats.accepted;
    rec.kl = stats.kl;
    rec.surrogate_improvement = stats.surrogate_improvement;
    result.curve.push_back(rec);

    if (result.found_collision &&
        result.best_collision_reward >= params.target_collision_reward) {
      break;  // good enough; never true while the target is NaN
    }
  }

  if (!result.found_collision) result.best = std::move(best_any);
  result.policy = policy;
  return result;
}

}  // namespace avstress
