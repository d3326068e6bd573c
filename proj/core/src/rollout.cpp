#include "avstress/rollout.hpp"

namespace avstress {

TransitionOutcome metered_step(Simulator& sim, const EnvAction& action, StepMeter& meter) {
  TransitionOutcome out = sim.step(action);
  meter.record(out.event);
  return out;
}

Trajectory rollout(Simulator& sim, const ActionSource& source, const RewardParams& rp,
                   StepMeter& meter) {
  Trajectory traj;
  int t = 0;
  while (!sim.is_terminal()) {
    traj.states.push_back(sim.observe());
    EnvAction a = source(sim);
    TransitionOutcome out = metered_step(sim, a, meter);
    double r = reward(out, rp, ++t);
    traj.actions.push_back(std::move(a));
    traj.rewards.push_back(r);
    traj.total_reward += r;
    if (out.terminal) {
      traj.outcome = out.event ? Outcome::kCollision : Outcome::kHorizonMiss;
      break;
    }
  }
  return traj;
}

Trajectory replay(Simulator& sim, const std::vector<EnvAction>& actions, const RewardParams& rp) {
  sim.initialize();
  Trajectory traj;
  int t = 0;
  for (const EnvAction& a : actions) {
    if (sim.is_terminal()) break;
    traj.states.push_back(sim.observe());
    TransitionOutcome out = sim.step(a);
    double r = reward(out, rp, ++t);
    traj.actions.push_back(a);
    traj.rewards.push_back(r);
    traj.total_reward += r;
    if (out.terminal) {
      traj.outcome = out.event ? Outcome::kCollision : Outcome::kHorizonMiss;
      break;
    }
  }
  return traj;
}

double reward_without_noise(Simulator& sim, const std::vector<EnvAction>& actions,
                            const RewardParams& rp) {
  sim.initialize();
  double total = 0.0;
  int t = 0;
  for (const EnvAction& a : actions) {
    if (sim.is_terminal()) break;
    double m0 = sim.action_mahalanobis(zero_noise(a));
    TransitionOutcome out = sim.step(a);
    TransitionOutcome adjusted = out;
    adjusted.mahalanobis = m0;
    total += reward(adjusted, rp, ++t);
    if (out.terminal) break;
  }
  return total;
}

}  // namespace avstress
