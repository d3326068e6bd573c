#pragma once

#include <functional>
#include <vector>

#include "avstress/reward.hpp"
#include "avstress/simulator.hpp"
#include "avstress/trajectory.hpp"

namespace avstress {

// Supplies the next environment action given the current simulator state.
using ActionSource = std::function<EnvAction(const Simulator&)>;

// Single metered step: increments the meter and forwards to sim.step().
TransitionOutcome metered_step(Simulator& sim, const EnvAction& action, StepMeter& meter);

// Drive a freshly initialized simulator to a terminal state, drawing actions
// from `source`. Records states, actions and per-step rewards.
Trajectory rollout(Simulator& sim, const ActionSource& source, const RewardParams& rp,
                   StepMeter& meter);

// Re-run a recorded action sequence from initialize(). Deterministic: the
// same actions reproduce the identical trajectory. Stops at the terminal
// state; any remaining actions are left unconsumed (the returned trajectory
// is the consumed prefix).
Trajectory replay(Simulator& sim, const std::vector<EnvAction>& actions, const RewardParams& rp);

// Total reward the action sequence would earn if its measurement-noise
// components were zero in the likelihood terms. Dynamics are unchanged
// (noise never affects pedestrian motion), so the trajectory is identical;
// only the per-step -log(1 + M) terms are recomputed with eps zeroed.
double reward_without_noise(Simulator& sim, const std::vector<EnvAction>& actions,
                            const RewardParams& rp);

}  // namespace avstress
