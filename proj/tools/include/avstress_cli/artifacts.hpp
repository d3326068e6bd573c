#pragma once

#include <optional>
#include <string>
#include <vector>

#include "avstress/crosswalk.hpp"
#include "avstress/drl.hpp"
#include "avstress/rollout.hpp"

namespace avstress::cli {

// Absolute world states along one replayed action sequence, for writers that
// need more than the solver-visible relative observations.
struct ReplayTrace {
  std::vector<PedestrianState> initial_peds;
  VehicleState initial_vehicle;
  std::vector<std::vector<PedestrianState>> peds;  // [step][pedestrian], post-step
  std::vector<VehicleState> vehicle;               // post-step
  std::vector<double> rewards;
  std::optional<int> collision_step;  // 1-based step of the collision
  std::optional<int> collision_ped;   // pedestrian hit at that step
};

ReplayTrace trace_trajectory(CrosswalkSim& sim, const std::vector<EnvAction>& actions,
                             const RewardParams& rp);

// One row per (timestep, pedestrian): post-step states, the action block that
// produced them, and the step reward. Values print with 17 significant digits
// so parsing the file reproduces the doubles bitwise.
void write_trajectory_csv(const std::string& path, const ReplayTrace& trace,
                          const std::vector<EnvAction>& actions);

// Read back a trajectory CSV into per-step actions and rewards (rewards
// repeated per pedestrian row collapse to one value per step).
struct ParsedTrajectory {
  std::vector<EnvAction> actions;
  std::vector<double> rewards;
};
ParsedTrajectory read_trajectory_csv(const std::string& path);

// Per-iteration progress of the policy-gradient solver.
void write_learning_curve_csv(const std::string& path, const std::vector<IterationRecord>& curve);

// Top-down picture of the episode: road band, crosswalk, vehicle track along
// the lane, pedestrian paths with start markers, and the collision point when
// there is one.
void write_trajectory_svg(const std::string& path, const ScenarioConfig& cfg,
                          const ReplayTrace& trace);

}  // namespace avstress::cli
