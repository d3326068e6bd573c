#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "avstress/crosswalk.hpp"
#include "avstress/drl.hpp"
#include "avstress/mcts.hpp"

namespace avstress::cli {

// Solver knobs reachable from the command line, bundled so dotted-path
// overrides can address either solver regardless of which one runs.
struct SolverOptions {
  DpwParams mcts;
  DrlParams drl;
  RewardParams reward;
};

struct RunConfig {
  std::string scenario = "1";          // preset id ("1".."3") or scenario JSON path
  std::string solver = "mcts";         // "mcts" | "drl"
  std::uint64_t seed = 0;
  std::uint64_t budget = 1000000;      // step-call cap; must stay positive
  int horizon = 0;                     // 0 keeps the scenario's horizon
  int iterations = 0;                  // 0 lets the budget govern
  std::string out_dir;                 // empty writes no artifacts
  std::vector<std::string> overrides;  // dotted "key=value" assignments
  SolverOptions options;
};

struct RunSummary {
  std::string scenario;
  std::string solver;
  std::uint64_t seed = 0;
  std::uint64_t budget = 0;
  bool collision = false;
  double best_reward = 0.0;
  double best_reward_without_noise = 0.0;
  std::uint64_t step_calls = 0;
  std::optional<std::uint64_t> step_calls_at_first_collision;
  double wall_clock_seconds = 0.0;
  Trajectory best;
  std::vector<IterationRecord> curve;  // per-iteration progress (policy solver)
  ScenarioConfig config;               // scenario after overrides
  // Artifact paths, filled only when the run wrote them.
  std::string trajectory_csv;
  std::string summary_json;
  std::string plot_svg;
  std::string learning_curve_csv;
};

// Apply one dotted-path assignment to the scenario or solver options, e.g.
// "idm.v0=9", "pedestrians.0.vy=1.2", "mcts.exploration_c=50",
// "drl.batch_size=2000". Throws std::invalid_argument on unknown keys or
// malformed values.
void apply_override(ScenarioConfig& cfg, SolverOptions& opts, const std::string& assignment);

// Scenario named by the run configuration (preset or file), with horizon and
// overrides already applied.
ScenarioConfig resolve_scenario(const RunConfig& rc, SolverOptions& opts);

// Execute one search under the configured budget, writing artifacts when an
// output directory is set.
RunSummary run(const RunConfig& rc);

std::string summary_to_json(const RunSummary& s);

// Aligned comparison of two or more summary JSON documents, one row each.
std::string comparison_table(const std::vector<std::string>& summary_jsons);
std::string comparison_csv(const std::vector<std::string>& summary_jsons);

}  // namespace avstress::cli
