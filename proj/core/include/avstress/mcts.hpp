#pragma once

#include <cstdint>
#include <map>
#include <memory>

#include "avstress/rollout.hpp"

namespace avstress {

// A tree-search action: the seed that fixes every random component of one
// EnvAction. Identical seeds always reproduce identical actions, so the tree
// can treat the continuous disturbance space as a growing discrete set.
using Seed = std::uint64_t;

// Expand a seed into a concrete action: every component of the 6-per-
// pedestrian block is drawn from one generator stream seeded with `seed`,
// scaled to the disturbance model's per-component standard deviation.
EnvAction seed_to_action(Seed seed, const Eigen::VectorXd& variance_diag);

struct DpwParams {
  double k_action = 1.0;       // progressive-widening scale
  double alpha_action = 0.5;   // progressive-widening exponent
  double exploration_c = 100.0;  // UCT exploration constant
  int iterations = 2000;
  int max_depth = 100;
  std::uint64_t meta_seed = 0;   // seeds the seed-stream and rollout policy
  std::uint64_t budget = 0;      // stop once the meter reaches this many step calls (0 = off)
};

struct TreeEdge;

struct TreeNode {
  std::uint64_t n = 1;  // visit count; creation counts as the first visit
  bool terminal = false;
  std::map<Seed, TreeEdge> children;
};

struct TreeEdge {
  double q = 0.0;       // running mean return-to-go through this edge
  std::uint64_t n = 0;  // times taken
  std::unique_ptr<TreeNode> child;
};

struct MctsResult {
  Trajectory best;               // highest-total-reward trajectory ever simulated
  std::vector<Seed> best_seeds;  // seed sequence reproducing it
  std::uint64_t iterations_run = 0;
  std::size_t tree_nodes = 0;
};

// Monte Carlo tree search with progressive widening on the action side.
// Transitions are deterministic (actions fix all stochasticity), so no
// state-side widening is needed: each seed history is one state. Rollouts
// beyond the tree draw uniformly random seeds, i.e. actions sampled from the
// disturbance model itself.
class MctsSearch {
 public:
  MctsSearch(const DpwParams& params, Eigen::VectorXd action_variance, RewardParams reward);

  MctsResult search(Simulator& sim, StepMeter& meter);

  const TreeNode& root() const { return *root_; }

 private:
  DpwParams params_;
  Eigen::VectorXd variance_;
  RewardParams reward_;
  std::unique_ptr<TreeNode> root_;
  std::size_t node_count_ = 0;
};

}  // namespace avstress
