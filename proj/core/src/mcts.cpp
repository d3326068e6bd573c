#include "avstress/mcts.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace avstress {

EnvAction seed_to_action(Seed seed, const Eigen::VectorXd& variance_diag) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> n01;
  Eigen::VectorXd v(variance_diag.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v[i] = n01(gen) * std::sqrt(variance_diag[i]);
  }
  return EnvAction(std::move(v));
}

MctsSearch::MctsSearch(const DpwParams& params, Eigen::VectorXd action_variance,
                       RewardParams reward)
    : params_(params),
      variance_(std::move(action_variance)),
      reward_(reward),
      root_(std::make_unique<TreeNode>()) {
  node_count_ = 1;
}

MctsResult MctsSearch::search(Simulator& sim, StepMeter& meter) {
  std::mt19937_64 meta(params_.meta_seed);
  std::uniform_int_distribution<Seed> fresh_seed;

  MctsResult result;
  double best_total = -std::numeric_limits<double>::infinity();

  std::vector<Seed> seeds;
  std::vector<double> rewards;
  // Edges walked this iteration, parent node included for visit updates.
  std::vector<std::pair<TreeNode*, TreeEdge*>> path;

  for (int it = 0; it < params_.iterations; ++it) {
    if (params_.budget > 0 && meter.count >= params_.budget) break;

    sim.initialize();
    seeds.clear();
    rewards.clear();
    path.clear();

    TreeNode* node = root_.get();
    int t = 0;
    bool expanded = false;

    // Tree phase: select or widen until a new node is created.
    while (!sim.is_terminal() && t < params_.max_depth && !expanded) {
      Seed seed = 0;
      const double allowance =
          params_.k_action * std::pow(static_cast<double>(node->n), params_.alpha_action);
      if (static_cast<double>(node->children.size()) <= allowance) {
        do {
          seed = fresh_seed(meta);
        } while (node->children.count(seed) > 0);
      } else {
        // UCT over the existing children.
        double best_score = -std::numeric_limits<double>::infinity();
        const double log_n = std::log(static_cast<double>(node->n));
        for (const auto& [s, edge] : node->children) {
          const double score =
              edge.q + params_.exploration_c * std::sqrt(log_n / static_cast<double>(edge.n));
          if (score > best_score) {
            best_score = score;
            seed = s;
          }
        }
      }

      const TransitionOutcome out = metered_step(sim, seed_to_action(seed, variance_), meter);
      rewards.push_back(reward(out, reward_, ++t));
      seeds.push_back(seed);

      TreeEdge& edge = node->children[seed];
      path.emplace_back(node, &edge);
      if (!edge.child) {
        edge.child = std::make_unique<TreeNode>();
        edge.child->terminal = out.terminal;
        ++node_count_;
        expanded = true;  // one new node per iteration, then roll out
      }
      node = edge.child.get();
    }

    // Rollout phase: random seeds to the end of the episode.
    while (!sim.is_terminal() && t < params_.max_depth) {
      const Seed seed = fresh_seed(meta);
      const TransitionOutcome out = metered_step(sim, seed_to_action(seed, variance_), meter);
      rewards.push_back(reward(out, reward_, ++t));
      seeds.push_back(seed);
    }

    // Backpropagate suffix returns along the walked edges (undiscounted).
    double suffix = 0.0;
    for (double r : rewards) suffix += r;
    double consumed = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i) {
      auto [parent, edge] = path[i];
      parent->n += 1;
      edge->n += 1;
      const double ret = suffix - consumed;  // return from this edge's step onward
      edge->q += (ret - edge->q) / static_cast<double>(edge->n);
      consumed += rewards[i];
    }

    if (suffix > best_total) {
      best_total = suffix;
      result.best_seeds = seeds;
    }
    result.iterations_run = static_cast<std::uint64_t>(it) + 1;
  }

  // Reconstruct the best trajectory by deterministic replay of its seeds.
  std::vector<EnvAction> actions;
  actions.reserve(result.best_seeds.size());
  for (Seed s : result.best_seeds) actions.push_back(seed_to_action(s, variance_));
  result.best = replay(sim, actions, reward_);
  result.tree_nodes = node_count_;
  return result;
}

}  // namespace avstress
