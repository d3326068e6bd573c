#pragma once

#include <Eigen/Core>
#include <vector>

namespace avstress {

struct GaeParams {
  double gamma = 0.99;
  double lambda = 0.95;
  bool normalize = true;  // shift/scale the batch to zero mean, unit variance
};

// Discounted return-to-go per step. `lengths` partitions the flat reward
// vector into trajectories; every trajectory ends at a terminal state.
Eigen::VectorXd discounted_returns(const Eigen::VectorXd& rewards,
                                   const std::vector<int>& lengths, double gamma);

// Generalized advantage estimates over a flat batch. `values` holds V(s_t)
// per step; the value of each trajectory's terminal successor state is zero.
// With normalize, the returned batch has zero mean and unit variance.
Eigen::VectorXd gae_advantages(const Eigen::VectorXd& rewards, const Eigen::VectorXd& values,
                               const std::vector<int>& lengths, const GaeParams& params);

}  // namespace avstress
