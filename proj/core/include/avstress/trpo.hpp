#pragma once

#include <functional>

#include "avstress/gaussian_policy.hpp"

namespace avstress {

struct TrpoParams {
  double max_kl = 0.1;          // trust-region radius (mean KL)
  double cg_damping = 0.1;
  int cg_iterations = 10;
  double backtrack_ratio = 0.8;
  int max_backtracks = 10;
};

struct TrpoStats {
  bool accepted = false;
  bool non_finite = false;      // aborted because a loss or KL went non-finite
  double surrogate_improvement = 0.0;
  double kl = 0.0;
  int backtracks = 0;
  double grad_norm = 0.0;
};

// Conjugate gradient for SPD systems given only a matrix-vector product.
Eigen::VectorXd conjugate_gradient(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& avp,
                                   const Eigen::VectorXd& b, int iterations,
                                   double residual_tol = 1e-10);

// One trust-region policy update on a batch: natural-gradient direction from
// conjugate gradient on the damped KL-Hessian, stepped to the trust-region
// boundary, then backtracked until the surrogate improves and the mean KL is
// within the radius. Leaves the policy untouched when no candidate qualifies,
// when the gradient is zero, or when anything goes non-finite.
TrpoStats trpo_update(GaussianPolicy& policy, const Eigen::MatrixXd& states,
                      const Eigen::MatrixXd& actions, const Eigen::VectorXd& advantages,
                      const TrpoParams& params);

}  // namespace avstress
