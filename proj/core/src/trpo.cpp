#include "avstress/trpo.hpp"

#include <cmath>

namespace avstress {

Eigen::VectorXd conjugate_gradient(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& avp,
                                   const Eigen::VectorXd& b, int iterations,
                                   double residual_tol) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(b.size());
  Eigen::VectorXd r = b;
  Eigen::VectorXd p = b;
  double rs = r.squaredNorm();
  for (int i = 0; i < iterations; ++i) {
    if (std::sqrt(rs) <= residual_tol) break;
    const Eigen::VectorXd ap = avp(p);
    const double alpha = rs / p.dot(ap);
    x += alpha * p;
    r -= alpha * ap;
    const double rs_next = r.squaredNorm();
    p = r + (rs_next / rs) * p;
    rs = rs_next;
  }
  return x;
}

TrpoStats trpo_update(GaussianPolicy& policy, const Eigen::MatrixXd& states,
                      const Eigen::MatrixXd& actions, const Eigen::VectorXd& advantages,
                      const TrpoParams& params) {
  TrpoStats stats;
  const int n = static_cast<int>(states.cols());

  // Snapshot of the pre-update policy: parameters, means and log-probs.
  const Eigen::VectorXd theta_old = policy.parameters();
  const Eigen::MatrixXd mean_old = policy.mean_batch(states);
  const Eigen::VectorXd log_std_old = policy.log_std();
  const Eigen::VectorXd logp_old = policy.log_prob_batch(states, actions);
  const double surrogate_old = advantages.mean();  // ratios are 1 at theta_old

  const Eigen::VectorXd g =
      policy.weighted_logprob_gradient(states, actions, advantages / n);
  stats.grad_norm = g.norm();
  if (!g.allFinite()) {
    stats.non_finite = true;
    return stats;
  }
  if (stats.grad_norm < 1e-12) return stats;  // nothing to gain: no-op

  const auto fvp = [&](const Eigen::VectorXd& v) {
    return fisher_vector_product(policy, states, v, params.cg_damping);
  };
  const Eigen::VectorXd dir = conjugate_gradient(fvp, g, params.cg_iterations);
  const double shs = dir.dot(fvp(dir));
  if (!(shs > 0.0) || !dir.allFinite()) {
    stats.non_finite = !dir.allFinite();
    return stats;
  }
  const double full_step = std::sqrt(2.0 * params.max_kl / shs);

  double scale = full_step;
  for (int k = 0; k < params.max_backtracks; ++k, scale *= params.backtrack_ratio) {
    policy.set_parameters(theta_old + scale * dir);
    const Eigen::VectorXd logp_new = policy.log_prob_batch(states, actions);
    const double surrogate =
        ((logp_new - logp_old).array().exp() * advantages.array()).mean();
    const double kl = mean_kl(mean_old, log_std_old, policy, states);
    if (!std::isfinite(surrogate) || !std::isfinite(kl)) {
      stats.non_finite = true;
      continue;  // keep shrinking; a smaller step may be finite
    }
    if (surrogate > surrogate_old && kl <= params.max_kl) {
      stats.accepted = true;
      stats.non_finite = false;
      stats.surrogate_improvement = surrogate - surrogate_old;
      stats.kl = kl;
      stats.backtracks = k;
      return stats;
    }
  }

  policy.set_parameters(theta_old);  // no acceptable step: leave policy unchanged
  stats.backtracks = params.max_backtracks;
  return stats;
}

}  // namespace avstress
