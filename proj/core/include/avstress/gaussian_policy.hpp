#pragma once

#include <random>
#include <string>

#include "avstress/mlp.hpp"

namespace avstress {

// Diagonal Gaussian over actions: the mean is a state-conditioned Mlp, the
// log standard deviations are free state-independent parameters (init 0).
// Flat parameter layout: [mean-net parameters..., log_std...].
class GaussianPolicy {
 public:
  GaussianPolicy(int state_dim, int action_dim, const std::vector<int>& hidden,
                 std::uint64_t seed);

  int state_dim() const { return net_.input_dim(); }
  int action_dim() const { return net_.output_dim(); }
  int parameter_count() const { return net_.parameter_count() + action_dim(); }

  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd& flat);

  Eigen::VectorXd mean(const Eigen::VectorXd& s) const;
  Eigen::MatrixXd mean_batch(const Eigen::MatrixXd& S) const { return net_.forward(S); }
  const Eigen::VectorXd& log_std() const { return log_std_; }

  Eigen::VectorXd sample(const Eigen::VectorXd& s, std::mt19937_64& gen) const;
  double log_prob(const Eigen::VectorXd& s, const Eigen::VectorXd& a) const;
  Eigen::VectorXd log_prob_batch(const Eigen::MatrixXd& S, const Eigen::MatrixXd& A) const;

  // d log pi(a|s) / d params for a single sample.
  Eigen::VectorXd grad_log_prob(const Eigen::VectorXd& s, const Eigen::VectorXd& a) const;

  // d/d params of sum_i w_i log pi(a_i|s_i).
  Eigen::VectorXd weighted_logprob_gradient(const Eigen::MatrixXd& S, const Eigen::MatrixXd& A,
                                            const Eigen::VectorXd& w) const;

  const Mlp& net() const { return net_; }

 private:
  Mlp net_;
  Eigen::VectorXd log_std_;
};

// KL(p || q) between diagonal Gaussians with per-state means, averaged over
// states (columns).
double mean_kl(const Eigen::MatrixXd& mean_p, const Eigen::VectorXd& log_std_p,
               const Eigen::MatrixXd& mean_q, const Eigen::VectorXd& log_std_q);

// Mean KL(p || q(theta)) where p is a frozen (mean, log_std) snapshot and q is
// the policy evaluated on S; and its gradient with respect to q's parameters.
double mean_kl(const Eigen::MatrixXd& mean_p, const Eigen::VectorXd& log_std_p,
               const GaussianPolicy& q, const Eigen::MatrixXd& S);
Eigen::VectorXd mean_kl_gradient(const Eigen::MatrixXd& mean_p, const Eigen::VectorXd& log_std_p,
                                 const GaussianPolicy& q, const Eigen::MatrixXd& S);

// KL-Hessian (Fisher) vector product at the policy's current parameters,
// averaged over the states in S, plus damping * v.
Eigen::VectorXd fisher_vector_product(const GaussianPolicy& pol, const Eigen::MatrixXd& S,
                                      const Eigen::VectorXd& v, double damping);

// Checkpoints: little-endian header of layer sizes (state, hidden..., action)
// followed by the flat 64-bit-real parameter array (net, then log_std).
void save_checkpoint(const GaussianPolicy& pol, const std::string& path);
GaussianPolicy load_checkpoint(const std::string& path);

}  // namespace avstress
