#pragma once

#include <Eigen/Core>
#include <vector>

namespace avstress {

// State-value baseline, linear in hand-built features of (state, step index):
// [s, s^2, 0.01*t, (0.01*t)^2, (0.01*t)^3, 1]. Fit by ridge-regularized least
// squares, so refitting the same data never increases the fitting error.
class LinearBaseline {
 public:
  explicit LinearBaseline(double ridge = 1e-8) : ridge_(ridge) {}

  // states: state_dim x N flat batch, partitioned by `lengths`.
  void fit(const Eigen::MatrixXd& states, const std::vector<int>& lengths,
           const Eigen::VectorXd& targets);

  // Predicted V(s_t); zero everywhere before the first fit.
  Eigen::VectorXd predict(const Eigen::MatrixXd& states, const std::vector<int>& lengths) const;

  double mse(const Eigen::MatrixXd& states, const std::vector<int>& lengths,
             const Eigen::VectorXd& targets) const;

  bool fitted() const { return fitted_; }

 private:
  Eigen::MatrixXd features(const Eigen::MatrixXd& states, const std::vector<int>& lengths) const;

  double ridge_;
  Eigen::VectorXd coef_;
  bool fitted_ = false;
};

}  // namespace avstress
