#include "avstress/baseline.hpp"

#include <Eigen/Cholesky>
#include <stdexcept>

namespace avstress {

Eigen::MatrixXd LinearBaseline::features(const Eigen::MatrixXd& states,
                                         const std::vector<int>& lengths) const {
  const int n = static_cast<int>(states.cols());
  const int d = static_cast<int>(states.rows());
  Eigen::MatrixXd f(2 * d + 4, n);
  f.topRows(d) = states;
  f.middleRows(d, d) = states.array().square();
  int col = 0;
  for (int len : lengths) {
    for (int t = 0; t < len; ++t, ++col) {
      const double scaled = 0.01 * t;
      f(2 * d + 0, col) = scaled;
      f(2 * d + 1, col) = scaled * scaled;
      f(2 * d + 2, col) = scaled * scaled * scaled;
      f(2 * d + 3, col) = 1.0;
    }
  }
  if (col != n) throw std::invalid_argument("trajectory lengths do not cover the batch");
  return f;
}

void LinearBaseline::fit(const Eigen::MatrixXd& states, const std::vector<int>& lengths,
                         const Eigen::VectorXd& targets) {
  const Eigen::MatrixXd f = features(states, lengths);
  const int k = static_cast<int>(f.rows());
  Eigen::MatrixXd gram = f * f.transpose();
  gram.diagonal().array() += ridge_;
  coef_ = gram.ldlt().solve(f * targets);
  if (coef_.size() != k) throw std::runtime_error("baseline fit failed");
  fitted_ = true;
}

Eigen::VectorXd LinearBaseline::predict(const Eigen::MatrixXd& states,
                                        const std::vector<int>& lengths) const {
  if (!fitted_) return Eigen::VectorXd::Zero(states.cols());
  return features(states, lengths).transpose() * coef_;
}

double LinearBaseline::mse(const Eigen::MatrixXd& states, const std::vector<int>& lengths,
                           const Eigen::VectorXd& targets) const {
  const Eigen::VectorXd pred = predict(states, lengths);
  return (pred - targets).squaredNorm() / static_cast<double>(targets.size());
}

}  // namespace avstress
