#include "avstress/gae.hpp"

#include <cmath>
#include <stdexcept>

namespace avstress {
namespace {

void check_lengths(Eigen::Index total, const std::vector<int>& lengths) {
  Eigen::Index sum = 0;
  for (int len : lengths) {
    if (len <= 0) throw std::invalid_argument("trajectory lengths must be positive");
    sum += len;
  }
  if (sum != total) throw std::invalid_argument("trajectory lengths do not cover the batch");
}

}  // namespace

Eigen::VectorXd discounted_returns(const Eigen::VectorXd& rewards,
                                   const std::vector<int>& lengths, double gamma) {
  check_lengths(rewards.size(), lengths);
  Eigen::VectorXd ret(rewards.size());
  int offset = 0;
  for (int len : lengths) {
    double acc = 0.0;
    for (int t = len - 1; t >= 0; --t) {
      acc = rewards[offset + t] + gamma * acc;
      ret[offset + t] = acc;
    }
    offset += len;
  }
  return ret;
}

Eigen::VectorXd gae_advantages(const Eigen::VectorXd& rewards, const Eigen::VectorXd& values,
                               const std::vector<int>& lengths, const GaeParams& params) {
  if (rewards.size() != values.size()) throw std::invalid_argument("rewards/values mismatch");
  check_lengths(rewards.size(), lengths);

  Eigen::VectorXd adv(rewards.size());
  int offset = 0;
  for (int len : lengths) {
    double acc = 0.0;
    for (int t = len - 1; t >= 0; --t) {
      const double next_value = (t == len - 1) ? 0.0 : values[offset + t + 1];
      const double delta = rewards[offset + t] + params.gamma * next_value - values[offset + t];
      acc = delta + params.gamma * params.lambda * acc;
      adv[offset + t] = acc;
    }
    offset += len;
  }

  if (params.normalize) {
    const double mean = adv.mean();
    adv.array() -= mean;
    const double var = adv.squaredNorm() / static_cast<double>(adv.size());
    const double std = std::sqrt(var);
    if (std > 0.0) adv /= std;
  }
  return adv;
}

}  // namespace avstress
