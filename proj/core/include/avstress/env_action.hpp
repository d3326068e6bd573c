#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <utility>

namespace avstress {

// Environment disturbance applied for one simulation step. Laid out as one
// 6-component block per pedestrian: [a_x, a_y, eps_vx, eps_vy, eps_x, eps_y].
// The accelerations drive pedestrian dynamics; the eps components corrupt
// only the measurements seen by the system under test, never the dynamics.
class EnvAction {
 public:
  static constexpr int kBlock = 6;

  EnvAction() = default;
  explicit EnvAction(Eigen::VectorXd values) : v_(std::move(values)) {
    if (v_.size() % kBlock != 0) {
      throw std::invalid_argument("EnvAction dimension must be a multiple of 6");
    }
  }

  static EnvAction zeros(int pedestrians) {
    return EnvAction(Eigen::VectorXd::Zero(kBlock * pedestrians));
  }

  int dimension() const { return static_cast<int>(v_.size()); }
  int pedestrians() const { return dimension() / kBlock; }

  double ax(int i) const { return v_[kBlock * i + 0]; }
  double ay(int i) const { return v_[kBlock * i + 1]; }
  double eps_vx(int i) const { return v_[kBlock * i + 2]; }
  double eps_vy(int i) const { return v_[kBlock * i + 3]; }
  double eps_x(int i) const { return v_[kBlock * i + 4]; }
  double eps_y(int i) const { return v_[kBlock * i + 5]; }

  const Eigen::VectorXd& vector() const { return v_; }
  Eigen::VectorXd& vector() { return v_; }

 private:
  Eigen::VectorXd v_;
};

// Copy of `a` with every measurement-noise component zeroed; the pedestrian
// accelerations are kept.
inline EnvAction zero_noise(const EnvAction& a) {
  Eigen::VectorXd v = a.vector();
  for (int i = 0; i < a.pedestrians(); ++i) {
    v.segment<4>(EnvAction::kBlock * i + 2).setZero();
  }
  return EnvAction(std::move(v));
}

}  // namespace avstress
