#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace avstress {

// Dense multi-layer perceptron over 64-bit reals: tanh on hidden layers,
// linear output. Samples are columns. Gradients are hand-derived; the
// reverse pass consumes an output cotangent, the forward (tangent) pass
// produces the directional derivative of the outputs along a parameter
// direction. Parameters flatten layer by layer as [W (column-major), b].
class Mlp {
 public:
  // sizes = {input, hidden..., output}; weights get an orthogonal init scaled
  // by 1 (hidden) or output_scale (final layer), biases start at zero.
  Mlp(std::vector<int> sizes, std::uint64_t seed, double output_scale = 1.0);

  struct Workspace {
    // h[0] is the input batch; h[l] the activation leaving layer l.
    std::vector<Eigen::MatrixXd> h;
  };

  Eigen::MatrixXd forward(const Eigen::MatrixXd& X) const;
  const Eigen::MatrixXd& forward(const Eigen::MatrixXd& X, Workspace& ws) const;

  // Sum over samples of dL/dparams given dL/doutput per sample (columns of
  // `Gy`), evaluated at the activations in `ws`.
  Eigen::VectorXd backward(const Workspace& ws, Eigen::MatrixXd Gy) const;

  // Directional derivative of the outputs along flat parameter direction `v`.
  Eigen::MatrixXd tangent(const Workspace& ws, const Eigen::VectorXd& v) const;

  int parameter_count() const { return parameter_count_; }
  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd& flat);

  const std::vector<int>& sizes() const { return sizes_; }
  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  int layer_count() const { return static_cast<int>(W_.size()); }

 private:
  std::vector<int> sizes_;
  std::vector<Eigen::MatrixXd> W_;
  std::vector<Eigen::VectorXd> b_;
  int parameter_count_ = 0;
};

}  // namespace avstress
