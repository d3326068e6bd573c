#include "avstress/mlp.hpp"

#include <Eigen/QR>
#include <random>
#include <stdexcept>

namespace avstress {
namespace {

// Orthogonal-ish weight block: QR of a Gaussian matrix, columns sign-fixed so
// the factorization is canonical, scaled by `gain`.
Eigen::MatrixXd orthogonal_init(int rows, int cols, std::mt19937_64& gen, double gain) {
  const int big = std::max(rows, cols);
  const int small = std::min(rows, cols);
  Eigen::MatrixXd a(big, small);
  std::normal_distribution<double> n01;
  for (int j = 0; j < small; ++j) {
    for (int i = 0; i < big; ++i) a(i, j) = n01(gen);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(big, small);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(small);
  for (int j = 0; j < small; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  Eigen::MatrixXd w = (rows >= cols) ? q : Eigen::MatrixXd(q.transpose());
  return gain * w;
}

}  // namespace

Mlp::Mlp(std::vector<int> sizes, std::uint64_t seed, double output_scale)
    : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("Mlp needs at least input and output sizes");
  for (int s : sizes_) {
    if (s <= 0) throw std::invalid_argument("Mlp layer sizes must be positive");
  }
  std::mt19937_64 gen(seed);
  const int layers = static_cast<int>(sizes_.size()) - 1;
  W_.reserve(layers);
  b_.reserve(layers);
  for (int l = 0; l < layers; ++l) {
    const double gain = (l == layers - 1) ? output_scale : 1.0;
    W_.push_back(orthogonal_init(sizes_[l + 1], sizes_[l], gen, gain));
    b_.push_back(Eigen::VectorXd::Zero(sizes_[l + 1]));
    parameter_count_ += sizes_[l + 1] * sizes_[l] + sizes_[l + 1];
  }
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& X) const {
  Workspace ws;
  return forward(X, ws);
}

const Eigen::MatrixXd& Mlp::forward(const Eigen::MatrixXd& X, Workspace& ws) const {
  if (X.rows() != input_dim()) throw std::invalid_argument("Mlp input dimension mismatch");
  const int layers = layer_count();
  ws.h.resize(layers + 1);
  ws.h[0] = X;
  for (int l = 0; l < layers; ++l) {
    Eigen::MatrixXd z = (W_[l] * ws.h[l]).colwise() + b_[l];
    ws.h[l + 1] = (l == layers - 1) ? std::move(z) : z.array().tanh().matrix();
  }
  return ws.h.back();
}

Eigen::VectorXd Mlp::backward(const Workspace& ws, Eigen::MatrixXd Gy) const {
  const int layers = layer_count();
  Eigen::VectorXd grad(parameter_count_);
  // Walk layers top-down, writing each layer's slice of the flat gradient.
  int offset = parameter_count_;
  Eigen::MatrixXd gz = std::move(Gy);  // cotangent at the current layer's pre-activation
  for (int l = layers - 1; l >= 0; --l) {
    const Eigen::MatrixXd& hin = ws.h[l];
    const int nw = static_cast<int>(W_[l].size());
    const int nb = static_cast<int>(b_[l].size());
    offset -= nw + nb;
    Eigen::MatrixXd gw = gz * hin.transpose();
    grad.segment(offset, nw) = Eigen::Map<const Eigen::VectorXd>(gw.data(), nw);
    grad.segment(offset + nw, nb) = gz.rowwise().sum();
    if (l > 0) {
      Eigen::MatrixXd gh = W_[l].transpose() * gz;
      gz = gh.array() * (1.0 - ws.h[l].array().square());
    }
  }
  return grad;
}

Eigen::MatrixXd Mlp::tangent(const Workspace& ws, const Eigen::VectorXd& v) const {
  if (v.size() != parameter_count_) throw std::invalid_argument("tangent dimension mismatch");
  const int layers = layer_count();
  const int n = static_cast<int>(ws.h[0].cols());
  Eigen::MatrixXd dh = Eigen::MatrixXd::Zero(sizes_[0], n);
  int offset = 0;
  for (int l = 0; l < layers; ++l) {
    const int rows = sizes_[l + 1];
    const int cols = sizes_[l];
    const Eigen::Map<const Eigen::MatrixXd> dW(v.data() + offset, rows, cols);
    offset += rows * cols;
    const Eigen::Map<const Eigen::VectorXd> db(v.data() + offset, rows);
    offset += rows;
    Eigen::MatrixXd dz = (dW * ws.h[l] + W_[l] * dh).colwise() + db;
    dh = (l == layers - 1)
             ? std::move(dz)
             : (dz.array() * (1.0 - ws.h[l + 1].array().square())).matrix();
  }
  return dh;
}

Eigen::VectorXd Mlp::parameters() const {
  Eigen::VectorXd flat(parameter_count_);
  int offset = 0;
  for (int l = 0; l < layer_count(); ++l) {
    const int nw = static_cast<int>(W_[l].size());
    flat.segment(offset, nw) = Eigen::Map<const Eigen::VectorXd>(W_[l].data(), nw);
    offset += nw;
    flat.segment(offset, b_[l].size()) = b_[l];
    offset += static_cast<int>(b_[l].size());
  }
  return flat;
}

void Mlp::set_parameters(const Eigen::VectorXd& flat) {
  if (flat.size() != parameter_count_) throw std::invalid_argument("parameter count mismatch");
  int offset = 0;
  for (int l = 0; l < layer_count(); ++l) {
    const int nw = static_cast<int>(W_[l].size());
    W_[l] = Eigen::Map<const Eigen::MatrixXd>(flat.data() + offset, W_[l].rows(), W_[l].cols());
    offset += nw;
    b_[l] = flat.segment(offset, b_[l].size());
    offset += static_cast<int>(b_[l].size());
  }
}

}  // namespace avstress
