#include "avstress/gaussian_policy.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace avstress {
namespace {

constexpr char kMagic[8] = {'A', 'V', 'S', 'P', 'O', 'L', 'v', '1'};

std::vector<int> make_sizes(int state_dim, int action_dim, const std::vector<int>& hidden) {
  std::vector<int> sizes;
  sizes.push_back(state_dim);
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(action_dim);
  return sizes;
}

}  // namespace

GaussianPolicy::GaussianPolicy(int state_dim, int action_dim, const std::vector<int>& hidden,
                               std::uint64_t seed)
    // Small final layer: the initial mean is near zero, so exploration comes
    // from the unit initial standard deviation rather than the untrained net.
    : net_(make_sizes(state_dim, action_dim, hidden), seed, 0.01),
      log_std_(Eigen::VectorXd::Zero(action_dim)) {}

Eigen::VectorXd GaussianPolicy::parameters() const {
  Eigen::VectorXd flat(parameter_count());
  flat.head(net_.parameter_count()) = net_.parameters();
  flat.tail(action_dim()) = log_std_;
  return flat;
}

void GaussianPolicy::set_parameters(const Eigen::VectorXd& flat) {
  if (flat.size() != parameter_count()) throw std::invalid_argument("parameter count mismatch");
  net_.set_parameters(flat.head(net_.parameter_count()));
  log_std_ = flat.tail(action_dim());
}

Eigen::VectorXd GaussianPolicy::mean(const Eigen::VectorXd& s) const {
  return net_.forward(s);
}

Eigen::VectorXd GaussianPolicy::sample(const Eigen::VectorXd& s, std::mt19937_64& gen) const {
  std::normal_distribution<double> n01;
  Eigen::VectorXd a = mean(s);
  for (int j = 0; j < action_dim(); ++j) a[j] += std::exp(log_std_[j]) * n01(gen);
  return a;
}

double GaussianPolicy::log_prob(const Eigen::VectorXd& s, const Eigen::VectorXd& a) const {
  return log_prob_batch(s, a)[0];
}

Eigen::VectorXd GaussianPolicy::log_prob_batch(const Eigen::MatrixXd& S,
                                               const Eigen::MatrixXd& A) const {
  const Eigen::MatrixXd mu = net_.forward(S);
  const Eigen::ArrayXd inv_std = (-log_std_).array().exp();
  Eigen::MatrixXd z = A - mu;
  z.array().colwise() *= inv_std;
  const double log_norm =
      log_std_.sum() + 0.5 * action_dim() * std::log(2.0 * std::numbers::pi);
  return (-0.5 * z.array().square().colwise().sum() - log_norm).transpose();
}

Eigen::VectorXd GaussianPolicy::grad_log_prob(const Eigen::VectorXd& s,
                                              const Eigen::VectorXd& a) const {
  return weighted_logprob_gradient(s, a, Eigen::VectorXd::Ones(1));
}

Eigen::VectorXd GaussianPolicy::weighted_logprob_gradient(const Eigen::MatrixXd& S,
                                                          const Eigen::MatrixXd& A,
                                                          const Eigen::VectorXd& w) const {
  Mlp::Workspace ws;
  const Eigen::MatrixXd& mu = net_.forward(S, ws);
  const Eigen::ArrayXd inv_var = (-2.0 * log_std_).array().exp();

  Eigen::MatrixXd diff = A - mu;                       // action residuals
  Eigen::MatrixXd gy = diff;
  gy.array().colwise() *= inv_var;                     // d logp / d mu
  gy.array().rowwise() *= w.transpose().array();

  Eigen::VectorXd grad(parameter_count());
  grad.head(net_.parameter_count()) = net_.backward(ws, std::move(gy));
  // d logp / d log_std_j = (a_j - mu_j)^2 / sigma_j^2 - 1, weighted per sample.
  Eigen::MatrixXd sq = diff.array().square();
  sq.array().colwise() *= inv_var;
  grad.tail(action_dim()) =
      (sq.array().rowwise() * w.transpose().array()).rowwise().sum().matrix() -
      w.sum() * Eigen::VectorXd::Ones(action_dim());
  return grad;
}

double mean_kl(const Eigen::MatrixXd& mean_p, const Eigen::VectorXd& log_std_p,
               const Eigen::MatrixXd& mean_q, const Eigen::VectorXd& log_std_q) {
  const int n = static_cast<int>(mean_p.cols());
  const Eigen::ArrayXd var_p = (2.0 * log_std_p).array().exp();
  const Eigen::ArrayXd inv_var_q = (-2.0 * log_std_q).array().exp();
  const Eigen::ArrayXd log_ratio = log_std_q.array() - log_std_p.array();
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const Eigen::ArrayXd diff2 = (mean_p.col(i) - mean_q.col(i)).array().square();
    acc += (log_ratio + 0.5 * (var_p + diff2) * inv_var_q - 0.5).sum();
  }
  return acc / n;
}

double mean_kl(const Eigen::MatrixXd& mean_p, const Eigen::VectorXd& log_std_p,
               const GaussianPolicy& q, const Eigen::MatrixXd& S) {
  return mean_kl(mean_p, log_std_p, q.mean_batch(S), q.log_std());
}

Eigen::VectorXd mean_kl_gradient(const Eigen::MatrixXd& mean_p, const Eigen::VectorXd& log_std_p,
                                 const GaussianPolicy& q, const Eigen::MatrixXd& S) {
  const int n = static_cast<int>(S.cols());
  Mlp::Workspace ws;
  const Eigen::MatrixXd& mu_q = q.net().forward(S, ws);
  const Eigen::ArrayXd var_p = (2.0 * log_std_p).array().exp();
  const Eigen::ArrayXd inv_var_q = (-2.0 * q.log_std()).array().exp();

  // d KL / d mu_q = (mu_q - mu_p) / sigma_q^2, averaged over states.
  Eigen::MatrixXd gy = (mu_q - mean_p) / n;
  gy.array().colwise() *= inv_var_q;

  Eigen::VectorXd grad(q.parameter_count());
  grad.head(q.net().parameter_count()) = q.net().backward(ws, std::move(gy));

  // d KL / d log_std_q_j = 1 - (var_p_j + diff_j^2) / var_q_j, averaged.
  Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(q.action_dim());
  for (int i = 0; i < n; ++i) {
    acc += (mean_p.col(i) - mu_q.col(i)).array().square();
  }
  grad.tail(q.action_dim()) =
      (1.0 - (var_p + acc / n) * inv_var_q).matrix();
  return grad;
}

Eigen::VectorXd fisher_vector_product(const GaussianPolicy& pol, const Eigen::MatrixXd& S,
                                      const Eigen::VectorXd& v, double damping) {
  if (v.size() != pol.parameter_count()) throw std::invalid_argument("FVP dimension mismatch");
  const int np = pol.net().parameter_count();
  const int n = static_cast<int>(S.cols());
  Mlp::Workspace ws;
  pol.net().forward(S, ws);
  // Mean-parameter block: (1/N) sum_i J_i^T Sigma^{-1} J_i v.
  Eigen::MatrixXd jv = pol.net().tangent(ws, v.head(np));
  const Eigen::ArrayXd inv_var = (-2.0 * pol.log_std()).array().exp();
  jv.array().colwise() *= inv_var;
  Eigen::VectorXd out(v.size());
  out.head(np) = pol.net().backward(ws, std::move(jv)) / n;
  // Each log_std direction curves the KL by exactly 2, state-independently.
  out.tail(pol.action_dim()) = 2.0 * v.tail(pol.action_dim());
  out += damping * v;
  return out;
}

void save_checkpoint(const GaussianPolicy& pol, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path);
  out.write(kMagic, sizeof(kMagic));
  const std::vector<int>& sizes = pol.net().sizes();
  const std::uint32_t n_sizes = static_cast<std::uint32_t>(sizes.size());
  out.write(reinterpret_cast<const char*>(&n_sizes), sizeof(n_sizes));
  for (int s : sizes) {
    const std::uint32_t u = static_cast<std::uint32_t>(s);
    out.write(reinterpret_cast<const char*>(&u), sizeof(u));
  }
  const Eigen::VectorXd flat = pol.parameters();
  out.write(reinterpret_cast<const char*>(flat.data()),
            static_cast<std::streamsize>(flat.size() * sizeof(double)));
  if (!out) throw std::runtime_error("checkpoint write failed: " + path);
}

GaussianPolicy load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("not a policy checkpoint: " + path);
  }
  std::uint32_t n_sizes = 0;
  in.read(reinterpret_cast<char*>(&n_sizes), sizeof(n_sizes));
  if (!in || n_sizes < 2 || n_sizes > 64) throw std::runtime_error("corrupt checkpoint header");
  std::vector<int> sizes(n_sizes);
  for (std::uint32_t i = 0; i < n_sizes; ++i) {
    std::uint32_t u = 0;
    in.read(reinterpret_cast<char*>(&u), sizeof(u));
    if (!in || u == 0 || u > 1'000'000) throw std::runtime_error("corrupt checkpoint header");
    sizes[i] = static_cast<int>(u);
  }
  const std::vector<int> hidden(sizes.begin() + 1, sizes.end() - 1);
  GaussianPolicy pol(sizes.front(), sizes.back(), hidden, 0);
  Eigen::VectorXd flat(pol.parameter_count());
  in.read(reinterpret_cast<char*>(flat.data()),
          static_cast<std::streamsize>(flat.size() * sizeof(double)));
  if (!in || in.gcount() != static_cast<std::streamsize>(flat.size() * sizeof(double))) {
    throw std::runtime_error("checkpoint truncated: " + path);
  }
  pol.set_parameters(flat);
  return pol;
}

}  // namespace avstress
