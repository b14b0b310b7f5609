// Copyright 2026 The annealvi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ANNEALVI_MODELS_HPP
#define ANNEALVI_MODELS_HPP

#include <memory>
#include <string>
#include <utility>

#include <Eigen/Core>

#include "annealvi/rng.hpp"

namespace annealvi {

// Latent-variable generative model p(z) p(x|z) with a flat parameter vector
// theta. Gradients are hand-derived per model; implementations must match
// central finite differences of log_joint.
class GenerativeModel {
 public:
  virtual ~GenerativeModel() = default;

  virtual int dim_x() const = 0;
  virtual int dim_z() const = 0;
  virtual int theta_dim() const = 0;
  virtual Eigen::VectorXd theta() const = 0;
  virtual void set_theta(const Eigen::VectorXd& theta) = 0;

  virtual double log_joint(const Eigen::VectorXd& x,
                           const Eigen::VectorXd& z) const = 0;
  virtual Eigen::VectorXd grad_theta_log_joint(
      const Eigen::VectorXd& x, const Eigen::VectorXd& z) const = 0;
  virtual Eigen::VectorXd grad_z_log_joint(const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& z) const = 0;

  // Fused value + latent gradient for the HMC inner loop.
  virtual double log_joint_grad_z(const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& z,
                                  Eigen::VectorXd& grad_out) const {
    grad_out = grad_z_log_joint(x, z);
    return log_joint(x, z);
  }

  // Ancestral sample (x, z); used for synthetic data and BDMC.
  virtual std::pair<Eigen::VectorXd, Eigen::VectorXd> sample_joint(
      RngStream& rng) const = 0;

  virtual std::string family() const = 0;

  virtual std::unique_ptr<GenerativeModel> clone() const = 0;
};

// p(z) = N(0, I), p(x|z) = N(Wz + b, sigma_x^2 I). The marginal and the
// posterior are available in closed form, which makes this the oracle model
// for estimator tests. theta = [vec(W) column-major, b, log_sigma_x].
class LinearGaussianModel final : public GenerativeModel {
 public:
  LinearGaussianModel(Eigen::MatrixXd w, Eigen::VectorXd b,
                      double log_sigma_x);

  // Weights ~ N(0, 1/fan_in), b = 0, log_sigma_x = 0.
  static LinearGaussianModel random_init(int dim_x, int dim_z,
                                         std::uint64_t seed);

  int dim_x() const override { return static_cast<int>(w_.rows()); }
  int dim_z() const override { return static_cast<int>(w_.cols()); }
  int theta_dim() const override {
    return static_cast<int>(w_.size() + b_.size()) + 1;
  }
  Eigen::VectorXd theta() const override;
  void set_theta(const Eigen::VectorXd& theta) override;

  double log_joint(const Eigen::VectorXd& x,
                   const Eigen::VectorXd& z) const override;
  Eigen::VectorXd grad_theta_log_joint(const Eigen::VectorXd& x,
                                       const Eigen::VectorXd& z) const override;
  Eigen::VectorXd grad_z_log_joint(const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& z) const override;
  double log_joint_grad_z(const Eigen::VectorXd& x, const Eigen::VectorXd& z,
                          Eigen::VectorXd& grad_out) const override;
  std::pair<Eigen::VectorXd, Eigen::VectorXd> sample_joint(
      RngStream& rng) const override;
  std::string family() const override { return "linear_gaussian"; }
  std::unique_ptr<GenerativeModel> clone() const override {
    return std::make_unique<LinearGaussianModel>(*this);
  }

  // Exact log N(x; b, W W^T + sigma_x^2 I).
  double log_marginal(const Eigen::VectorXd& x) const;

  // Exact posterior moments: covariance (I + W^T W / sigma_x^2)^{-1}.
  std::pair<Eigen::VectorXd, Eigen::MatrixXd> posterior(
      const Eigen::VectorXd& x) const;

  const Eigen::MatrixXd& w() const { return w_; }
  const Eigen::VectorXd& b() const { return b_; }
  double sigma_x() const { return std::exp(log_sigma_x_); }

 private:
  Eigen::MatrixXd w_;
  Eigen::VectorXd b_;
  double log_sigma_x_;
};

// p(z) = N(0, I); logits = W2 tanh(W1 z + b1) + b2; x_i ~ Bernoulli with
// probability sigmoid(logit_i). theta = [vec(W1), b1, vec(W2), b2].
class BernoulliMlpModel final : public GenerativeModel {
 public:
  BernoulliMlpModel(int dim_x, int dim_z, int hidden_dim);

  static BernoulliMlpModel random_init(int dim_x, int dim_z, int hidden_dim,
                                       std::uint64_t seed);

  int dim_x() const override { return dim_x_; }
  int dim_z() const override { return dim_z_; }
  int hidden_dim() const { return hidden_dim_; }
  int theta_dim() const override;
  Eigen::VectorXd theta() const override;
  void set_theta(const Eigen::VectorXd& theta) override;

  double log_joint(const Eigen::VectorXd& x,
                   const Eigen::VectorXd& z) const override;
  Eigen::VectorXd grad_theta_log_joint(const Eigen::VectorXd& x,
                                       const Eigen::VectorXd& z) const override;
  Eigen::VectorXd grad_z_log_joint(const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& z) const override;
  double log_joint_grad_z(const Eigen::VectorXd& x, const Eigen::VectorXd& z,
                          Eigen::VectorXd& grad_out) const override;
  std::pair<Eigen::VectorXd, Eigen::VectorXd> sample_joint(
      RngStream& rng) const override;
  std::string family() const override { return "bernoulli_mlp"; }
  std::unique_ptr<GenerativeModel> clone() const override {
    return std::make_unique<BernoulliMlpModel>(*this);
  }

 private:
  Eigen::VectorXd logits(const Eigen::VectorXd& z,
                         Eigen::VectorXd* hidden_out) const;

  int dim_x_;
  int dim_z_;
  int hidden_dim_;
  Eigen::MatrixXd w1_;  // hidden x dim_z
  Eigen::VectorXd b1_;
  Eigen::MatrixXd w2_;  // dim_x x hidden
  Eigen::VectorXd b2_;
};

// Amortized diagonal-Gaussian inference model q(z|x) = N(mu(x), sigma(x)^2)
// with a one-hidden-layer tanh encoder and exponentiated log-scales.
// phi = [vec(V), c, vec(A), a, vec(B), s] for
//   h = tanh(V x + c), mu = A h + a, log_sigma = B h + s.
class GaussianInferenceModel {
 public:
  GaussianInferenceModel(int dim_x, int dim_z, int hidden_dim);

  static GaussianInferenceModel random_init(int dim_x, int dim_z,
                                            int hidden_dim,
                                            std::uint64_t seed);

  int dim_x() const { return dim_x_; }
  int dim_z() const { return dim_z_; }
  int hidden_dim() const { return hidden_dim_; }
  int phi_dim() const;
  Eigen::VectorXd phi() const;
  void set_phi(const Eigen::VectorXd& phi);

  // mu(phi, x) and log sigma(phi, x).
  void encode(const Eigen::VectorXd& x, Eigen::VectorXd& mu,
              Eigen::VectorXd& log_sigma) const;

  // mu + sigma .* eps elementwise for a supplied eps.
  Eigen::VectorXd sample(const Eigen::VectorXd& x,
                         const Eigen::VectorXd& eps) const;

  double log_density(const Eigen::VectorXd& z, const Eigen::VectorXd& x) const;
  Eigen::VectorXd grad_z_log_density(const Eigen::VectorXd& z,
                                     const Eigen::VectorXd& x) const;
  double log_density_grad_z(const Eigen::VectorXd& z, const Eigen::VectorXd& x,
                            Eigen::VectorXd& grad_out) const;

  // Backprop through the encoder: given upstream gradients with respect to
  // mu and log_sigma, returns the gradient with respect to phi.
  Eigen::VectorXd grad_phi_from_outputs(const Eigen::VectorXd& x,
                                        const Eigen::VectorXd& grad_mu,
                                        const Eigen::VectorXd& grad_log_sigma)
      const;

 private:
  int dim_x_;
  int dim_z_;
  int hidden_dim_;
  Eigen::MatrixXd v_;   // hidden x dim_x
  Eigen::VectorXd c_;   // hidden
  Eigen::MatrixXd a_;   // dim_z x hidden (mean head)
  Eigen::VectorXd a0_;  // dim_z
  Eigen::MatrixXd s_;   // dim_z x hidden (log-scale head)
  Eigen::VectorXd s0_;  // dim_z
};

// 2-D Gaussian with correlation rho; the analytic target of the implicit
// proposal comparison.
class CorrelatedGaussianTarget {
 public:
  CorrelatedGaussianTarget(Eigen::Vector2d mean, Eigen::Matrix2d covariance);

  static CorrelatedGaussianTarget with_correlation(double rho);

  const Eigen::Vector2d& mean() const { return mean_; }
  const Eigen::Matrix2d& covariance() const { return cov_; }
  const Eigen::Matrix2d& precision() const { return prec_; }

  double log_density(const Eigen::Vector2d& z) const;
  double log_density_grad(const Eigen::Vector2d& z,
                          Eigen::Vector2d& grad_out) const;
  Eigen::Vector2d sample(RngStream& rng) const;

 private:
  Eigen::Vector2d mean_;
  Eigen::Matrix2d cov_;
  Eigen::Matrix2d prec_;
  Eigen::Matrix2d chol_;  // lower Cholesky factor of cov_
  double log_norm_;
};

}  // namespace annealvi

#endif  // ANNEALVI_MODELS_HPP
