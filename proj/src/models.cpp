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

#include "annealvi/models.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "annealvi/errors.hpp"
#include "annealvi/math.hpp"

namespace annealvi {

namespace {

void check_dims(const char* who, Eigen::Index got_x, int want_x,
                Eigen::Index got_z, int want_z) {
  if (got_x != want_x || got_z != want_z) {
    throw ContractViolation(std::string(who) + ": expected x of size " +
                            std::to_string(want_x) + " and z of size " +
                            std::to_string(want_z) + ", got " +
                            std::to_string(got_x) + " and " +
                            std::to_string(got_z));
  }
}

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols,
                              double stddev, RngStream& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = stddev * rng.normal();
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// LinearGaussianModel

LinearGaussianModel::LinearGaussianModel(Eigen::MatrixXd w, Eigen::VectorXd b,
                                         double log_sigma_x)
    : w_(std::move(w)), b_(std::move(b)), log_sigma_x_(log_sigma_x) {
  if (w_.rows() != b_.size())
    throw ContractViolation("LinearGaussianModel: W rows must match b size");
}

LinearGaussianModel LinearGaussianModel::random_init(int dim_x, int dim_z,
                                                     std::uint64_t seed) {
  RngStream rng = derive_stream(seed, stream::kInit);
  const double stddev = 1.0 / std::sqrt(static_cast<double>(dim_z));
  return LinearGaussianModel(random_matrix(dim_x, dim_z, stddev, rng),
                             Eigen::VectorXd::Zero(dim_x), 0.0);
}

Eigen::VectorXd LinearGaussianModel::theta() const {
  Eigen::VectorXd t(theta_dim());
  t.head(w_.size()) = Eigen::Map<const Eigen::VectorXd>(w_.data(), w_.size());
  t.segment(w_.size(), b_.size()) = b_;
  t[t.size() - 1] = log_sigma_x_;
  return t;
}

void LinearGaussianModel::set_theta(const Eigen::VectorXd& theta) {
  if (theta.size() != theta_dim())
    throw ContractViolation("LinearGaussianModel::set_theta: bad size");
  Eigen::Map<Eigen::VectorXd>(w_.data(), w_.size()) = theta.head(w_.size());
  b_ = theta.segment(w_.size(), b_.size());
  log_sigma_x_ = theta[theta.size() - 1];
}

double LinearGaussianModel::log_joint(const Eigen::VectorXd& x,
                                      const Eigen::VectorXd& z) const {
  check_dims("LinearGaussianModel::log_joint", x.size(), dim_x(), z.size(),
             dim_z());
  const double inv_var = std::exp(-2.0 * log_sigma_x_);
  const Eigen::VectorXd r = x - w_ * z - b_;
  const double log_prior = log_std_normal(z);
  const double log_lik =
      -0.5 * (dim_x() * kLogTwoPi + inv_var * r.squaredNorm()) -
      dim_x() * log_sigma_x_;
  return log_prior + log_lik;
}

Eigen::VectorXd LinearGaussianModel::grad_theta_log_joint(
    const Eigen::VectorXd& x, const Eigen::VectorXd& z) const {
  check_dims("LinearGaussianModel::grad_theta_log_joint", x.size(), dim_x(),
             z.size(), dim_z());
  const double inv_var = std::exp(-2.0 * log_sigma_x_);
  const Eigen::VectorXd r = x - w_ * z - b_;
  const Eigen::VectorXd rs = inv_var * r;  // dlog/db
  Eigen::VectorXd g(theta_dim());
  const Eigen::MatrixXd gw = rs * z.transpose();
  g.head(w_.size()) = Eigen::Map<const Eigen::VectorXd>(gw.data(), gw.size());
  g.segment(w_.size(), b_.size()) = rs;
  g[g.size() - 1] = -dim_x() + inv_var * r.squaredNorm();
  return g;
}

Eigen::VectorXd LinearGaussianModel::grad_z_log_joint(
    const Eigen::VectorXd& x, const Eigen::VectorXd& z) const {
  check_dims("LinearGaussianModel::grad_z_log_joint", x.size(), dim_x(),
             z.size(), dim_z());
  const double inv_var = std::exp(-2.0 * log_sigma_x_);
  return -z + inv_var * (w_.transpose() * (x - w_ * z - b_));
}

double LinearGaussianModel::log_joint_grad_z(const Eigen::VectorXd& x,
                                             const Eigen::VectorXd& z,
                                             Eigen::VectorXd& grad_out) const {
  check_dims("LinearGaussianModel::log_joint_grad_z", x.size(), dim_x(),
             z.size(), dim_z());
  const double inv_var = std::exp(-2.0 * log_sigma_x_);
  const Eigen::VectorXd r = x - w_ * z - b_;
  grad_out = -z + inv_var * (w_.transpose() * r);
  return log_std_normal(z) -
         0.5 * (dim_x() * kLogTwoPi + inv_var * r.squaredNorm()) -
         dim_x() * log_sigma_x_;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> LinearGaussianModel::sample_joint(
    RngStream& rng) const {
  const Eigen::VectorXd z = rng.normal_vector(dim_z());
  const Eigen::VectorXd x =
      w_ * z + b_ + sigma_x() * rng.normal_vector(dim_x());
  return {x, z};
}

double LinearGaussianModel::log_marginal(const Eigen::VectorXd& x) const {
  if (x.size() != dim_x())
    throw ContractViolation("LinearGaussianModel::log_marginal: bad x size");
  const double var = std::exp(2.0 * log_sigma_x_);
  Eigen::MatrixXd cov = w_ * w_.transpose();
  cov.diagonal().array() += var;
  const Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw EstimationError("log_marginal: covariance not SPD");
  const Eigen::VectorXd d = x - b_;
  const double quad = d.dot(llt.solve(d));
  const double log_det =
      2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return -0.5 * (dim_x() * kLogTwoPi + log_det + quad);
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> LinearGaussianModel::posterior(
    const Eigen::VectorXd& x) const {
  if (x.size() != dim_x())
    throw ContractViolation("LinearGaussianModel::posterior: bad x size");
  const double inv_var = std::exp(-2.0 * log_sigma_x_);
  Eigen::MatrixXd prec = inv_var * (w_.transpose() * w_);
  prec.diagonal().array() += 1.0;
  const Eigen::LLT<Eigen::MatrixXd> llt(prec);
  const Eigen::MatrixXd cov =
      llt.solve(Eigen::MatrixXd::Identity(dim_z(), dim_z()));
  const Eigen::VectorXd mean = llt.solve(inv_var * (w_.transpose() * (x - b_)));
  return {mean, cov};
}

// ---------------------------------------------------------------------------
// BernoulliMlpModel

BernoulliMlpModel::BernoulliMlpModel(int dim_x, int dim_z, int hidden_dim)
    : dim_x_(dim_x),
      dim_z_(dim_z),
      hidden_dim_(hidden_dim),
      w1_(Eigen::MatrixXd::Zero(hidden_dim, dim_z)),
      b1_(Eigen::VectorXd::Zero(hidden_dim)),
      w2_(Eigen::MatrixXd::Zero(dim_x, hidden_dim)),
      b2_(Eigen::VectorXd::Zero(dim_x)) {
  if (dim_x < 1 || dim_z < 1 || hidden_dim < 1)
    throw ContractViolation("BernoulliMlpModel: dimensions must be positive");
}

BernoulliMlpModel BernoulliMlpModel::random_init(int dim_x, int dim_z,
                                                 int hidden_dim,
                                                 std::uint64_t seed) {
  BernoulliMlpModel m(dim_x, dim_z, hidden_dim);
  RngStream rng = derive_stream(seed, stream::kInit);
  m.w1_ = random_matrix(hidden_dim, dim_z, 1.0 / std::sqrt(dim_z), rng);
  m.w2_ = random_matrix(dim_x, hidden_dim, 1.0 / std::sqrt(hidden_dim), rng);
  return m;
}

int BernoulliMlpModel::theta_dim() const {
  return static_cast<int>(w1_.size() + b1_.size() + w2_.size() + b2_.size());
}

Eigen::VectorXd BernoulliMlpModel::theta() const {
  Eigen::VectorXd t(theta_dim());
  Eigen::Index o = 0;
  t.segment(o, w1_.size()) =
      Eigen::Map<const Eigen::VectorXd>(w1_.data(), w1_.size());
  o += w1_.size();
  t.segment(o, b1_.size()) = b1_;
  o += b1_.size();
  t.segment(o, w2_.size()) =
      Eigen::Map<const Eigen::VectorXd>(w2_.data(), w2_.size());
  o += w2_.size();
  t.segment(o, b2_.size()) = b2_;
  return t;
}

void BernoulliMlpModel::set_theta(const Eigen::VectorXd& theta) {
  if (theta.size() != theta_dim())
    throw ContractViolation("BernoulliMlpModel::set_theta: bad size");
  Eigen::Index o = 0;
  Eigen::Map<Eigen::VectorXd>(w1_.data(), w1_.size()) =
      theta.segment(o, w1_.size());
  o += w1_.size();
  b1_ = theta.segment(o, b1_.size());
  o += b1_.size();
  Eigen::Map<Eigen::VectorXd>(w2_.data(), w2_.size()) =
      theta.segment(o, w2_.size());
  o += w2_.size();
  b2_ = theta.segment(o, b2_.size());
}

Eigen::VectorXd BernoulliMlpModel::logits(const Eigen::VectorXd& z,
                                          Eigen::VectorXd* hidden_out) const {
  Eigen::VectorXd h = (w1_ * z + b1_).array().tanh();
  Eigen::VectorXd l = w2_ * h + b2_;
  if (hidden_out) *hidden_out = std::move(h);
  return l;
}

double BernoulliMlpModel::log_joint(const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& z) const {
  check_dims("BernoulliMlpModel::log_joint", x.size(), dim_x_, z.size(),
             dim_z_);
  const Eigen::VectorXd l = logits(z, nullptr);
  double log_lik = 0.0;
  for (Eigen::Index i = 0; i < l.size(); ++i)
    log_lik += x[i] * l[i] - softplus(l[i]);
  return log_std_normal(z) + log_lik;
}

Eigen::VectorXd BernoulliMlpModel::grad_theta_log_joint(
    const Eigen::VectorXd& x, const Eigen::VectorXd& z) const {
  check_dims("BernoulliMlpModel::grad_theta_log_joint", x.size(), dim_x_,
             z.size(), dim_z_);
  Eigen::VectorXd h;
  const Eigen::VectorXd l = logits(z, &h);
  Eigen::VectorXd gl(dim_x_);  // d log_lik / d logits = x - sigmoid(l)
  for (Eigen::Index i = 0; i < l.size(); ++i) gl[i] = x[i] - sigmoid(l[i]);

  const Eigen::VectorXd gh = w2_.transpose() * gl;
  const Eigen::VectorXd ga1 =
      gh.array() * (1.0 - h.array().square());  // through tanh

  Eigen::VectorXd g(theta_dim());
  Eigen::Index o = 0;
  const Eigen::MatrixXd gw1 = ga1 * z.transpose();
  g.segment(o, gw1.size()) =
      Eigen::Map<const Eigen::VectorXd>(gw1.data(), gw1.size());
  o += gw1.size();
  g.segment(o, ga1.size()) = ga1;
  o += ga1.size();
  const Eigen::MatrixXd gw2 = gl * h.transpose();
  g.segment(o, gw2.size()) =
      Eigen::Map<const Eigen::VectorXd>(gw2.data(), gw2.size());
  o += gw2.size();
  g.segment(o, gl.size()) = gl;
  return g;
}

Eigen::VectorXd BernoulliMlpModel::grad_z_log_joint(
    const Eigen::VectorXd& x, const Eigen::VectorXd& z) const {
  Eigen::VectorXd grad;
  log_joint_grad_z(x, z, grad);
  return grad;
}

double BernoulliMlpModel::log_joint_grad_z(const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& z,
                                           Eigen::VectorXd& grad_out) const {
  check_dims("BernoulliMlpModel::log_joint_grad_z", x.size(), dim_x_, z.size(),
             dim_z_);
  Eigen::VectorXd h;
  const Eigen::VectorXd l = logits(z, &h);
  double log_lik = 0.0;
  Eigen::VectorXd gl(dim_x_);
  for (Eigen::Index i = 0; i < l.size(); ++i) {
    log_lik += x[i] * l[i] - softplus(l[i]);
    gl[i] = x[i] - sigmoid(l[i]);
  }
  const Eigen::VectorXd ga1 =
      (w2_.transpose() * gl).array() * (1.0 - h.array().square());
  grad_out = -z + w1_.transpose() * ga1;
  return log_std_normal(z) + log_lik;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> BernoulliMlpModel::sample_joint(
    RngStream& rng) const {
  const Eigen::VectorXd z = rng.normal_vector(dim_z_);
  const Eigen::VectorXd l = logits(z, nullptr);
  Eigen::VectorXd x(dim_x_);
  for (Eigen::Index i = 0; i < x.size(); ++i)
    x[i] = rng.uniform() < sigmoid(l[i]) ? 1.0 : 0.0;
  return {x, z};
}

// ---------------------------------------------------------------------------
// GaussianInferenceModel

GaussianInferenceModel::GaussianInferenceModel(int dim_x, int dim_z,
                                               int hidden_dim)
    : dim_x_(dim_x),
      dim_z_(dim_z),
      hidden_dim_(hidden_dim),
      v_(Eigen::MatrixXd::Zero(hidden_dim, dim_x)),
      c_(Eigen::VectorXd::Zero(hidden_dim)),
      a_(Eigen::MatrixXd::Zero(dim_z, hidden_dim)),
      a0_(Eigen::VectorXd::Zero(dim_z)),
      s_(Eigen::MatrixXd::Zero(dim_z, hidden_dim)),
      s0_(Eigen::VectorXd::Zero(dim_z)) {
  if (dim_x < 1 || dim_z < 1 || hidden_dim < 1)
    throw ContractViolation(
        "GaussianInferenceModel: dimensions must be positive");
}

GaussianInferenceModel GaussianInferenceModel::random_init(
    int dim_x, int dim_z, int hidden_dim, std::uint64_t seed) {
  GaussianInferenceModel m(dim_x, dim_z, hidden_dim);
  RngStream rng = derive_stream(seed, stream::kInit);
  m.v_ = random_matrix(hidden_dim, dim_x, 1.0 / std::sqrt(dim_x), rng);
  m.a_ = random_matrix(dim_z, hidden_dim, 1.0 / std::sqrt(hidden_dim), rng);
  // Log-scale head starts at zero so sigma = 1.
  return m;
}

int GaussianInferenceModel::phi_dim() const {
  return static_cast<int>(v_.size() + c_.size() + a_.size() + a0_.size() +
                          s_.size() + s0_.size());
}

Eigen::VectorXd GaussianInferenceModel::phi() const {
  Eigen::VectorXd p(phi_dim());
  Eigen::Index o = 0;
  auto put_mat = [&](const Eigen::MatrixXd& m) {
    p.segment(o, m.size()) = Eigen::Map<const Eigen::VectorXd>(m.data(),
                                                               m.size());
    o += m.size();
  };
  auto put_vec = [&](const Eigen::VectorXd& v) {
    p.segment(o, v.size()) = v;
    o += v.size();
  };
  put_mat(v_);
  put_vec(c_);
  put_mat(a_);
  put_vec(a0_);
  put_mat(s_);
  put_vec(s0_);
  return p;
}

void GaussianInferenceModel::set_phi(const Eigen::VectorXd& phi) {
  if (phi.size() != phi_dim())
    throw ContractViolation("GaussianInferenceModel::set_phi: bad size");
  Eigen::Index o = 0;
  auto take_mat = [&](Eigen::MatrixXd& m) {
    Eigen::Map<Eigen::VectorXd>(m.data(), m.size()) = phi.segment(o, m.size());
    o += m.size();
  };
  auto take_vec = [&](Eigen::VectorXd& v) {
    v = phi.segment(o, v.size());
    o += v.size();
  };
  take_mat(v_);
  take_vec(c_);
  take_mat(a_);
  take_vec(a0_);
  take_mat(s_);
  take_vec(s0_);
}

void GaussianInferenceModel::encode(const Eigen::VectorXd& x,
                                    Eigen::VectorXd& mu,
                                    Eigen::VectorXd& log_sigma) const {
  if (x.size() != dim_x_)
    throw ContractViolation("GaussianInferenceModel::encode: bad x size");
  const Eigen::VectorXd h = (v_ * x + c_).array().tanh();
  mu = a_ * h + a0_;
  log_sigma = s_ * h + s0_;
}

Eigen::VectorXd GaussianInferenceModel::sample(
    const Eigen::VectorXd& x, const Eigen::VectorXd& eps) const {
  Eigen::VectorXd mu, log_sigma;
  encode(x, mu, log_sigma);
  return mu.array() + log_sigma.array().exp() * eps.array();
}

double GaussianInferenceModel::log_density(const Eigen::VectorXd& z,
                                           const Eigen::VectorXd& x) const {
  Eigen::VectorXd mu, log_sigma;
  encode(x, mu, log_sigma);
  return log_diag_normal(z, mu, log_sigma);
}

Eigen::VectorXd GaussianInferenceModel::grad_z_log_density(
    const Eigen::VectorXd& z, const Eigen::VectorXd& x) const {
  Eigen::VectorXd mu, log_sigma;
  encode(x, mu, log_sigma);
  return -((z - mu).array() * (-2.0 * log_sigma).array().exp()).matrix();
}

double GaussianInferenceModel::log_density_grad_z(
    const Eigen::VectorXd& z, const Eigen::VectorXd& x,
    Eigen::VectorXd& grad_out) const {
  Eigen::VectorXd mu, log_sigma;
  encode(x, mu, log_sigma);
  const Eigen::ArrayXd inv_sigma = (-log_sigma).array().exp();
  const Eigen::ArrayXd r = (z - mu).array() * inv_sigma;
  grad_out = (-r * inv_sigma).matrix();
  return -0.5 * (dim_z_ * kLogTwoPi + r.square().sum()) - log_sigma.sum();
}

Eigen::VectorXd GaussianInferenceModel::grad_phi_from_outputs(
    const Eigen::VectorXd& x, const Eigen::VectorXd& grad_mu,
    const Eigen::VectorXd& grad_log_sigma) const {
  const Eigen::VectorXd h = (v_ * x + c_).array().tanh();
  const Eigen::VectorXd gh =
      a_.transpose() * grad_mu + s_.transpose() * grad_log_sigma;
  const Eigen::VectorXd gpre = gh.array() * (1.0 - h.array().square());

  Eigen::VectorXd g(phi_dim());
  Eigen::Index o = 0;
  auto put = [&](const Eigen::MatrixXd& m) {
    g.segment(o, m.size()) = Eigen::Map<const Eigen::VectorXd>(m.data(),
                                                               m.size());
    o += m.size();
  };
  const Eigen::MatrixXd gv = gpre * x.transpose();
  put(gv);
  g.segment(o, gpre.size()) = gpre;
  o += gpre.size();
  const Eigen::MatrixXd ga = grad_mu * h.transpose();
  put(ga);
  g.segment(o, grad_mu.size()) = grad_mu;
  o += grad_mu.size();
  const Eigen::MatrixXd gs = grad_log_sigma * h.transpose();
  put(gs);
  g.segment(o, grad_log_sigma.size()) = grad_log_sigma;
  return g;
}

// ---------------------------------------------------------------------------
// CorrelatedGaussianTarget

CorrelatedGaussianTarget::CorrelatedGaussianTarget(Eigen::Vector2d mean,
                                                   Eigen::Matrix2d covariance)
    : mean_(std::move(mean)), cov_(std::move(covariance)) {
  if ((cov_ - cov_.transpose()).norm() > 1e-12)
    throw ContractViolation("CorrelatedGaussianTarget: non-symmetric cov");
  const Eigen::LLT<Eigen::Matrix2d> llt(cov_);
  if (llt.info() != Eigen::Success)
    throw ContractViolation("CorrelatedGaussianTarget: cov not SPD");
  chol_ = llt.matrixL();
  prec_ = llt.solve(Eigen::Matrix2d::Identity());
  log_norm_ = -kLogTwoPi - std::log(chol_(0, 0) * chol_(1, 1));
}

CorrelatedGaussianTarget CorrelatedGaussianTarget::with_correlation(
    double rho) {
  Eigen::Matrix2d cov;
  cov << 1.0, rho, rho, 1.0;
  return CorrelatedGaussianTarget(Eigen::Vector2d::Zero(), cov);
}

double CorrelatedGaussianTarget::log_density(const Eigen::Vector2d& z) const {
  const Eigen::Vector2d d = z - mean_;
  return log_norm_ - 0.5 * d.dot(prec_ * d);
}

double CorrelatedGaussianTarget::log_density_grad(
    const Eigen::Vector2d& z, Eigen::Vector2d& grad_out) const {
  const Eigen::Vector2d d = z - mean_;
  const Eigen::Vector2d pd = prec_ * d;
  grad_out = -pd;
  return log_norm_ - 0.5 * d.dot(pd);
}

Eigen::Vector2d CorrelatedGaussianTarget::sample(RngStream& rng) const {
  Eigen::Vector2d eps(rng.normal(), rng.normal());
  return mean_ + chol_ * eps;
}

}  // namespace annealvi
