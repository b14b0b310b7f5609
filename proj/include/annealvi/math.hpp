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

#ifndef ANNEALVI_MATH_HPP
#define ANNEALVI_MATH_HPP

#include <cmath>
#include <limits>

#include <Eigen/Core>

namespace annealvi {

inline constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

// log(sum(exp(v))) with max subtraction. All -inf input gives -inf.
inline double logsumexp(const Eigen::VectorXd& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += std::exp(v[i] - m);
  return m + std::log(s);
}

// log N(z; 0, I)
inline double log_std_normal(const Eigen::VectorXd& z) {
  return -0.5 * (static_cast<double>(z.size()) * kLogTwoPi + z.squaredNorm());
}

// log N(z; mu, diag(sigma^2)) given log_sigma = log(sigma) elementwise.
inline double log_diag_normal(const Eigen::VectorXd& z,
                              const Eigen::VectorXd& mu,
                              const Eigen::VectorXd& log_sigma) {
  const Eigen::ArrayXd r = (z - mu).array() * (-log_sigma).array().exp();
  return -0.5 * (static_cast<double>(z.size()) * kLogTwoPi + r.square().sum())
         - log_sigma.sum();
}

// log(1 + exp(x)) without overflow.
inline double softplus(double x) {
  return std::log1p(std::exp(-std::abs(x))) + std::max(x, 0.0);
}

inline double sigmoid(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                  : std::exp(x) / (1.0 + std::exp(x));
}

// Mean and standard error of the mean of a sample.
struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  int n = 0;
};

inline MeanSe mean_se(const Eigen::VectorXd& v) {
  MeanSe r;
  r.n = static_cast<int>(v.size());
  if (r.n == 0) return r;
  r.mean = v.mean();
  if (r.n > 1) {
    const double var = (v.array() - r.mean).square().sum() / (r.n - 1);
    r.se = std::sqrt(var / r.n);
  }
  return r;
}

// Standard error of the mean of a correlated sequence via batch means.
inline double batch_means_se(const Eigen::VectorXd& v, int n_batches = 20) {
  const int n = static_cast<int>(v.size());
  if (n < 2 * n_batches) n_batches = std::max(2, n / 2);
  const int len = n / n_batches;
  Eigen::VectorXd means(n_batches);
  for (int b = 0; b < n_batches; ++b)
    means[b] = v.segment(static_cast<Eigen::Index>(b) * len, len).mean();
  const double grand = means.mean();
  const double var_b =
      (means.array() - grand).square().sum() / (n_batches - 1);
  return std::sqrt(var_b / n_batches);
}

}  // namespace annealvi

#endif  // ANNEALVI_MATH_HPP
