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

#include "annealvi/hmc.hpp"

#include <cmath>
#include <limits>

#include "annealvi/errors.hpp"

namespace annealvi {

HmcConfig HmcConfig::constant(double eps, int leapfrog_steps, int num_temps) {
  HmcConfig cfg;
  cfg.step_sizes.assign(static_cast<std::size_t>(num_temps), eps);
  cfg.leapfrog_steps = leapfrog_steps;
  cfg.validate();
  return cfg;
}

void HmcConfig::validate() const {
  if (leapfrog_steps < 1)
    throw ContractViolation("HmcConfig: leapfrog_steps must be >= 1");
  for (double eps : step_sizes)
    if (!(eps > 0.0))
      throw ContractViolation("HmcConfig: step sizes must be positive");
}

double HmcConfig::step_size_at(int t) const {
  if (t < 1 || t > static_cast<int>(step_sizes.size()))
    throw ContractViolation("HmcConfig: temperature index out of range");
  return step_sizes[static_cast<std::size_t>(t) - 1];
}

double TemperedPotential::log_density(const Eigen::VectorXd& z,
                                      Eigen::VectorXd* grad) const {
  if (beta < 0.0 || beta > 1.0)
    throw ContractViolation("TemperedPotential: beta must be in [0, 1]");
  if (beta == 0.0) return (*log_f0)(z, grad);
  if (beta == 1.0) return (*log_fT)(z, grad);
  Eigen::VectorXd g0, gT;
  const double v0 = (*log_f0)(z, grad ? &g0 : nullptr);
  const double vT = (*log_fT)(z, grad ? &gT : nullptr);
  if (grad) *grad = (1.0 - beta) * g0 + beta * gT;
  return (1.0 - beta) * v0 + beta * vT;
}

LeapfrogResult leapfrog(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad_U,
    const Eigen::VectorXd& z0, const Eigen::VectorXd& p0, double eps, int L) {
  if (!(eps > 0.0)) throw ContractViolation("leapfrog: eps must be positive");
  if (L < 1) throw ContractViolation("leapfrog: L must be >= 1");

  LeapfrogResult res;
  res.z = z0;
  res.p = p0;

  Eigen::VectorXd g = grad_U(res.z);
  if (!g.allFinite()) {
    res.ok = false;
    return res;
  }
  res.p -= 0.5 * eps * g;
  for (int l = 0; l < L; ++l) {
    res.z += eps * res.p;
    g = grad_U(res.z);
    if (!g.allFinite()) {
      res.ok = false;
      return res;
    }
    // Full momentum step between position steps, half step at the end.
    res.p -= (l + 1 < L ? eps : 0.5 * eps) * g;
  }
  return res;
}

HmcStepResult hmc_step(const TemperedPotential& pot, const Eigen::VectorXd& z,
                       double eps, int L, RngStream& rng) {
  const Eigen::VectorXd p0 = rng.normal_vector(z.size());

  auto grad_U = [&pot](const Eigen::VectorXd& q) {
    Eigen::VectorXd g;
    pot.log_density(q, &g);
    return Eigen::VectorXd(-g);
  };

  const double h0 = -pot.log_density(z, nullptr) + 0.5 * p0.squaredNorm();
  const LeapfrogResult traj = leapfrog(grad_U, z, p0, eps, L);

  HmcStepResult res;
  res.z = z;

  double delta_h = std::numeric_limits<double>::infinity();
  if (traj.ok) {
    const double h1 =
        -pot.log_density(traj.z, nullptr) + 0.5 * traj.p.squaredNorm();
    delta_h = h1 - h0;
  }
  res.delta_h = delta_h;

  // One uniform is consumed per step regardless of the outcome so that the
  // stream position depends only on the step count.
  const double u = rng.uniform();

  if (!std::isfinite(delta_h) ||
      std::abs(delta_h) > HmcConfig::kDivergenceThreshold) {
    res.divergent = true;
    return res;
  }
  if (u < std::exp(-delta_h)) {
    res.z = traj.z;
    res.accepted = true;
  }
  return res;
}

}  // namespace annealvi
