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

#ifndef ANNEALVI_HMC_HPP
#define ANNEALVI_HMC_HPP

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "annealvi/rng.hpp"

namespace annealvi {

// Unnormalized log density with optional gradient output. Returns the log
// density at z; when grad is non-null it is filled with the z-gradient.
using LogDensity =
    std::function<double(const Eigen::VectorXd& z, Eigen::VectorXd* grad)>;

// Leapfrog step sizes, one per inverse temperature, plus the number of
// integration steps. Identity mass matrix throughout.
struct HmcConfig {
  std::vector<double> step_sizes;
  int leapfrog_steps = 1;

  static HmcConfig constant(double eps, int leapfrog_steps, int num_temps);

  // |delta_H| above this flags a divergent transition.
  static constexpr double kDivergenceThreshold = 1000.0;

  void validate() const;
  double step_size_at(int t) const;  // t in [1, step_sizes.size()]
};

// Geometric bridge f_beta = f0^(1-beta) * fT^beta between an inference
// density f0 = q(z|x) and a target fT = p(x,z). The potential energy is
// U(z) = -log f_beta(z).
struct TemperedPotential {
  const LogDensity* log_f0 = nullptr;
  const LogDensity* log_fT = nullptr;
  double beta = 0.0;

  // Returns (1-beta) log f0 + beta log fT; fills grad with the z-gradient
  // when non-null. Exact endpoint behavior: beta == 0 evaluates only f0 and
  // beta == 1 only fT.
  double log_density(const Eigen::VectorXd& z, Eigen::VectorXd* grad) const;
};

struct LeapfrogResult {
  Eigen::VectorXd z;
  Eigen::VectorXd p;
  bool ok = true;  // false when a non-finite gradient aborted the trajectory
};

// Velocity-Verlet integration of Hamiltonian dynamics for the potential with
// gradient grad_U: half-step momentum, alternating position/momentum steps,
// final half-step momentum.
LeapfrogResult leapfrog(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad_U,
    const Eigen::VectorXd& z0, const Eigen::VectorXd& p0, double eps, int L);

struct HmcStepResult {
  Eigen::VectorXd z;
  bool accepted = false;
  bool divergent = false;
  double delta_h = 0.0;
};

// One Metropolis-corrected HMC transition that leaves exp(-U) invariant.
// Momentum is resampled from N(0, I); the proposal is accepted with
// probability min(1, exp(-delta_H)). Divergent trajectories count as
// rejections.
HmcStepResult hmc_step(const TemperedPotential& pot, const Eigen::VectorXd& z,
                       double eps, int L, RngStream& rng);

}  // namespace annealvi

#endif  // ANNEALVI_HMC_HPP
