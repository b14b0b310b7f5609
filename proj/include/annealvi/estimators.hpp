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

#ifndef ANNEALVI_ESTIMATORS_HPP
#define ANNEALVI_ESTIMATORS_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "annealvi/hmc.hpp"
#include "annealvi/models.hpp"

namespace annealvi {

// Monotone inverse temperatures beta_0 = 0 <= ... <= beta_T = 1 bridging the
// inference model with the posterior.
struct TemperatureSchedule {
  std::vector<double> betas;

  int num_temps() const { return static_cast<int>(betas.size()) - 1; }
  void validate() const;

  // beta_t = t / T.
  static TemperatureSchedule linear(int num_temps);
  // 0 = beta_0 < beta_1 = ... = beta_T = 1 (the MH-HMC baseline's choice).
  static TemperatureSchedule mh_hmc(int num_temps);
};

// Output of one annealed importance sampling run of K chains.
struct AisRunResult {
  std::vector<Eigen::VectorXd> samples;  // final state of each chain
  Eigen::VectorXd log_weights;
  Eigen::VectorXd normalized_weights;
  std::vector<double> acceptance_rates;  // per transition temperature
  double ess = 0.0;
  int divergences = 0;

  double mean_acceptance() const;
};

struct GradientEstimate {
  Eigen::VectorXd grad_theta;
  AisRunResult diagnostics;
};

// Stable softmax of log weights; the result sums to one. Throws
// EstimationError when no finite entry exists.
Eigen::VectorXd normalize_log_weights(const Eigen::VectorXd& log_w);

// (sum w)^2 / sum w^2 computed in log space; in [1, K] for K weights.
double effective_sample_size(const Eigen::VectorXd& log_w);

// The generic annealing engine. Chains start at init(k, rng) distributed as
// the density at betas[0] and move through the bridge defined by the
// endpoint densities; weights accumulate (beta_t - beta_{t-1}) *
// [log fT - log f0] evaluated at z^{t-1}, so the same code runs forward
// (0 -> 1) and reverse (1 -> 0) paths. Transitions happen at beta_1 ..
// beta_{T-1}, plus beta_T when final_transition is set. Chain k draws from
// the stream (seed, kChain, k).
AisRunResult anneal_run(
    const LogDensity& log_f0, const LogDensity& log_fT,
    const std::vector<double>& betas,
    const std::function<Eigen::VectorXd(int, RngStream&)>& init, int K,
    const HmcConfig& hmc, bool final_transition, std::uint64_t seed);

// Algorithm: K chains start from q(z|x) and anneal toward p(x, .) through
// the given schedule. The result's expected raw weight is the marginal
// likelihood p(x).
AisRunResult ais_run(const GenerativeModel& gen,
                     const GaussianInferenceModel& inf,
                     const Eigen::VectorXd& x, int K,
                     const TemperatureSchedule& schedule, const HmcConfig& hmc,
                     bool final_transition, std::uint64_t seed);

// Self-normalized gradient estimate sum_k w~_k grad_theta log p(x, z_k);
// weights and samples are treated as constants.
GradientEstimate grad_theta_ais(const GenerativeModel& gen,
                                const Eigen::VectorXd& x, AisRunResult result);

// K independent samples from q with weights p/q; bit-equal to ais_run with
// T = 1 and no final transition under a shared seed. iwae_bound is the
// single-run estimate logsumexp(log w) - log K of the K-sample lower bound.
struct IwaeEstimate {
  GradientEstimate gradient;
  double iwae_bound = 0.0;
};
IwaeEstimate grad_theta_iwae(const GenerativeModel& gen,
                             const GaussianInferenceModel& inf,
                             const Eigen::VectorXd& x, int K,
                             std::uint64_t seed);

// Single-sample special case: the gradient of log p(x, z) at one q draw.
GradientEstimate grad_theta_vae(const GenerativeModel& gen,
                                const GaussianInferenceModel& inf,
                                const Eigen::VectorXd& x, std::uint64_t seed);

// Baseline: chains initialized from q take T HMC steps directly at beta = 1
// and the gradient is the unweighted average over chains. T = 0 degenerates
// to the VAE estimator averaged over the K initial samples.
GradientEstimate grad_theta_mh_hmc(const GenerativeModel& gen,
                                   const GaussianInferenceModel& inf,
                                   const Eigen::VectorXd& x, int K, int T,
                                   const HmcConfig& hmc, std::uint64_t seed);

// Reparameterized single-sample ELBO and its total phi-gradient with theta
// held fixed. Draws eps from the stream (seed, kPhi).
struct ElboEstimate {
  double elbo = 0.0;
  Eigen::VectorXd grad_phi;
};
ElboEstimate elbo_and_grad_phi(const GenerativeModel& gen,
                               const GaussianInferenceModel& inf,
                               const Eigen::VectorXd& x, std::uint64_t seed);

// Adapters turning model contracts into bridge endpoint densities.
LogDensity make_joint_density(const GenerativeModel& gen,
                              const Eigen::VectorXd& x);
LogDensity make_inference_density(const GaussianInferenceModel& inf,
                                  const Eigen::VectorXd& x);

}  // namespace annealvi

#endif  // ANNEALVI_ESTIMATORS_HPP
