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

#include "annealvi/estimators.hpp"

#include <cmath>
#include <numeric>

#include "annealvi/errors.hpp"
#include "annealvi/math.hpp"

namespace annealvi {

void TemperatureSchedule::validate() const {
  if (betas.size() < 2)
    throw ContractViolation("TemperatureSchedule: need at least two betas");
  if (betas.front() != 0.0 || betas.back() != 1.0)
    throw ContractViolation(
        "TemperatureSchedule: must start at 0 and end at 1");
  for (std::size_t t = 1; t < betas.size(); ++t)
    if (betas[t] < betas[t - 1])
      throw ContractViolation("TemperatureSchedule: betas must be monotone");
}

TemperatureSchedule TemperatureSchedule::linear(int num_temps) {
  if (num_temps < 1)
    throw ContractViolation("TemperatureSchedule::linear: T must be >= 1");
  TemperatureSchedule s;
  s.betas.resize(static_cast<std::size_t>(num_temps) + 1);
  for (int t = 0; t <= num_temps; ++t)
    s.betas[static_cast<std::size_t>(t)] =
        static_cast<double>(t) / static_cast<double>(num_temps);
  s.betas.back() = 1.0;
  return s;
}

TemperatureSchedule TemperatureSchedule::mh_hmc(int num_temps) {
  if (num_temps < 1)
    throw ContractViolation("TemperatureSchedule::mh_hmc: T must be >= 1");
  TemperatureSchedule s;
  s.betas.assign(static_cast<std::size_t>(num_temps) + 1, 1.0);
  s.betas.front() = 0.0;
  return s;
}

double AisRunResult::mean_acceptance() const {
  if (acceptance_rates.empty()) return 1.0;
  return std::accumulate(acceptance_rates.begin(), acceptance_rates.end(),
                         0.0) /
         static_cast<double>(acceptance_rates.size());
}

Eigen::VectorXd normalize_log_weights(const Eigen::VectorXd& log_w) {
  if (log_w.size() == 0)
    throw ContractViolation("normalize_log_weights: empty input");
  double m = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < log_w.size(); ++i)
    if (std::isfinite(log_w[i])) m = std::max(m, log_w[i]);
  if (!std::isfinite(m))
    throw EstimationError(
        "normalize_log_weights: no finite log weight; all chains degenerate");
  Eigen::VectorXd w(log_w.size());
  double sum = 0.0;
  for (Eigen::Index i = 0; i < log_w.size(); ++i) {
    w[i] = std::isfinite(log_w[i]) ? std::exp(log_w[i] - m) : 0.0;
    sum += w[i];
  }
  w /= sum;
  return w;
}

double effective_sample_size(const Eigen::VectorXd& log_w) {
  Eigen::VectorXd finite(log_w.size());
  Eigen::Index n = 0;
  for (Eigen::Index i = 0; i < log_w.size(); ++i)
    if (std::isfinite(log_w[i])) finite[n++] = log_w[i];
  if (n == 0)
    throw EstimationError("effective_sample_size: no finite log weight");
  const Eigen::VectorXd v = finite.head(n);
  return std::exp(2.0 * logsumexp(v) - logsumexp(2.0 * v));
}

AisRunResult anneal_run(
    const LogDensity& log_f0, const LogDensity& log_fT,
    const std::vector<double>& betas,
    const std::function<Eigen::VectorXd(int, RngStream&)>& init, int K,
    const HmcConfig& hmc, bool final_transition, std::uint64_t seed) {
  if (K < 1) throw ContractViolation("anneal_run: K must be >= 1");
  if (betas.size() < 2)
    throw ContractViolation("anneal_run: need at least two betas");
  hmc.validate();
  const int num_temps = static_cast<int>(betas.size()) - 1;

  AisRunResult res;
  res.samples.resize(static_cast<std::size_t>(K));
  res.log_weights = Eigen::VectorXd::Zero(K);

  const int num_transitions = (num_temps - 1) + (final_transition ? 1 : 0);
  std::vector<int> accepted(static_cast<std::size_t>(num_transitions), 0);

  TemperedPotential pot;
  pot.log_f0 = &log_f0;
  pot.log_fT = &log_fT;

  for (int k = 0; k < K; ++k) {
    RngStream rng = derive_stream(seed, stream::kChain,
                                  static_cast<std::uint64_t>(k));
    Eigen::VectorXd z = init(k, rng);
    double log_w = 0.0;

    for (int t = 1; t <= num_temps; ++t) {
      const double delta = betas[static_cast<std::size_t>(t)] -
                           betas[static_cast<std::size_t>(t) - 1];
      if (delta != 0.0)
        log_w += delta * (log_fT(z, nullptr) - log_f0(z, nullptr));

      const bool transition = t < num_temps || final_transition;
      if (transition) {
        pot.beta = betas[static_cast<std::size_t>(t)];
        const HmcStepResult step = hmc_step(pot, z, hmc.step_size_at(t),
                                            hmc.leapfrog_steps, rng);
        z = step.z;
        if (step.accepted) ++accepted[static_cast<std::size_t>(t) - 1];
        if (step.divergent) ++res.divergences;
      }
    }
    res.samples[static_cast<std::size_t>(k)] = std::move(z);
    res.log_weights[k] = log_w;
  }

  res.acceptance_rates.resize(static_cast<std::size_t>(num_transitions));
  for (int t = 0; t < num_transitions; ++t)
    res.acceptance_rates[static_cast<std::size_t>(t)] =
        static_cast<double>(accepted[static_cast<std::size_t>(t)]) / K;

  res.normalized_weights = normalize_log_weights(res.log_weights);
  res.ess = effective_sample_size(res.log_weights);
  return res;
}

LogDensity make_joint_density(const GenerativeModel& gen,
                              const Eigen::VectorXd& x) {
  return [&gen, x](const Eigen::VectorXd& z, Eigen::VectorXd* grad) {
    if (grad) return gen.log_joint_grad_z(x, z, *grad);
    return gen.log_joint(x, z);
  };
}

LogDensity make_inference_density(const GaussianInferenceModel& inf,
                                  const Eigen::VectorXd& x) {
  return [&inf, x](const Eigen::VectorXd& z, Eigen::VectorXd* grad) {
    if (grad) return inf.log_density_grad_z(z, x, *grad);
    return inf.log_density(z, x);
  };
}

AisRunResult ais_run(const GenerativeModel& gen,
                     const GaussianInferenceModel& inf,
                     const Eigen::VectorXd& x, int K,
                     const TemperatureSchedule& schedule, const HmcConfig& hmc,
                     bool final_transition, std::uint64_t seed) {
  schedule.validate();
  const LogDensity log_q = make_inference_density(inf, x);
  const LogDensity log_p = make_joint_density(gen, x);
  const int dim_z = gen.dim_z();
  auto init = [&inf, &x, dim_z](int, RngStream& rng) {
    return inf.sample(x, rng.normal_vector(dim_z));
  };
  return anneal_run(log_q, log_p, schedule.betas, init, K, hmc,
                    final_transition, seed);
}

GradientEstimate grad_theta_ais(const GenerativeModel& gen,
                                const Eigen::VectorXd& x,
                                AisRunResult result) {
  GradientEstimate est;
  est.grad_theta = Eigen::VectorXd::Zero(gen.theta_dim());
  for (std::size_t k = 0; k < result.samples.size(); ++k) {
    const double w = result.normalized_weights[static_cast<Eigen::Index>(k)];
    est.grad_theta += w * gen.grad_theta_log_joint(x, result.samples[k]);
  }
  if (!est.grad_theta.allFinite())
    throw EstimationError("grad_theta_ais: non-finite gradient entries");
  est.diagnostics = std::move(result);
  return est;
}

IwaeEstimate grad_theta_iwae(const GenerativeModel& gen,
                             const GaussianInferenceModel& inf,
                             const Eigen::VectorXd& x, int K,
                             std::uint64_t seed) {
  if (K < 1) throw ContractViolation("grad_theta_iwae: K must be >= 1");
  AisRunResult result;
  result.samples.resize(static_cast<std::size_t>(K));
  result.log_weights = Eigen::VectorXd::Zero(K);
  const int dim_z = gen.dim_z();
  for (int k = 0; k < K; ++k) {
    RngStream rng = derive_stream(seed, stream::kChain,
                                  static_cast<std::uint64_t>(k));
    Eigen::VectorXd z = inf.sample(x, rng.normal_vector(dim_z));
    result.log_weights[k] = gen.log_joint(x, z) - inf.log_density(z, x);
    result.samples[static_cast<std::size_t>(k)] = std::move(z);
  }
  result.normalized_weights = normalize_log_weights(result.log_weights);
  result.ess = effective_sample_size(result.log_weights);

  IwaeEstimate est;
  est.iwae_bound = logsumexp(result.log_weights) -
                   std::log(static_cast<double>(K));
  est.gradient = grad_theta_ais(gen, x, std::move(result));
  return est;
}

GradientEstimate grad_theta_vae(const GenerativeModel& gen,
                                const GaussianInferenceModel& inf,
                                const Eigen::VectorXd& x, std::uint64_t seed) {
  return grad_theta_iwae(gen, inf, x, 1, seed).gradient;
}

GradientEstimate grad_theta_mh_hmc(const GenerativeModel& gen,
                                   const GaussianInferenceModel& inf,
                                   const Eigen::VectorXd& x, int K, int T,
                                   const HmcConfig& hmc, std::uint64_t seed) {
  if (K < 1) throw ContractViolation("grad_theta_mh_hmc: K must be >= 1");
  if (T < 0) throw ContractViolation("grad_theta_mh_hmc: T must be >= 0");

  AisRunResult result;
  if (T == 0) {
    // No posterior transitions: the unweighted average over initial
    // q-samples, which for K = 1 is the VAE estimator.
    result.samples.resize(static_cast<std::size_t>(K));
    result.log_weights = Eigen::VectorXd::Zero(K);
    const int dim_z = gen.dim_z();
    for (int k = 0; k < K; ++k) {
      RngStream rng = derive_stream(seed, stream::kChain,
                                    static_cast<std::uint64_t>(k));
      Eigen::VectorXd z = inf.sample(x, rng.normal_vector(dim_z));
      result.log_weights[k] = gen.log_joint(x, z) - inf.log_density(z, x);
      result.samples[static_cast<std::size_t>(k)] = std::move(z);
    }
    result.ess = effective_sample_size(result.log_weights);
  } else {
    result = ais_run(gen, inf, x, K, TemperatureSchedule::mh_hmc(T), hmc,
                     /*final_transition=*/true, seed);
  }
  // The baseline weights samples uniformly rather than by AIS weight.
  result.normalized_weights =
      Eigen::VectorXd::Constant(K, 1.0 / static_cast<double>(K));
  return grad_theta_ais(gen, x, std::move(result));
}

ElboEstimate elbo_and_grad_phi(const GenerativeModel& gen,
                               const GaussianInferenceModel& inf,
                               const Eigen::VectorXd& x, std::uint64_t seed) {
  RngStream rng = derive_stream(seed, stream::kPhi);
  const Eigen::VectorXd eps = rng.normal_vector(inf.dim_z());

  Eigen::VectorXd mu, log_sigma;
  inf.encode(x, mu, log_sigma);
  const Eigen::ArrayXd sigma = log_sigma.array().exp();
  const Eigen::VectorXd z = mu.array() + sigma * eps.array();

  Eigen::VectorXd grad_z_log_p;
  const double log_p = gen.log_joint_grad_z(x, z, grad_z_log_p);
  const double log_q = log_diag_normal(z, mu, log_sigma);

  // Total derivative through z = mu + sigma .* eps. The mu-route through
  // log q cancels its explicit partial; the log-sigma route leaves the
  // entropy term +1 per coordinate.
  const Eigen::VectorXd grad_mu = grad_z_log_p;
  const Eigen::VectorXd grad_log_sigma =
      (grad_z_log_p.array() * sigma * eps.array() + 1.0).matrix();

  ElboEstimate est;
  est.elbo = log_p - log_q;
  est.grad_phi = inf.grad_phi_from_outputs(x, grad_mu, grad_log_sigma);
  if (!std::isfinite(est.elbo) || !est.grad_phi.allFinite())
    throw EstimationError("elbo_and_grad_phi: non-finite result");
  return est;
}

}  // namespace annealvi
