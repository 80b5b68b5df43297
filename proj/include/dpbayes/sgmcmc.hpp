// Copyright 2026 The dpbayes Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPBAYES_SGMCMC_HPP_
#define DPBAYES_SGMCMC_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "dpbayes/model.hpp"
#include "dpbayes/ops.hpp"
#include "dpbayes/privacy.hpp"
#include "dpbayes/rng.hpp"

namespace dpbayes {

// Stepsize schedule; decay follows eta_t = a (b + t)^(-gamma) with
// gamma in (0.5, 1], t starting at 1.
struct Schedule {
  enum class Kind { kConstant, kDecay, kDecayFloor };
  Kind kind = Kind::kConstant;
  double a = 0.0, b = 0.0, gamma = 1.0, eta0 = 1e-4;

  static Schedule constant(double eta0);
  static Schedule decay(double a, double b, double gamma);
  static Schedule decay_floor(double a, double b, double gamma, double eta0);
  double at(std::int64_t t) const;
};

struct SamplerConfig {
  std::int64_t tau = 10;    // minibatch size
  std::int64_t passes = 50; // data passes T; iterations = floor(N*T/tau)
  Schedule schedule = Schedule::constant(1e-4);
  double burn_in_fraction = 0.5;
  std::uint64_t seed = 0;
  std::int64_t collect_every = 1;
  double rho = 1.0;  // tempering of the target

  std::int64_t iterations(std::int64_t N) const {
    return N * passes / tau;
  }
};

struct PrivateSamplerConfig {
  SamplerConfig base;
  double epsilon = 1.0;
  double delta = 1e-4;
  // Test hook for the noise audit; multiplies the injected variance.
  // Anything other than 1.0 voids the guarantee and fails the audit.
  double debug_noise_scale = 1.0;
};

enum class Phase { kBurnin, kSampling };

struct LedgerEvent {
  std::string label;
  PrivacyBudget budget;
};

struct SampleTrace {
  struct Iterate {
    std::int64_t t;
    Vector theta;
    double eta;
    double noise_var;
    Phase phase;
  };
  std::vector<Iterate> iterates;
  std::vector<LedgerEvent> events;

  // Mean of sampling-phase iterates (a postprocessing of released values).
  Vector posterior_mean() const;
  // Columns: t, phase, eta, noise_var, theta_0..theta_{d-1}.
  void write_csv(std::ostream& out) const;
};

struct HmcState {
  Vector theta;
  Vector v;
  double alpha = 0.0;  // SGNHT thermostat
};

// --- SGLD ------------------------------------------------------------

// One non-private SGLD iterate: a Langevin step on the tempered posterior
// with drift (eta_t/2) * grad log-posterior estimate and injected noise of
// per-coordinate variance exactly eta_t; fresh uniform minibatch without
// replacement.
Vector sgld_step(const ModelSpec& model, const Dataset& data,
                 const Vector& theta, std::int64_t t, const SamplerConfig& cfg,
                 Rng& rng);

SampleTrace sgld_run(const ModelSpec& model, const Dataset& data,
                     const SamplerConfig& cfg, Vector theta1);

// DP-SGLD: same dynamics with per-coordinate noise variance
// sgld_noise_variance(...).  Refuses to run when the T-condition fails;
// theta1 must be chosen independently of the data.  Every iterate is
// released into the trace; the whole run charges (epsilon, delta).
SampleTrace dp_sgld_run(const ModelSpec& model, const Dataset& data,
                        const PrivateSamplerConfig& cfg, Vector theta1);

// Decaying schedule for which the privacy branch of the noise variance
// equals the eta_t floor exactly at t = alpha*N*T/tau and drops below it
// after; the sampler runs exact SGLD from there on.
Schedule alpha_phase_schedule(double alpha, std::int64_t N, std::int64_t T,
                              std::int64_t tau, double L, double epsilon,
                              double delta);

// --- SGHMC -----------------------------------------------------------

// Momentum form: theta' = theta + v;
// v' = v - eta_t * grad - a v + N(0, 2 (a - b_hat) eta_t I), a > b_hat >= 0.
HmcState sghmc_step(const ModelSpec& model, const Dataset& data,
                    const HmcState& state, std::int64_t t,
                    const SamplerConfig& cfg, double a, double b_hat, Rng& rng);

SampleTrace sghmc_run(const ModelSpec& model, const Dataset& data,
                      const SamplerConfig& cfg, double a, double b_hat,
                      Vector theta1);

// True iff 2 (a - b_hat) / eta_t clears the DP-SGLD privacy coefficient;
// private runs refuse to step when false.
bool dp_sghmc_check(double a, double b_hat, double eta_t, std::int64_t N,
                    std::int64_t T, std::int64_t tau, double L, double epsilon,
                    double delta);

SampleTrace dp_sghmc_run(const ModelSpec& model, const Dataset& data,
                         const PrivateSamplerConfig& cfg, double a,
                         double b_hat, Vector theta1);

// --- SGNHT -----------------------------------------------------------

// Thermostat form: v' = v - alpha v - eta_t * grad + N(0, 2 a eta_t I);
// theta' = theta + v; alpha' = alpha + (v'^T v'/d - eta_t).
HmcState sgnht_step(const ModelSpec& model, const Dataset& data,
                    const HmcState& state, std::int64_t t,
                    const SamplerConfig& cfg, double a, Rng& rng);

SampleTrace sgnht_run(const ModelSpec& model, const Dataset& data,
                      const SamplerConfig& cfg, double a, Vector theta1);

bool dp_sgnht_check(double a, double eta_t, std::int64_t N, std::int64_t T,
                    std::int64_t tau, double L, double epsilon, double delta);

SampleTrace dp_sgnht_run(const ModelSpec& model, const Dataset& data,
                         const PrivateSamplerConfig& cfg, double a,
                         Vector theta1);

// --- SGFS ------------------------------------------------------------

// Projection onto the PSD cone by clipping negative eigenvalues to zero.
Matrix psd_project(const Matrix& symmetric);

// Unbiased sample covariance of the gradients plus a symmetric Gaussian
// perturbation W (W_ij = W_ji ~ N(0, 49 F_norm^4 sigma2)), projected onto
// the PSD cone by eigenvalue clipping.
Matrix private_covariance(const std::vector<Vector>& grads, double F_norm,
                          double sigma2, Rng& rng);

// DP-SGFS with preconditioner ((tau+N)N/tau) I_hat + 4 F F^T / eta_t and
// privacy noise z ~ N(0, max(sigma^2, 1/(N^2 eta_t)) I) pushed through F.
// Charges (2 epsilon, 2 delta).
SampleTrace dp_sgfs_run(const ModelSpec& model, const Dataset& data,
                        const PrivateSamplerConfig& cfg, const Matrix& F,
                        const std::function<double(std::int64_t)>& kappa,
                        Vector theta1);

// --- Hybrid ----------------------------------------------------------

// Phase 1: one posterior sample at epsilon/2.  Phase 2: DP-SGLD at
// (epsilon/2, delta) initialized there, constant small stepsize, no
// burn-in.  The trace carries exactly two ledger events summing to
// (epsilon, delta).
SampleTrace hybrid_run(const ModelSpec& model, const Dataset& data,
                       double epsilon, double delta, const OpsConfig& ops_cfg,
                       const SamplerConfig& sg_cfg);

}  // namespace dpbayes

#endif  // DPBAYES_SGMCMC_HPP_
