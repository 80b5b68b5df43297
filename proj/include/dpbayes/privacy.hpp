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

#ifndef DPBAYES_PRIVACY_HPP_
#define DPBAYES_PRIVACY_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dpbayes/common.hpp"
#include "dpbayes/rng.hpp"

namespace dpbayes {

// An (epsilon, delta) differential-privacy guarantee.  All logarithms in the
// calibration formulas below are natural logs.
struct PrivacyBudget {
  double epsilon = 0.0;
  double delta = 0.0;
};

// Append-only record of privacy-consuming events.  Totals follow basic
// composition (coordinate-wise sums).  The ledger records the planned,
// a-priori calibrated budget of each release, not a data-dependent audit.
class PrivacyLedger {
 public:
  struct Event {
    std::string label;
    PrivacyBudget budget;
  };

  void charge(std::string label, PrivacyBudget budget);
  const std::vector<Event>& events() const { return events_; }
  PrivacyBudget total() const { return total_; }

  // Columns: event_label, epsilon, delta, cumulative_epsilon,
  // cumulative_delta.
  void write_csv(std::ostream& out) const;

 private:
  std::vector<Event> events_;
  PrivacyBudget total_;
};

// Per-run Gaussian noise plan for a private sampler.
struct NoisePlan {
  double sigma2 = 0.0;  // per-coordinate variance at the reference stepsize
  PrivacyBudget per_iter_budget;
  std::int64_t iterations = 1;
};

// Basic composition: (sum eps_i, sum delta_i).  Errors on an empty list.
PrivacyBudget compose_basic(const std::vector<PrivacyBudget>& budgets);

// k-fold adaptive composition of (epsilon, delta) mechanisms at slack
// delta_prime:
//   eps' = sqrt(2 k ln(1/delta')) eps + k eps (e^eps - 1),
//   delta_total = k delta + delta'.
PrivacyBudget compose_advanced(double epsilon, double delta, std::int64_t k,
                               double delta_prime);

// Running an (eps, delta) mechanism on a uniform random gamma-fraction of
// the data gives (2 gamma eps, delta).  Requires eps < 1; refuses otherwise
// rather than silently voiding the guarantee.
PrivacyBudget amplify_subsample(PrivacyBudget budget, double gamma);

// Minimal Gaussian-mechanism standard deviation:
//   sigma = sensitivity sqrt(2 ln(1.25/delta)) / epsilon,  epsilon in (0,1).
double gaussian_sigma(double sensitivity, double epsilon, double delta);

// An exact sampler at epsilon-DP run only approximately, with L1 distance
// at most l1_gap from the target law, is (epsilon, (1+e^eps) l1_gap)-DP.
PrivacyBudget degrade_approx_sampling(double epsilon, double l1_gap);

// Per-coordinate variance of the DP-SGLD injected noise at stepsize eta_t:
//   max( (128 N T L^2/(tau eps^2)) ln(2.5NT/(tau delta)) ln(2/delta) eta_t^2,
//        eta_t ).
// The eta_t floor keeps the iterate a valid SGLD step.
double sgld_noise_variance(std::int64_t N, std::int64_t T, std::int64_t tau,
                           double L, double epsilon, double delta,
                           double eta_t);

// The eta_t^2 coefficient of the privacy branch above; also the friction
// threshold used by the momentum samplers.
double sgld_privacy_coefficient(std::int64_t N, std::int64_t T,
                                std::int64_t tau, double L, double epsilon,
                                double delta);

// The DP-SGLD accounting plan: per-iteration loss after subsampling
// amplification is eps/(2 sqrt(2 (NT/tau) ln(2/delta))) with failure share
// tau*delta/(2NT); advanced composition over floor(NT/tau) iterations at
// slack delta/2 recovers at most (eps, delta).
NoisePlan plan_sgld_noise(std::int64_t N, std::int64_t T, std::int64_t tau,
                          double L, double epsilon, double delta,
                          double eta_ref);

// True iff T >= eps^2 N / (32 tau ln(2/delta)); the private samplers refuse
// to run when false.
bool check_T_condition(std::int64_t N, std::int64_t T, std::int64_t tau,
                       double epsilon, double delta);

double T_condition_threshold(std::int64_t N, std::int64_t tau, double epsilon,
                             double delta);

// Non-spherical Gaussian mechanism: returns F w with w iid N(0, s^2),
// s = (1 + sqrt(2 ln(1/delta))) / epsilon.  F must be full rank.
Vector nonspherical_gaussian_noise(const Matrix& F, double epsilon,
                                   double delta, Rng& rng);

double nonspherical_noise_scale(double epsilon, double delta);

// Worst-case Frobenius-norm change of the unbiased sample covariance when
// one of n points (norms <= L) is replaced: 7 L^2 / (n - 1).  Requires n > 4.
double cov_sensitivity_bound(double L, std::int64_t n);

}  // namespace dpbayes

#endif  // DPBAYES_PRIVACY_HPP_
