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

#ifndef DPBAYES_OPS_HPP_
#define DPBAYES_OPS_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "dpbayes/model.hpp"
#include "dpbayes/privacy.hpp"
#include "dpbayes/rng.hpp"

namespace dpbayes {

enum class OpsBackend { kRandomWalkMh, kMala, kSgnht };

struct OpsConfig {
  double epsilon = 1.0;
  OpsBackend backend = OpsBackend::kRandomWalkMh;
  std::int64_t chain_length = 20000;
  std::int64_t burn_in = -1;     // -1: half of chain_length
  double proposal_scale = 0.0;   // <= 0: tuned from a short pilot run
  std::uint64_t seed = 0;

  // SGNHT backend knobs (used for high-dimensional targets).
  double sgnht_eta = 1e-4;
  double sgnht_a = 0.1;
  std::int64_t sgnht_tau = 0;  // 0: min(N, 32)
};

struct OpsResult {
  Vector theta;
  double rho = 1.0;
  PrivacyBudget charge;     // (epsilon, 0) under exact-sampling idealization
  double acceptance_rate = 0.0;
  // Post-burn-in chain states with their unnormalized tempered
  // log-posterior values, for diagnostics and trace export.
  std::vector<Vector> chain;
  std::vector<double> chain_log_post;

  // Columns: iter, theta_0..theta_{d-1}, log_post.
  void write_trace_csv(std::ostream& out) const;
};

// Tempering exponent rho = min(1, epsilon / (4B)).
double ops_scale(double B, double epsilon);

// Releases the final post-burn-in state of an MCMC chain targeting the
// tempered posterior at rho = ops_scale(B, epsilon).  Deterministic given
// the seed.  Models without a declared B are accepted only at
// epsilon = +inf (rho = 1; used by the conjugate oracle tests).
OpsResult ops_sample(const ModelSpec& model, const Dataset& data,
                     const OpsConfig& cfg);

// Exact tempered posterior over a finite support, normalized in log space.
struct DiscretePosterior {
  std::vector<Vector> support;
  Vector probs;
};

DiscretePosterior posterior_enumerate(const std::vector<Vector>& support,
                                      const ModelSpec& model,
                                      const Dataset& data, double rho);

struct DpRatioReport {
  double max_log_ratio = 0.0;
  double claim = 0.0;
  bool ok = false;
  std::int64_t trials = 0;
};

// Brute-force check of the posterior-sampling privacy bound: for `trials`
// random neighbor pairs (X, X') of size <= max_n, the maximum over the
// support of |log p(theta|X) - log p(theta|X')| at tempering rho must not
// exceed epsilon_claim.
DpRatioReport verify_dp_ratio(
    const std::vector<Vector>& support, const ModelSpec& model,
    const std::function<DataPoint(Rng&)>& point_sampler, std::int64_t max_n,
    double rho, double epsilon_claim, std::int64_t trials, std::uint64_t seed);

}  // namespace dpbayes

#endif  // DPBAYES_OPS_HPP_
