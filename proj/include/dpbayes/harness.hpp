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

#ifndef DPBAYES_HARNESS_HPP_
#define DPBAYES_HARNESS_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dpbayes/baselines.hpp"
#include "dpbayes/model.hpp"
#include "dpbayes/ops.hpp"
#include "dpbayes/sgmcmc.hpp"

namespace dpbayes {

// Fraction of test points with sign(theta.x) == y; exact ties count 0.5.
double accuracy(const Vector& theta, const Dataset& test);

// Mean logistic loss on the test set.
double nll(const Vector& theta, const Dataset& test);

enum class Method { kOps, kHybrid, kDpSgld, kObjPert, kOutPert, kNonPrivateErm };

std::string method_name(Method m);
std::optional<Method> parse_method(const std::string& name);

struct BenchmarkConfig {
  // Logistic model / ERM settings.
  double C = 2.0;
  double lambda_reg = 1e-6;
  double train_fraction = 0.8;
  double clip_radius = 1.0;
  bool standardize = false;  // z-score per cell with train statistics

  OpsConfig ops;  // epsilon and seed are overwritten per cell

  // DP-SGLD settings for the dp-sgld and hybrid methods; zero values are
  // replaced by ceil(sqrt(N)) (tau, passes) and by a stepsize small enough
  // that the eta floor binds (eta0).
  std::int64_t sg_tau = 0;
  std::int64_t sg_passes = 0;
  double sg_eta0 = 0.0;

  std::uint64_t master_seed = 0;
};

struct BenchmarkRow {
  std::string method;
  double epsilon = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  double test_accuracy = 0.0;
  double test_nll = 0.0;
  double runtime_ms = 0.0;
  double ledger_epsilon = 0.0;
  double ledger_delta = 0.0;
  std::string error;  // empty on success; failures are recorded, not fatal
};

struct BenchmarkResult {
  std::vector<BenchmarkRow> rows;

  void write_csv(std::ostream& out) const;
  // Per (method, epsilon) mean and standard error of accuracy and NLL.
  void write_summary_csv(std::ostream& out) const;
  double mean_accuracy(Method m, double epsilon) const;
};

// Cartesian product of (method, epsilon, seed); each cell splits the data,
// trains privately on the train split and evaluates on the test split.
// Cells run concurrently and are deterministic given (config, seed list).
BenchmarkResult run_benchmark(const std::vector<Method>& methods,
                              const Dataset& data,
                              const std::vector<double>& eps_grid, double delta,
                              const std::vector<std::uint64_t>& seeds,
                              const BenchmarkConfig& cfg);

// Empirical asymptotic relative efficiency of the one-posterior-sample
// estimator: simulates `replicates` datasets of size n from theta0, draws
// one exact tempered-posterior sample each and returns n * I(theta0) *
// Var(samples).  The tempered draw uses the conjugate closed form, not
// MCMC.
double are_estimate(const BetaBernoulliModel& model, double theta0,
                    std::int64_t n, double epsilon, std::int64_t replicates,
                    std::uint64_t seed);

struct MomentReport {
  double trace_mean = 0.0;
  double trace_var = 0.0;
  double se_mean = 0.0;
  double se_var = 0.0;
  double z_mean = 0.0;
  double z_var = 0.0;
  bool mean_ok = false;
  bool var_ok = false;
};

// Compares the sampling-phase trace mean/variance (first coordinate) with
// the oracle using batch-means standard errors (30 batches); passes when
// both z-scores are within tol.
MomentReport posterior_moment_check(const SampleTrace& trace,
                                    double oracle_mean, double oracle_var,
                                    double tol);

struct NoiseAudit {
  bool ok = false;
  std::int64_t checked = 0;
  double max_abs_diff = 0.0;
};

// Recomputes the planner formula for every iterate and compares with the
// noise variance recorded in the trace; any mismatch fails the audit.
using NoisePlanner = std::function<double(std::int64_t t, double eta)>;
NoiseAudit audit_trace_noise(const SampleTrace& trace,
                             const NoisePlanner& planner);

NoisePlanner sgld_noise_planner(std::int64_t N, std::int64_t T,
                                std::int64_t tau, double L, double epsilon,
                                double delta);

}  // namespace dpbayes

#endif  // DPBAYES_HARNESS_HPP_
