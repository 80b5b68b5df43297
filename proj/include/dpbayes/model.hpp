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

#ifndef DPBAYES_MODEL_HPP_
#define DPBAYES_MODEL_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dpbayes/common.hpp"
#include "dpbayes/rng.hpp"

namespace dpbayes {

struct DataPoint {
  Vector features;
  std::optional<double> label;  // classification labels live in {-1, +1}
};

struct Dataset {
  std::vector<DataPoint> points;
  double norm_bound = 1.0;  // declared bound on feature norms

  std::int64_t size() const { return static_cast<std::int64_t>(points.size()); }
  int feature_dim() const {
    return points.empty() ? 0 : static_cast<int>(points[0].features.size());
  }
};

// Euclidean-ball parameter domain; samplers project onto it after each step.
struct Ball {
  Vector center;
  double radius = 0.0;

  bool contains(const Vector& theta, double slack = 1e-12) const {
    return (theta - center).norm() <= radius + slack;
  }
  Vector project(const Vector& theta) const {
    const Vector d = theta - center;
    const double n = d.norm();
    if (n <= radius) return theta;
    return center + d * (radius / n);
  }
};

// The model contract consumed by every sampler and oracle.  Instances are
// immutable after construction and safe to share across chains.
struct ModelSpec {
  int dim = 1;
  // Declared bounds: sup |log_lik| and sup ||grad_log_lik||_2 over the
  // declared domains.  Unbounded models (the conjugate oracles) leave them
  // unset; operations that need them refuse to run without them.
  std::optional<double> bound_b;
  std::optional<double> bound_l;
  std::optional<Ball> domain;  // unset: unconstrained

  std::function<double(const Vector&, const DataPoint&)> log_lik;
  std::function<Vector(const Vector&, const DataPoint&)> grad_log_lik;
  std::function<double(const Vector&)> log_prior;
  std::function<Vector(const Vector&)> grad_log_prior;

  bool in_domain(const Vector& theta) const {
    return !domain || domain->contains(theta);
  }
  Vector project(const Vector& theta) const {
    return domain ? domain->project(theta) : theta;
  }
};

// Logistic regression with features clipped to norm <= R and a Gaussian
// prior N(0, C^2 I) truncated to the ball ||theta|| <= C.  The truncation
// makes the declared bounds exact: B = log(1 + exp(C R)), L = R.
struct LogisticModel {
  int dim = 1;
  double C = 1.0;
  double R = 1.0;

  ModelSpec spec() const;
};

ModelSpec make_logistic_model(int dim, double C, double R = 1.0);

// 1-d conjugate oracle: x ~ N(theta, noise_var), theta ~ N(0, prior_var).
// prior_var may be +inf (flat prior).  Log-likelihood is unbounded, so no
// B/L are declared.
struct GaussianMeanModel {
  double prior_var = 1.0;
  double noise_var = 1.0;

  ModelSpec spec() const;
  // Closed-form posterior (mean, variance) given the data.
  std::pair<double, double> posterior(const Dataset& data) const;
};

ModelSpec make_gaussian_mean_model(double prior_var, double noise_var);

// Bounded-log-likelihood conjugate oracle: x in {0,1},
// theta in [p_min, 1 - p_min], Beta(a, b) prior truncated to the domain.
// B = -log p_min.
struct BetaBernoulliModel {
  double a = 1.0;
  double b = 1.0;
  double p_min = 0.1;

  ModelSpec spec() const;
  double bound_b() const;
  double fisher_info(double theta) const;

  // Tempered-posterior Beta parameters for s successes out of n, with both
  // likelihood and prior raised to the power rho.
  std::pair<double, double> tempered_params(std::int64_t s, std::int64_t n,
                                            double rho) const;
  // Moments and exact inverse-CDF sampling of Beta(alpha,beta) truncated to
  // [p_min, 1 - p_min].
  double truncated_mean(double alpha, double beta) const;
  double truncated_var(double alpha, double beta) const;
  double sample_truncated(double alpha, double beta, Rng& rng) const;
};

ModelSpec make_beta_bernoulli_model(double a, double b, double p_min);

// y | x, theta ~ N(theta^T x, noise_var), theta ~ N(0, prior_var I).
// Gaussian posterior in closed form for oracle comparison.
struct LinearRegressionModel {
  int dim = 1;
  double noise_var = 1.0;
  double prior_var = 1.0;

  ModelSpec spec() const;
  std::pair<Vector, Matrix> posterior(const Dataset& data) const;
};

ModelSpec make_linear_regression_model(int dim, double noise_var,
                                       double prior_var);

// rho * (sum_i log_lik(theta, x_i) + log_prior(theta)); likelihood and prior
// are both tempered.  Throws std::domain_error outside the parameter domain.
double log_posterior_unnorm(const ModelSpec& model, const Dataset& data,
                            const Vector& theta, double rho);

// rho * (grad_log_prior + (N/|indices|) sum_{i in indices} grad_log_lik).
// Ascent direction on the log-posterior; samplers negate as needed.
Vector grad_log_posterior_minibatch(const ModelSpec& model, const Dataset& data,
                                    std::span<const std::int64_t> indices,
                                    const Vector& theta, double rho);

Vector grad_log_posterior_full(const ModelSpec& model, const Dataset& data,
                               const Vector& theta, double rho);

// Rescales every feature vector with norm > R to norm exactly R; the result
// carries norm_bound = R.  Idempotent; labels untouched.
Dataset clip_dataset(const Dataset& data, double R);

}  // namespace dpbayes

#endif  // DPBAYES_MODEL_HPP_
